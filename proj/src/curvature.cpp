#include "pcurv/curvature.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

namespace pcurv {

EMat Geometry::metric(int t) const {
    auto it = metric_override.find(t);
    if (it != metric_override.end()) return it->second;
    if (t == 1) return q;
    return canonical_secondary_metric(q, h, t);
}

TorsionSymbol Geometry::torsion(int t) const {
    auto it = torsion_override.find(t);
    if (it != torsion_override.end()) return it->second;
    return canonical_torsion(*F, symbol_tables(M, L, t, t), torsion_kind, torsion_scale);
}

std::vector<Frob> Geometry::lifts(int t) const {
    std::vector<Frob> r;
    for (int i = 0; i < n(); ++i) r.push_back(realize(M, L, t, i));
    return r;
}

ChristoffelModPi Geometry::christoffel(int t) const {
    if (flavor == Flavor::Chern) return christoffel_chern_mod_pi(metric(t), lifts(t));
    return christoffel_lc_mod_pi(metric(t), torsion(t), lifts(t));
}

ConnectionAtPoint Geometry::connection(int t, const EMat& a) const {
    if (flavor == Flavor::Chern) return solve_chern(metric(t), lifts(t), a, method);
    return solve_levi_civita(metric(t), torsion(t), lifts(t), a, method);
}

namespace {

CurvatureTensor empty_tensor(const Field& F, int n, int N) {
    CurvatureTensor T;
    T.n = n;
    T.N = N;
    T.upper.assign((size_t)N * n * n * N, F.rzero());
    T.lower.assign((size_t)n * n * N * N, F.rzero());
    return T;
}

std::vector<Res> delta_pi(const Field& F, const std::vector<Frob>& lifts) {
    std::vector<Res> r;
    for (auto& fr : lifts) r.push_back(F.residue(F.delta(fr, F.pi())));
    return r;
}

}  // namespace

void lower_curvature(CurvatureTensor& T, const RMat& qbar, int twist) {
    const Field& F = *qbar.d[0].F;
    RMat qf = rfrob(qbar, twist);
    for (int i = 0; i < T.n; ++i)
        for (int j = 0; j < T.n; ++j)
            for (int k = 0; k < T.N; ++k)
                for (int l = 0; l < T.N; ++l) {
                    Res acc = F.rzero();
                    for (int m = 0; m < T.N; ++m) acc = acc + T.up(m, i, j, k) * qf(m, l);
                    T.low(i, j, k, l) = acc;
                }
}

CurvatureTensor curvature_reduced(const Geometry& g) {
    const Field& F = *g.F;
    int n = g.n(), N = g.N(), c = g.M.c;
    CurvatureTensor T = empty_tensor(F, n, N);
    ChristoffelModPi G1 = g.christoffel(1);
    std::vector<Res> dpi = delta_pi(F, g.lifts(1));
    bool abelian = g.M.is_abelian();
    ChristoffelModPi G2;
    SymbolTables st;
    if (!abelian) {
        G2 = g.christoffel(2);
        st = symbol_tables(g.M, g.L, 1, 1);
    }
    for (int k = 0; k < N; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < N; ++l) {
                    Res v = dpi[i] * F.rfrob(G1.upper[j](k, l), c) - dpi[j] * F.rfrob(G1.upper[i](k, l), c);
                    if (!abelian) v = v - G2.upper[st.star[i][j]](k, l) + G2.upper[st.star[j][i]](k, l);
                    T.up(k, i, j, l) = v;
                }
    lower_curvature(T, residue(g.q), 2 * c);
    return T;
}

Res composed_delta_residue(const Field& F, const Frob& a, const Frob& b, const Elem& x) {
    return F.residue(F.delta(F.compose(a, b), x));
}

CurvatureTensor tery_rhs(const Geometry& g) {
    if (!g.M.is_abelian()) throw Error("NotAbelian", "tery_rhs needs an abelian degree-c piece");
    const Field& F = *g.F;
    int n = g.n();
    if (g.N() != n) throw Error("SchemaError", "tery_rhs needs N = n");
    auto lifts = g.lifts(1);
    std::vector<std::vector<RMat>> D(n, std::vector<RMat>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) D[a][b] = residue(delta(F.compose(lifts[a], lifts[b]), g.q));
    Res mhalf = F.rneg(F.rinv(F.rint(2)));
    CurvatureTensor T = empty_tensor(F, n, n);
    T.upper.clear();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    T.low(i, j, k, l) =
                        mhalf * (D[j][l](i, k) - D[j][k](i, l) - D[i][l](j, k) + D[i][k](j, l));
    return T;
}

std::vector<SymmetryViolation> symmetry_report(const CurvatureTensor& T) {
    std::vector<SymmetryViolation> out;
    int n = T.n, N = T.N;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    const Res& x = T.low(i, j, k, l);
                    if (!(x + T.low(j, i, k, l)).is_zero()) out.push_back({"antisym_ij", {i, j, k, l}});
                    if (!(x + T.low(i, j, l, k)).is_zero()) out.push_back({"antisym_kl", {i, j, k, l}});
                    if (N != n) continue;
                    if (!(x + T.low(i, k, l, j) + T.low(i, l, j, k)).is_zero())
                        out.push_back({"bianchi", {i, j, k, l}});
                    if (x != T.low(k, l, i, j)) out.push_back({"pair", {i, j, k, l}});
                }
    return out;
}

namespace {

// phi_i^{(t1)} phi_j^{(t2)} (x) at x = a, as a matrix
EMat composite(const Geometry& g, int i, int t1, int j, int t2, const EMat& a) {
    const Field& F = *g.F;
    Frob fi = realize(g.M, g.L, t1, i);
    EMat b = frob_power_entries(a, F.ppow(fi.s)) * g.connection(t1, a).lambda[i];
    EMat inner = g.connection(t2, apply_inv(fi, b)).lambda[j];
    return frob_power_entries(b, F.ppow(t2 * g.M.c)) * apply(fi, inner);
}

EMat bracket(const Geometry& g, int k, int t, const EMat& a) {
    const Field& F = *g.F;
    return frob_power_entries(a, F.ppow(t * g.M.c)) * g.connection(t, a).lambda[k];
}

}  // namespace

EMat curvature_full_at_point(const Geometry& g, int i, int t1, int j, int t2, const EMat& a) {
    int kij = star(g.M, g.L, i, j, t1, t2), kji = star(g.M, g.L, j, i, t2, t1);
    EMat d = composite(g, i, t1, j, t2, a) - composite(g, j, t2, i, t1, a) - bracket(g, kij, t1 + t2, a) +
             bracket(g, kji, t1 + t2, a);
    return div_pi(d);
}

MultiplicativeCurvature multiplicative_curvature_identity(const Geometry& g, int i, int j) {
    const Field& F = *g.F;
    int N = g.N();
    EMat one = identity(F, N);
    int kij = star(g.M, g.L, i, j, 1, 1), kji = star(g.M, g.L, j, i, 1, 1);
    MultiplicativeCurvature out;
    auto c2 = g.connection(2, one);
    out.star = composite(g, i, 1, j, 1, one) * inverse(c2.lambda[kij]) * c2.lambda[kji] *
               inverse(composite(g, j, 1, i, 1, one));
    auto c1 = g.connection(1, one);
    EMat lij = g.connection(1, c1.lambda[j]).lambda[i];
    EMat lji = g.connection(1, c1.lambda[i]).lambda[j];
    out.naive = lij * inverse(lji);
    EMat id = identity(F, N, out.star.d[0].prec);
    out.rstar = residue(div_pi(out.star - id));
    out.rnaive = residue(div_pi(out.naive - identity(F, N, out.naive.d[0].prec)));
    return out;
}

ChernCurvature chern_curvature(const Geometry& g, const EMat& q2c, const Elem& lambda) {
    const Field& F = *g.F;
    EMat diff = with_prec(q2c - scale(lambda, g.q), 2);
    if (!is_zero(diff)) throw Error("NotConformal", "secondary metric is not conformal to q mod pi^2");
    int n = g.n(), c = g.M.c;
    auto lifts = g.lifts(1);
    Res li = F.rinv(F.rfrob(F.residue(lambda), 2 * c));
    Res half = F.rinv(F.rint(2));
    ChernCurvature out;
    out.r = rzeros(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.r(i, j) = half * li *
                          (composed_delta_residue(F, lifts[i], lifts[j], lambda) -
                           composed_delta_residue(F, lifts[j], lifts[i], lambda));
    return out;
}

std::vector<RMat> chern_tensor(const Geometry& g) {
    std::vector<RMat> out;
    for (int h = 0; h < g.N(); ++h) out.push_back(chern_curvature(g, canonical_secondary_metric(g.q, h, 2), g.q(h, h)).r);
    return out;
}

RMat epsilon_matrix(const Field& F, const std::vector<Frob>& lifts) {
    int n = (int)lifts.size();
    std::vector<Res> dpi = delta_pi(F, lifts);
    RMat e = rzeros(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            e(i, j) = F.rfrob(dpi[i] * F.rfrob(dpi[j], lifts[i].s), -(lifts[i].s + lifts[j].s));
    return e;
}

std::vector<KNWitness> kulkarni_nomizu(const Field& F, const RMat& e, const RMat& c) {
    (void)F;
    int n = e.rows;
    std::vector<KNWitness> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Res v = e(j, l) * c(i, k) - e(j, k) * c(i, l) - e(i, l) * c(j, k) + e(i, k) * c(j, l);
                    if (!v.is_zero()) out.push_back({{i, j, k, l}, v});
                }
    return out;
}

std::vector<KNWitness> kn_witnesses(const Geometry& g) {
    if (!g.M.is_abelian()) throw Error("NotAbelian", "the Kulkarni-Nomizu test needs an abelian degree-c piece");
    const Field& F = *g.F;
    RMat c = g.q.map([&](const Elem& x) { return F.digit(x, 1); });
    return kulkarni_nomizu(F, epsilon_matrix(F, g.lifts(1)), c);
}

TwistedMatrix operator*(const TwistedMatrix& a, const TwistedMatrix& b) {
    return {a.m * rfrob(b.m, a.s), a.s + b.s};
}

TwistedMatrix operator-(const TwistedMatrix& a, const TwistedMatrix& b) {
    if (a.s != b.s) throw Error("SchemaError", "twist degrees differ");
    return {a.m - b.m, a.s};
}

TwistedMatrix operator+(const TwistedMatrix& a, const TwistedMatrix& b) {
    if (a.s != b.s) throw Error("SchemaError", "twist degrees differ");
    return {a.m + b.m, a.s};
}

TwistedMatrix reduced_connection_matrix(const Geometry& g, const ChristoffelModPi& ch, int t, int i) {
    const Field& F = *g.F;
    int N = g.N();
    Frob fr = realize(g.M, g.L, t, i);
    RMat m = rzeros(F, N * N + 1, N * N + 1);
    m(0, 0) = F.residue(F.delta(fr, F.pi()));
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) m(0, 1 + k * N + l) = ch.upper[i](k, l);
    return {m, fr.s};
}

TwistedMatrix reduced_curvature_matrix(const Geometry& g, const CurvatureTensor& T, int i, int j) {
    const Field& F = *g.F;
    int N = g.N();
    RMat m = rzeros(F, N * N + 1, N * N + 1);
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) m(0, 1 + k * N + l) = T.up(k, i, j, l);
    return {m, 2 * g.M.c};
}

bool reduced_matrices_consistent(const Geometry& g, const CurvatureTensor& T) {
    int n = g.n();
    ChristoffelModPi G1 = g.christoffel(1), G2 = g.christoffel(2);
    SymbolTables st = symbol_tables(g.M, g.L, 1, 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            TwistedMatrix a = reduced_connection_matrix(g, G1, 1, i), b = reduced_connection_matrix(g, G1, 1, j);
            TwistedMatrix lhs = a * b - b * a - reduced_connection_matrix(g, G2, 2, st.star[i][j]) +
                                reduced_connection_matrix(g, G2, 2, st.star[j][i]);
            TwistedMatrix rhs = reduced_curvature_matrix(g, T, i, j);
            if (lhs.s != rhs.s || lhs.m != rhs.m) return false;
        }
    return true;
}

// invariants

namespace {

using Kind = InvFactor::Kind;

InvMonomial mono(int64_t c, std::vector<InvFactor> f) { return {c, std::move(f)}; }
InvFactor fac(Kind k, std::vector<int> s) { return {k, std::move(s)}; }

int arity(Kind k) {
    switch (k) {
        case Kind::Q:
        case Kind::Qinv: return 2;
        case Kind::X: return 4;
        case Kind::Y: return 3;
    }
    return 0;
}

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Q: return "Q";
        case Kind::Qinv: return "Qinv";
        case Kind::X: return "X";
        case Kind::Y: return "Y";
    }
    return "?";
}

}  // namespace

std::vector<InvariantExpr> invariant_catalog() {
    return {
        {"trace_Q", 1, {mono(1, {fac(Kind::Q, {0, 0})})}},
        {"sum_Q", 2, {mono(1, {fac(Kind::Q, {0, 1})})}},
        {"sum_X_ijij", 2, {mono(1, {fac(Kind::X, {0, 1, 0, 1})})}},
        {"sum_X_ijik", 3, {mono(1, {fac(Kind::X, {0, 1, 0, 2})})}},
        // S = sum q^{ij} q^{lk} X_{likj}
        {"S", 4, {mono(1, {fac(Kind::Qinv, {0, 1}), fac(Kind::Qinv, {2, 3}), fac(Kind::X, {2, 0, 3, 1})})}},
        {"sum_Y_iij", 2, {mono(1, {fac(Kind::Y, {0, 0, 1})})}},
    };
}

std::vector<InvariantExpr> riem_ideal_generators() {
    return {
        {"antisym_ij", 4, {mono(1, {fac(Kind::X, {0, 1, 2, 3})}), mono(1, {fac(Kind::X, {1, 0, 2, 3})})}},
        {"antisym_kl", 4, {mono(1, {fac(Kind::X, {0, 1, 2, 3})}), mono(1, {fac(Kind::X, {0, 1, 3, 2})})}},
        {"bianchi", 4,
         {mono(1, {fac(Kind::X, {0, 1, 2, 3})}), mono(1, {fac(Kind::X, {0, 2, 3, 1})}),
          mono(1, {fac(Kind::X, {0, 3, 1, 2})})}},
    };
}

std::string to_string(const InvariantExpr& I) {
    auto slot = [](int s) {
        if (s < 0) return std::to_string(-1 - s);
        return std::string(1, (char)('a' + s));
    };
    std::string out;
    for (size_t t = 0; t < I.terms.size(); ++t) {
        const auto& m = I.terms[t];
        if (t) out += m.coeff < 0 ? " - " : " + ";
        else if (m.coeff < 0) out += "-";
        int64_t a = m.coeff < 0 ? -m.coeff : m.coeff;
        if (a != 1) out += std::to_string(a) + "*";
        for (size_t k = 0; k < m.factors.size(); ++k) {
            if (k) out += "*";
            out += kind_name(m.factors[k].kind);
            out += "[";
            for (size_t s = 0; s < m.factors[k].slots.size(); ++s) {
                if (s) out += ",";
                out += slot(m.factors[k].slots[s]);
            }
            out += "]";
        }
    }
    return out;
}

// grammar: term (('+'|'-') term)* ; term: [int '*'] factor ('*' factor)* ;
// factor: (Q|Qinv|X|Y) '[' slot (',' slot)* ']' ; slot: letter (summed variable) or digit (fixed 0-based index)
InvariantExpr parse_invariant(const std::string& name, const std::string& text) {
    InvariantExpr I;
    I.name = name;
    std::map<char, int> vars;
    size_t p = 0;
    auto ws = [&] {
        while (p < text.size() && std::isspace((unsigned char)text[p])) ++p;
    };
    auto fail = [&](const std::string& why) -> void {
        throw Error("SchemaError", "invariant '" + name + "': " + why + " at offset " + std::to_string(p));
    };
    int sign = 1;
    ws();
    if (p < text.size() && (text[p] == '-' || text[p] == '+')) {
        sign = text[p] == '-' ? -1 : 1;
        ++p;
    }
    while (true) {
        ws();
        InvMonomial m;
        m.coeff = sign;
        if (p < text.size() && std::isdigit((unsigned char)text[p])) {
            int64_t v = 0;
            while (p < text.size() && std::isdigit((unsigned char)text[p])) v = v * 10 + (text[p++] - '0');
            m.coeff *= v;
            ws();
            if (p < text.size() && text[p] == '*') ++p;
            ws();
        }
        while (true) {
            InvFactor f;
            if (text.compare(p, 4, "Qinv") == 0) {
                f.kind = Kind::Qinv;
                p += 4;
            } else if (p < text.size() && text[p] == 'Q') {
                f.kind = Kind::Q;
                ++p;
            } else if (p < text.size() && text[p] == 'X') {
                f.kind = Kind::X;
                ++p;
            } else if (p < text.size() && text[p] == 'Y') {
                f.kind = Kind::Y;
                ++p;
            } else {
                fail("expected Q, Qinv, X or Y");
            }
            ws();
            if (p >= text.size() || text[p] != '[') fail("expected '['");
            ++p;
            while (true) {
                ws();
                if (p >= text.size()) fail("unterminated index list");
                char ch = text[p++];
                if (std::isalpha((unsigned char)ch)) {
                    auto it = vars.find(ch);
                    if (it == vars.end()) it = vars.emplace(ch, (int)vars.size()).first;
                    f.slots.push_back(it->second);
                } else if (std::isdigit((unsigned char)ch)) {
                    f.slots.push_back(-1 - (ch - '0'));
                } else {
                    fail("bad index");
                }
                ws();
                if (p < text.size() && text[p] == ',') {
                    ++p;
                    continue;
                }
                if (p < text.size() && text[p] == ']') {
                    ++p;
                    break;
                }
                fail("expected ',' or ']'");
            }
            if ((int)f.slots.size() != arity(f.kind)) fail("wrong number of indices");
            m.factors.push_back(f);
            ws();
            if (p < text.size() && text[p] == '*') {
                ++p;
                ws();
                continue;
            }
            break;
        }
        I.terms.push_back(m);
        ws();
        if (p >= text.size()) break;
        if (text[p] == '+' || text[p] == '-') {
            sign = text[p] == '-' ? -1 : 1;
            ++p;
            continue;
        }
        fail("unexpected character");
    }
    I.nvars = (int)vars.size();
    return I;
}

namespace {

// visits every assignment of nvars variables over [0, n)
template <class Fn>
void for_assignments(int nvars, int n, Fn fn) {
    std::vector<int> v(nvars, 0);
    while (true) {
        fn(v);
        int k = 0;
        while (k < nvars && ++v[k] == n) v[k++] = 0;
        if (k == nvars) return;
    }
}

int resolve(int slot, const std::vector<int>& v) { return slot < 0 ? -1 - slot : v[slot]; }

using Indet = std::pair<int, std::vector<int>>;
using Expanded = std::map<std::vector<Indet>, int64_t>;

Expanded expand(const InvariantExpr& I, int n, const std::vector<int>* perm) {
    Expanded out;
    for (const auto& m : I.terms)
        for_assignments(I.nvars, n, [&](const std::vector<int>& v) {
            std::vector<Indet> key;
            for (const auto& f : m.factors) {
                std::vector<int> idx;
                for (int s : f.slots) {
                    int x = resolve(s, v);
                    idx.push_back(perm ? (*perm)[x] : x);
                }
                // Q and Qinv are symmetric indeterminates
                if ((f.kind == Kind::Q || f.kind == Kind::Qinv) && idx[0] > idx[1]) std::swap(idx[0], idx[1]);
                key.push_back({(int)f.kind, idx});
            }
            std::sort(key.begin(), key.end());
            out[key] += m.coeff;
        });
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

}  // namespace

bool formally_invariant(const InvariantExpr& I, int n) {
    for (const auto& m : I.terms)
        for (const auto& f : m.factors)
            for (int s : f.slots)
                if (s < 0 && -1 - s >= n) throw Error("SchemaError", "fixed index out of range");
    Expanded base = expand(I, n, nullptr);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end()))
        if (expand(I, n, &perm) != base) return false;
    return true;
}

InvariantData invariant_data(const EMat& q, const CurvatureTensor* T, const std::vector<RMat>* Y) {
    InvariantData d;
    d.q = residue(q);
    d.qinv = inverse(d.q);
    d.T = T;
    d.Y = Y;
    return d;
}

Res evaluate(const Field& F, const InvariantExpr& I, const InvariantData& d) {
    int n = d.q.rows;
    Res acc = F.rzero();
    for (const auto& m : I.terms) {
        Res coeff = F.rint(m.coeff);
        for_assignments(I.nvars, n, [&](const std::vector<int>& v) {
            Res prod = coeff;
            for (const auto& f : m.factors) {
                int a = resolve(f.slots[0], v);
                int b = f.slots.size() > 1 ? resolve(f.slots[1], v) : 0;
                switch (f.kind) {
                    case Kind::Q: prod = prod * d.q(a, b); break;
                    case Kind::Qinv: prod = prod * d.qinv(a, b); break;
                    case Kind::X:
                        if (!d.T) throw Error("SchemaError", "invariant uses X but no curvature tensor was given");
                        prod = prod * d.T->low(a, b, resolve(f.slots[2], v), resolve(f.slots[3], v));
                        break;
                    case Kind::Y:
                        if (!d.Y) throw Error("SchemaError", "invariant uses Y but no Chern tensor was given");
                        prod = prod * (*d.Y)[a](b, resolve(f.slots[2], v));
                        break;
                }
            }
            acc = acc + prod;
        });
    }
    return acc;
}

bool respects_riem_ideal(const Field& F, const InvariantExpr& I, const InvariantData& d) {
    // I + gen * m has the value of I iff gen * m evaluates to zero
    for (const auto& gen : riem_ideal_generators())
        for (const auto& m : I.terms) {
            InvariantExpr K;
            K.nvars = I.nvars + gen.nvars;
            for (const auto& gm : gen.terms) {
                InvMonomial t = m;
                t.coeff = m.coeff * gm.coeff;
                for (auto f : gm.factors) {
                    for (int& s : f.slots)
                        if (s >= 0) s += I.nvars;
                    t.factors.push_back(f);
                }
                K.terms.push_back(t);
            }
            if (!evaluate(F, K, d).is_zero()) return false;
        }
    return true;
}

Geometry relabel(const Geometry& g, const std::vector<int>& eps) {
    int n = g.n();
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[eps[i]] = i;
    Geometry r = g;
    for (int i = 0; i < n; ++i) r.L.omega[i] = g.L.omega[eps[i]];
    if (r.L.gamma.empty()) r.L.gamma = {0};
    for (auto& x : r.L.gamma) x = inv[x];
    for (auto& row : r.L.explicit_) {
        auto old = row;
        for (int i = 0; i < n; ++i) row[i] = old[eps[i]];
    }
    r.h = g.N() == n ? inv[g.h] : g.h;
    auto perm = [&](const EMat& m) {
        EMat o = m;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) o(i, j) = m(eps[i], eps[j]);
        return o;
    };
    r.q = perm(g.q);
    for (auto& [t, m] : r.metric_override) m = perm(m);
    r.torsion_override.clear();
    for (auto& [t, L] : g.torsion_override) {
        TorsionSymbol o = L;
        for (int k = 0; k < n; ++k) o.beta[k] = perm(L.beta[eps[k]]);
        r.torsion_override[t] = o;
    }
    return r;
}

bool sigma_equivariance(const Geometry& g, const std::vector<int>& eps) {
    if (g.N() != g.n()) throw Error("SchemaError", "equivariance needs N = n");
    CurvatureTensor a = curvature_reduced(g), b = curvature_reduced(relabel(g, eps));
    int n = g.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    if (b.low(i, j, k, l) != a.low(eps[i], eps[j], eps[k], eps[l])) return false;
    return true;
}

bool invariant_stable(const Geometry& g, const InvariantExpr& I, const std::vector<int>& eps) {
    const Field& F = *g.F;
    Geometry r = relabel(g, eps);
    CurvatureTensor a = curvature_reduced(g), b = curvature_reduced(r);
    std::vector<RMat> ya, yb;
    bool needs_y = false;
    for (const auto& m : I.terms)
        for (const auto& f : m.factors) needs_y |= f.kind == Kind::Y;
    if (needs_y) {
        ya = chern_tensor(g);
        yb = chern_tensor(r);
    }
    return evaluate(F, I, invariant_data(g.q, &a, needs_y ? &ya : nullptr)) ==
           evaluate(F, I, invariant_data(r.q, &b, needs_y ? &yb : nullptr));
}

}  // namespace pcurv
