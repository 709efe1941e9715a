#include "pcurv/gauge.hpp"

#include <numeric>

#include "pcurv/sampling.hpp"

namespace pcurv {

GaugeElement GaugeElement::identity(const Field& F, int N) {
    GaugeElement w;
    w.perm.resize(N);
    std::iota(w.perm.begin(), w.perm.end(), 0);
    w.diag.assign(N, F.one());
    return w;
}

GaugeElement GaugeElement::permutation(const Field& F, std::vector<int> perm) {
    GaugeElement w;
    w.diag.assign(perm.size(), F.one());
    w.perm = std::move(perm);
    return w;
}

EMat GaugeElement::matrix(const Field& F) const {
    EMat m = ezeros(F, N(), N());
    for (int i = 0; i < N(); ++i) m(i, perm[i]) = diag[i];
    return m;
}

GaugeElement GaugeElement::inverse(const Field& F) const {
    // (D P)^{-1} = P^t D^{-1}: entry (perm[i], i) = diag[i]^{-1}
    GaugeElement r;
    r.perm.resize(N());
    r.diag.resize(N());
    for (int i = 0; i < N(); ++i) {
        r.perm[perm[i]] = i;
        r.diag[perm[i]] = F.inv(diag[i]);
    }
    return r;
}

GaugeElement operator*(const GaugeElement& a, const GaugeElement& b) {
    // row i of a has one entry at column a.perm[i]; row a.perm[i] of b at column b.perm[a.perm[i]]
    GaugeElement r;
    int N = a.N();
    r.perm.resize(N);
    r.diag.resize(N);
    for (int i = 0; i < N; ++i) {
        r.perm[i] = b.perm[a.perm[i]];
        r.diag[i] = a.diag[i] * b.diag[a.perm[i]];
    }
    return r;
}

void validate(const Field& F, const GaugeElement& w) {
    int N = w.N();
    if ((int)w.diag.size() != N) throw Error("SchemaError", "gauge element: diag and perm sizes differ");
    std::vector<int> seen(N, 0);
    for (int x : w.perm) {
        if (x < 0 || x >= N || seen[x]) throw Error("SchemaError", "gauge element: perm is not a permutation");
        seen[x] = 1;
    }
    for (const auto& d : w.diag) {
        if (!F.in_base_field(d)) throw Error("SchemaError", "gauge element: diagonal entry not in O_F");
        if (F.pow(d, F.q - 1) != F.one(d.prec))
            throw Error("SchemaError", "gauge element: diagonal entry is not a root of unity");
    }
}

GaugeElement random_gauge(const Field& F, int N, SplitMix64& rng) {
    GaugeElement w;
    w.perm.resize(N);
    std::iota(w.perm.begin(), w.perm.end(), 0);
    for (int i = N - 1; i > 0; --i) std::swap(w.perm[i], w.perm[rng.below(i + 1)]);
    for (int i = 0; i < N; ++i) w.diag.push_back(F.teich(F.rfrom_index(1 + rng.below(F.q - 1))));
    return w;
}

std::vector<std::vector<int>> ad_map(const WeilMonoid& M, const Labeling& L, int t) {
    int n = M.n();
    auto lam = L.at(M, t);
    std::vector<std::vector<int>> ad(n, std::vector<int>(n));
    for (int g = 0; g < n; ++g)
        for (int i = 0; i < n; ++i) {
            // (0, g)(t, x)(0, g^{-1}) = (t, theta^t(g) x g^{-1})
            int x = M.S.mul[M.S.mul[M.theta_pow(g, t)][lam[i]]][M.S.inv(g)];
            ad[g][i] = L.index_of(M, {t, x});
        }
    return ad;
}

bool ad_is_homomorphism(const WeilMonoid& M, const std::vector<std::vector<int>>& ad) {
    int n = M.n();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int i = 0; i < n; ++i)
                if (ad[M.S.mul[a][b]][i] != ad[a][ad[b][i]]) return false;
    return true;
}

bool ad_invariant(const EMat& q, const std::vector<std::vector<int>>& ad) {
    for (const auto& e : ad)
        for (int i = 0; i < q.rows; ++i)
            for (int j = 0; j < q.rows; ++j)
                if (q(e[i], e[j]) != q(i, j)) return false;
    return true;
}

int Cocycle::index_of(const Field& F, int j) const {
    int e = F.e;
    j = ((j % e) + e) % e;
    for (size_t k = 0; k < tau.size(); ++k)
        if (((tau[k] % e) + e) % e == j) return (int)k;
    return -1;
}

void validate(const Field& F, const Cocycle& u) {
    if (u.tau.size() != u.values.size() || u.tau.empty())
        throw Error("SchemaError", "cocycle: tau_exponents and values must have equal nonzero length");
    int N = u.values[0].N();
    for (const auto& w : u.values) {
        if (w.N() != N) throw Error("SchemaError", "cocycle: values have different sizes");
        validate(F, w);
    }
    for (size_t a = 0; a < u.tau.size(); ++a)
        for (size_t b = 0; b < u.tau.size(); ++b) {
            int k = u.index_of(F, u.tau[a] + u.tau[b]);
            if (k < 0) throw Error("SchemaError", "cocycle: tau exponents do not form a subgroup");
            if (!(u.values[a] * u.values[b] == u.values[k]))
                throw Error("SchemaError", "cocycle: values do not define a homomorphism");
        }
}

bool is_trivial(const Field& F, const Cocycle& u) {
    for (const auto& w : u.values)
        if (!(w == GaugeElement::identity(F, w.N()))) return false;
    return true;
}

bool is_phi_invariant(const Field& F, const Cocycle& u, const std::vector<Frob>& lifts) {
    for (const auto& fr : lifts)
        for (size_t j = 0; j < u.tau.size(); ++j) {
            // tau_{j,i} = phi_i tau_j phi_i^{-1}
            Frob c = F.compose(F.compose(fr, Frob{0, u.tau[j]}), F.inverse(fr));
            if (c.s != 0) throw Error("InternalError", "conjugate of a Galois element has nonzero degree");
            int k = u.index_of(F, c.j);
            if (k < 0) throw Error("NotNormalized", "the Frobenius lifts do not normalize the subgroup");
            if (!(u.values[k] == u.values[j])) return false;
        }
    return true;
}

bool is_metric_compatible(const Field& F, const Cocycle& u, const EMat& q) {
    for (size_t j = 0; j < u.tau.size(); ++j) {
        EMat w = u.values[j].matrix(F);
        if (apply(Frob{0, u.tau[j]}, q) != transpose(w) * q * w) return false;
    }
    return true;
}

Cocycle conjugate(const Field& F, const Cocycle& u, const GaugeElement& a) {
    Cocycle v = u;
    GaugeElement ai = a.inverse(F);
    for (auto& w : v.values) w = ai * w * a;
    return v;
}

namespace {

ConnectionAtPoint solve_flavor(Flavor flavor, const EMat& q, const TorsionSymbol* L, const std::vector<Frob>& lifts,
                               const EMat& a) {
    if (flavor == Flavor::Chern) return solve_chern(q, lifts, a);
    if (!L) throw Error("SchemaError", "Levi-Civita connection needs a torsion symbol");
    return solve_levi_civita(q, *L, lifts, a);
}

}  // namespace

CompatibilityReport connection_compatibility_check(const Field& F, const Cocycle& u, Flavor flavor, const EMat& q,
                                                   const TorsionSymbol* L, const std::vector<Frob>& lifts,
                                                   int samples, uint64_t seed) {
    CompatibilityReport rep;
    std::optional<TorsionSymbol> scaled;
    if (flavor == Flavor::LeviCivita && L) {
        scaled = *L;
        if (F.e > 1) {
            Elem s = F.pow(F.pi(), (uint64_t)(F.e - 1));
            scaled->scale = L->scale ? F.mul(*L->scale, s) : s;
            rep.torsion_scaled = true;
        }
    }
    const TorsionSymbol* LL = scaled ? &*scaled : L;
    SplitMix64 rng(seed);
    int N = q.rows;
    for (int smp = 0; smp < samples; ++smp) {
        EMat a = random_point(F, N, rng);
        ConnectionAtPoint base = solve_flavor(flavor, q, LL, lifts, a);
        for (size_t j = 0; j < u.tau.size(); ++j) {
            Frob tau{0, u.tau[j]};
            EMat b = apply_inv(tau, u.values[j].inverse(F).matrix(F) * a);
            ConnectionAtPoint tw = solve_flavor(flavor, q, LL, lifts, b);
            for (size_t i = 0; i < lifts.size(); ++i) {
                EMat lhs = apply(tau, tw.lambda[i]);
                if (lhs != base.lambda[i]) {
                    rep.ok = false;
                    rep.failures.push_back("sample " + std::to_string(smp) + ": tau exponent " +
                                           std::to_string(u.tau[j]) + ", lift " + std::to_string(i));
                }
            }
        }
        ++rep.samples;
    }
    return rep;
}

bool gauge_covariance(const Field& F, Flavor flavor, const EMat& q, const TorsionSymbol* L,
                      const std::vector<Frob>& lifts, const GaugeElement& w, const EMat& a) {
    EMat W = w.matrix(F);
    EMat qt = transpose(W) * q * W;
    ConnectionAtPoint tilde = solve_flavor(flavor, qt, L, lifts, a);
    ConnectionAtPoint orig = solve_flavor(flavor, q, L, lifts, W * a);
    return tilde.lambda == orig.lambda;
}

LegendreReport legendre_verify(const Field& F, const EMat& q, const std::vector<Frob>& lifts, Flavor flavor,
                               const TorsionSymbol* L) {
    int n = q.rows;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !q(i, j).is_zero()) throw Error("NonDiagonal", "Legendre identities need a diagonal metric");
    if ((int)lifts.size() != n) throw Error("SchemaError", "Legendre identities need N = n");
    int s = lifts[0].s;
    for (const auto& fr : lifts)
        if (fr.s != s) throw Error("SchemaError", "lifts must share one degree");
    if (s % F.f != 0) throw Error("SchemaError", "Legendre identities need f | s");
    int base_idx = -1;
    for (int i = 0; i < n; ++i)
        if (lifts[i].j == 0) base_idx = i;
    if (base_idx < 0) throw Error("SchemaError", "no lift phi^s among the lifts");

    LegendreReport r;
    ConnectionAtPoint c = solve_flavor(flavor, q, L, lifts, identity(F, n));
    int prec = c.prec;
    r.D = F.one(prec);
    for (int i = 0; i < n; ++i) r.D = r.D * q(i, i);
    r.D = F.with_prec(r.D, prec);
    r.ND = F.norm(r.D);
    r.legendre_ND = F.legendre(r.ND);
    uint64_t ps = F.ppow(s);
    Elem sign = F.from_int(r.legendre_ND, prec);
    Elem rhs_norm = sign * F.pow(r.ND, (ps - 1) / 2);

    r.squares_ok = r.norms_ok = r.norms_agree = r.residue_one = true;
    std::vector<Elem> norms;
    for (int i = 0; i < n; ++i) {
        Elem lam = det(c.lambda[i]);
        r.lambda.push_back(lam);
        Elem rhs = F.pow(r.D, ps) * F.inv(F.apply(lifts[i], r.D));
        r.squares_ok &= lam * lam == rhs;
        Elem nl = F.norm(lam);
        norms.push_back(nl);
        r.norms_ok &= nl == rhs_norm;
        r.residue_one &= F.residue(lam) == F.rone();
    }
    for (const auto& x : norms) r.norms_agree &= x == norms[0];

    try {
        Elem sq = F.sqrt(r.D);
        r.sqrt_exists = true;
        bool ok = true;
        Frob phis{s, 0};
        for (int i = 0; i < n; ++i) {
            Elem ratio = r.lambda[base_idx] * F.inv(r.lambda[i]);
            Elem sig = F.apply(Frob{0, lifts[i].j}, sq) * F.inv(sq);
            ok &= ratio == F.apply(phis, sig);
        }
        r.ratio_ok = ok;
    } catch (const Error& e) {
        if (e.kind != "NoSquareRoot") throw;
        r.note = "no square root of D in E; ratio identity skipped";
    }
    if (r.sqrt_exists && F.in_base_field(r.D)) {
        Elem sq = F.sqrt(r.D);
        if (F.in_base_field(sq)) {
            if (!r.note.empty()) r.note += "; ";
            r.note += "sqrt D lies in F; ratio corollary not applicable";
        }
    }
    return r;
}

}  // namespace pcurv
