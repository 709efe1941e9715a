#include "pcurv/weil_monoid.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "pcurv/rng.hpp"

namespace pcurv {

Group Group::from_table(std::vector<std::vector<int>> table) {
    Group G;
    G.n = (int)table.size();
    if (G.n < 1 || G.n > 24) throw Error("SchemaError", "group order must be in [1, 24]");
    for (auto& row : table) {
        if ((int)row.size() != G.n) throw Error("SchemaError", "Cayley table is not square");
        for (int x : row)
            if (x < 0 || x >= G.n) throw Error("SchemaError", "Cayley table entry out of range");
    }
    G.mul = std::move(table);
    G.identity = -1;
    for (int e = 0; e < G.n; ++e) {
        bool ok = true;
        for (int g = 0; g < G.n; ++g) ok = ok && G.mul[e][g] == g && G.mul[g][e] == g;
        if (ok) { G.identity = e; break; }
    }
    if (G.identity < 0) throw Error("SchemaError", "Cayley table has no identity");
    for (int a = 0; a < G.n; ++a)
        for (int b = 0; b < G.n; ++b)
            for (int c = 0; c < G.n; ++c)
                if (G.mul[G.mul[a][b]][c] != G.mul[a][G.mul[b][c]]) throw Error("SchemaError", "table is not associative");
    for (int a = 0; a < G.n; ++a) G.inv(a);
    return G;
}

Group Group::cyclic(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return from_table(t);
}

Group Group::direct_product(const Group& A, const Group& B) {
    int n = A.n * B.n;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = A.mul[a / B.n][b / B.n] * B.n + B.mul[a % B.n][b % B.n];
    return from_table(t);
}

Group Group::from_permutations(const std::vector<std::vector<int>>& gens) {
    if (gens.empty()) return cyclic(1);
    int deg = (int)gens[0].size();
    std::vector<int> id(deg);
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::vector<int>> elems{id};
    std::map<std::vector<int>, int> index{{id, 0}};
    auto compose = [&](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> r(deg);
        for (int x = 0; x < deg; ++x) r[x] = a[b[x]];
        return r;
    };
    for (size_t k = 0; k < elems.size(); ++k)
        for (auto& g : gens) {
            if ((int)g.size() != deg) throw Error("SchemaError", "generators of different degrees");
            auto h = compose(elems[k], g);
            if (!index.count(h)) {
                if (elems.size() >= 24) throw Error("SchemaError", "group order must be <= 24");
                index[h] = (int)elems.size();
                elems.push_back(h);
            }
        }
    int n = (int)elems.size();
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
    return from_table(t);
}

int Group::inv(int g) const {
    for (int h = 0; h < n; ++h)
        if (mul[g][h] == identity) return h;
    throw Error("SchemaError", "element without inverse");
}

bool Group::is_abelian() const {
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (mul[a][b] != mul[b][a]) return false;
    return true;
}

bool Group::is_automorphism(const std::vector<int>& th) const {
    if ((int)th.size() != n) return false;
    std::vector<int> seen(n, 0);
    for (int x : th) {
        if (x < 0 || x >= n || seen[x]) return false;
        seen[x] = 1;
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (th[mul[a][b]] != mul[th[a]][th[b]]) return false;
    return true;
}

std::vector<std::vector<int>> Group::automorphisms() const {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        if (perm[identity] == identity && is_automorphism(perm)) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

WeilMonoid::WeilMonoid(Group S_, std::vector<int> theta_, int c_) : S(std::move(S_)), theta(std::move(theta_)), c(c_) {
    if (c < 1) throw Error("SchemaError", "minimal degree c must be >= 1");
    if (!S.is_automorphism(theta)) throw Error("NotAnAutomorphism", "theta is not an automorphism of the group");
}

WeilMonoid WeilMonoid::galois(const Field& F, const std::vector<int>& exps, int c) {
    int e = F.e;
    std::vector<int> ex;
    for (int x : exps) ex.push_back(((x % e) + e) % e);
    std::set<int> uniq(ex.begin(), ex.end());
    if (uniq.size() != ex.size()) throw Error("SchemaError", "sigma_exponents must be distinct");
    if (!uniq.count(0)) throw Error("SchemaError", "sigma_exponents must contain 0");
    for (int x : ex)
        if (x) F.zeta();
    int n = (int)ex.size();
    auto idx = [&](int x) {
        auto it = std::find(ex.begin(), ex.end(), ((x % e) + e) % e);
        return it == ex.end() ? -1 : (int)(it - ex.begin());
    };
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            t[a][b] = idx(ex[a] + ex[b]);
            if (t[a][b] < 0) throw Error("SchemaError", "sigma_exponents do not form a subgroup");
        }
    std::vector<int> th(n);
    int pinv = F.pinv_mod_e(c);
    for (int a = 0; a < n; ++a) {
        th[a] = idx(ex[a] * pinv);
        if (th[a] < 0) throw Error("NotNormalized", "phi does not normalize the subgroup");
    }
    WeilMonoid M(Group::from_table(t), th, c);
    M.sigma_exponents = ex;
    return M;
}

int WeilMonoid::theta_pow(int g, int k) const {
    for (int i = 0; i < k; ++i) g = theta[g];
    return g;
}

int WeilMonoid::theta_order() const {
    for (int k = 1;; ++k) {
        bool id = true;
        for (int g = 0; g < n(); ++g) id = id && theta_pow(g, k) == g;
        if (id) return k;
    }
}

MElem WeilMonoid::mul(const MElem& a, const MElem& b) const {
    return {a.t + b.t, S.mul[theta_pow(a.g, b.t)][b.g]};
}

bool WeilMonoid::is_abelian() const {
    if (!S.is_abelian()) return false;
    for (int g = 0; g < n(); ++g)
        if (theta[g] != g) return false;
    return true;
}

bool WeilMonoid::is_associative() const {
    for (int t1 = 1; t1 <= 2; ++t1)
        for (int t2 = 1; t2 <= 2; ++t2)
            for (int t3 = 1; t3 <= 2; ++t3)
                for (int a = 0; a < n(); ++a)
                    for (int b = 0; b < n(); ++b)
                        for (int d = 0; d < n(); ++d) {
                            MElem x{t1, a}, y{t2, b}, z{t3, d};
                            if (mul(mul(x, y), z) != mul(x, mul(y, z))) return false;
                        }
    return true;
}

Labeling Labeling::canonical(int n, int h) {
    Labeling L;
    L.omega.resize(n);
    std::iota(L.omega.begin(), L.omega.end(), 0);
    L.gamma = {h};
    return L;
}

std::vector<int> Labeling::at(const WeilMonoid& M, int t) const {
    if (t < 1) throw Error("SchemaError", "labeling degree must be positive");
    if (!explicit_.empty()) {
        if (t > (int)explicit_.size()) throw Error("SchemaError", "explicit labeling not given at this degree");
        return explicit_[t - 1];
    }
    std::vector<int> lam = omega;
    for (int s = 1; s < t; ++s) {
        int h = gamma.empty() ? 0 : gamma[std::min<size_t>(s - 1, gamma.size() - 1)];
        int left = M.theta_pow(omega[h], s);
        for (auto& x : lam) x = M.S.mul[left][x];
    }
    return lam;
}

int Labeling::index_of(const WeilMonoid& M, const MElem& x) const {
    auto lam = at(M, x.t);
    for (int i = 0; i < (int)lam.size(); ++i)
        if (lam[i] == x.g) return i;
    throw Error("SchemaError", "labeling is not a bijection");
}

bool Labeling::is_coherent(const WeilMonoid& M, int tmax) const {
    for (int t = 1; t < tmax; ++t) {
        auto a = at(M, t + 1), b = at(M, t);
        int ref = -1;
        for (int i = 0; i < M.n(); ++i) {
            int d = M.S.mul[a[i]][M.S.inv(b[i])];
            if (ref < 0) ref = d;
            else if (d != ref) return false;
        }
    }
    return true;
}

int star(const WeilMonoid& M, const Labeling& L, int i, int j, int t1, int t2) {
    return L.index_of(M, M.mul(L.elem(M, t1, i), L.elem(M, t2, j)));
}

SymbolTables symbol_tables(const WeilMonoid& M, const Labeling& L, int t1, int t2) {
    int n = M.n();
    SymbolTables T;
    T.n = n;
    T.star.assign(n, std::vector<int>(n));
    T.alpha.assign(n, std::vector<std::vector<int>>(n, std::vector<int>(n, 0)));
    T.ell = T.alpha;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int k = star(M, L, i, j, t1, t2);
            T.star[i][j] = k;
            T.alpha[k][i][j] = 1;
        }
    // the subtracted term uses the (r, s) product
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int k = star(M, L, j, i, t2, t1);
            for (int m = 0; m < n; ++m) T.ell[m][i][j] = T.alpha[m][i][j] - (m == k ? 1 : 0);
        }
    return T;
}

int centralizing_power(const WeilMonoid& M, const Labeling& L, int i) {
    MElem x = L.elem(M, 1, i), y = x;
    int bound = M.n() * M.theta_order();
    for (int t = 1; t <= bound; ++t) {
        bool central = true;
        for (int g = 0; g < M.n() && central; ++g) {
            MElem z{1, g};
            central = M.mul(y, z) == M.mul(z, y);
        }
        if (central) return t;
        y = M.mul(y, x);
    }
    return -1;
}

std::string to_string(const NCPoly& f) {
    std::string out;
    for (auto& [w, c] : f) {
        if (!c) continue;
        if (out.empty()) out += c < 0 ? "-" : "";
        else out += c < 0 ? " - " : " + ";
        if (std::abs(c) != 1) out += std::to_string(std::abs(c)) + " ";
        for (size_t k = 0; k < w.size();) {
            size_t r = k;
            while (r < w.size() && w[r] == w[k]) ++r;
            out += "T" + std::to_string(w[k] + 1);
            if (r - k > 1) out += "^" + std::to_string(r - k);
            k = r;
        }
    }
    return out.empty() ? "0" : out;
}

NCPoly parse_ncpoly(const std::string& src) {
    std::string s;
    for (char ch : src)
        if (!std::isspace((unsigned char)ch) && ch != '_' && ch != '{' && ch != '}' && ch != '*') s += ch;
    NCPoly f;
    size_t k = 0;
    auto number = [&]() {
        int64_t v = 0;
        while (k < s.size() && std::isdigit((unsigned char)s[k])) v = v * 10 + (s[k++] - '0');
        return v;
    };
    while (k < s.size()) {
        int64_t sign = 1;
        if (s[k] == '+' || s[k] == '-') sign = s[k++] == '-' ? -1 : 1;
        int64_t coef = 1;
        if (k < s.size() && std::isdigit((unsigned char)s[k])) coef = number();
        std::vector<int> w;
        while (k < s.size() && s[k] == 'T') {
            ++k;
            int idx = (int)number() - 1;
            int64_t pw = 1;
            if (k < s.size() && s[k] == '^') { ++k; pw = number(); }
            for (int64_t r = 0; r < pw; ++r) w.push_back(idx);
        }
        if (w.empty()) throw Error("SchemaError", "cannot parse polynomial: " + src);
        f[w] += sign * coef;
        if (f[w] == 0) f.erase(w);
    }
    return f;
}

std::vector<std::vector<int>> words(int n, int len) {
    std::vector<std::vector<int>> out;
    std::vector<int> w(len, 0);
    while (true) {
        out.push_back(w);
        int k = len - 1;
        while (k >= 0 && w[k] == n - 1) w[k--] = 0;
        if (k < 0) break;
        ++w[k];
    }
    return out;
}

int64_t word_rank(int n, const std::vector<int>& w) {
    int64_t r = 0;
    for (int x : w) r = r * n + x;
    return r;
}

MElem word_value(const WeilMonoid& M, const Labeling& L, const std::vector<int>& w) {
    MElem x = L.elem(M, 1, w.at(0));
    for (size_t k = 1; k < w.size(); ++k) x = M.mul(x, L.elem(M, 1, w[k]));
    return x;
}

std::vector<NCPoly> ideal_generators(const WeilMonoid& M, const Labeling& L) {
    std::vector<NCPoly> out;
    int n = M.n();
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MElem v = M.mul(L.elem(M, 1, i), L.elem(M, 1, j));
            for (int k = 0; k < n; ++k)
                if (M.mul(L.elem(M, 1, 0), L.elem(M, 1, k)) == v) {
                    out.push_back(NCPoly{{{i, j}, 1}, {{0, k}, -1}});
                    break;
                }
        }
    return out;
}

std::vector<int64_t> to_vector(const NCPoly& f, int n, int t) {
    int64_t N = 1;
    for (int k = 0; k < t; ++k) N *= n;
    std::vector<int64_t> v((size_t)N, 0);
    for (auto& [w, c] : f) {
        if ((int)w.size() != t) throw Error("SchemaError", "polynomial is not homogeneous of the requested degree");
        v[(size_t)word_rank(n, w)] += c;
    }
    return v;
}

NCPoly from_vector(const std::vector<int64_t>& v, int n, int t) {
    NCPoly f;
    auto ws = words(n, t);
    for (size_t k = 0; k < v.size(); ++k)
        if (v[k]) f[ws[k]] = v[k];
    return f;
}

std::vector<std::vector<int64_t>> hermite_normal_form(std::vector<std::vector<int64_t>> a) {
    if (a.empty()) return a;
    size_t cols = a[0].size();
    size_t r = 0;
    auto axpy = [](std::vector<int64_t>& x, const std::vector<int64_t>& y, int64_t q) {
        for (size_t k = 0; k < x.size(); ++k) x[k] -= q * y[k];
    };
    for (size_t col = 0; col < cols && r < a.size(); ++col) {
        while (true) {
            size_t best = a.size();
            for (size_t i = r; i < a.size(); ++i)
                if (a[i][col] && (best == a.size() || std::llabs(a[i][col]) < std::llabs(a[best][col]))) best = i;
            if (best == a.size()) break;
            std::swap(a[r], a[best]);
            bool done = true;
            for (size_t i = r + 1; i < a.size(); ++i)
                if (a[i][col]) {
                    axpy(a[i], a[r], a[i][col] / a[r][col]);
                    if (a[i][col]) done = false;
                }
            if (done) break;
        }
        if (r >= a.size() || !a[r][col]) continue;
        if (a[r][col] < 0)
            for (auto& x : a[r]) x = -x;
        for (size_t i = 0; i < r; ++i) {
            int64_t q = a[i][col] / a[r][col];
            if (a[i][col] - q * a[r][col] < 0) --q;
            axpy(a[i], a[r], q);
        }
        ++r;
    }
    a.resize(r);
    return a;
}

bool same_lattice(const std::vector<std::vector<int64_t>>& a, const std::vector<std::vector<int64_t>>& b) {
    return hermite_normal_form(a) == hermite_normal_form(b);
}

IdealComponent graded_component_basis(const WeilMonoid& M, const Labeling& L, int t) {
    int n = M.n();
    auto ws = words(n, t);
    std::map<MElem, size_t> first;
    std::vector<std::vector<int64_t>> rows;
    for (size_t k = 0; k < ws.size(); ++k) {
        MElem v = word_value(M, L, ws[k]);
        auto it = first.find(v);
        if (it == first.end()) {
            first[v] = k;
            continue;
        }
        std::vector<int64_t> row(ws.size(), 0);
        row[k] = 1;
        row[it->second] = -1;
        rows.push_back(row);
    }
    IdealComponent C;
    C.degree_t = t;
    C.n = n;
    C.basis = hermite_normal_form(rows);
    return C;
}

std::vector<int> section_word(const WeilMonoid& M, const Labeling& L, const MElem& x) {
    for (auto& w : words(M.n(), x.t))
        if (word_value(M, L, w) == x) return w;
    throw Error("SchemaError", "element not reached by any word");
}

namespace {

NCPoly concat_difference(const std::vector<int>& a1, const std::vector<int>& b1, const std::vector<int>& a2,
                         const std::vector<int>& b2) {
    std::vector<int> u(a1), v(a2);
    u.insert(u.end(), b1.begin(), b1.end());
    v.insert(v.end(), b2.begin(), b2.end());
    NCPoly f;
    f[u] += 1;
    f[v] -= 1;
    for (auto it = f.begin(); it != f.end();) it = it->second ? std::next(it) : f.erase(it);
    return f;
}

}  // namespace

std::optional<Witness> hochschild_witness(const WeilMonoid& M, const Labeling& L) {
    int n = M.n();
    if (n < 2) return std::nullopt;
    for (int i1 = 0; i1 < n; ++i1)
        for (int j1 = 0; j1 < n; ++j1)
            for (int i2 = i1; i2 < n; ++i2)
                for (int j2 = 0; j2 < n; ++j2) {
                    if (i2 == i1 && j2 <= j1) continue;
                    MElem X1 = L.elem(M, 1, i1), Y1 = L.elem(M, 1, j1), X2 = L.elem(M, 1, i2), Y2 = L.elem(M, 1, j2);
                    if (M.mul(X1, Y1) != M.mul(X2, Y2)) continue;
                    Witness w{1, X1, Y1, X2, Y2, {i1}, {j1}, {i2}, {j2}, {}};
                    w.vector = concat_difference(w.wX1, w.wY1, w.wX2, w.wY2);
                    return w;
                }
    return std::nullopt;
}

std::optional<Witness> lie_witness(const WeilMonoid& M, const Labeling& L, int tmax) {
    int n = M.n();
    if (n < 2) return std::nullopt;
    if (tmax < 0) tmax = n;
    for (int t = 1; t <= tmax; ++t)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                MElem X = L.elem(M, t, i), Y = L.elem(M, t, j);
                if (M.mul(X, Y) != M.mul(Y, X)) continue;
                Witness w{t, X, Y, Y, X, {}, {}, {}, {}, {}};
                w.wX1 = w.wY2 = section_word(M, L, X);
                w.wY1 = w.wX2 = section_word(M, L, Y);
                w.vector = concat_difference(w.wX1, w.wY1, w.wX2, w.wY2);
                return w;
            }
    return std::nullopt;
}

bool witness_sound(const WeilMonoid& M, const Labeling& L, const Witness& w) {
    if (w.vector.empty()) return false;
    std::map<MElem, int64_t> image;
    for (auto& [word, c] : w.vector) image[word_value(M, L, word)] += c;
    for (auto& [x, c] : image)
        if (c) return false;
    return M.mul(w.X1, w.Y1) == M.mul(w.X2, w.Y2);
}

Frob realize(const WeilMonoid& M, const Labeling& L, int t, int i) {
    if (!M.sigma_exponents) throw Error("SchemaError", "monoid has no Galois backing");
    return Frob{t * M.c, (*M.sigma_exponents)[L.at(M, t)[i]]};
}

bool galois_consistent(const Field& F, const WeilMonoid& M, const Labeling& L, int samples, uint64_t seed) {
    SplitMix64 rng(seed);
    int n = M.n();
    for (int it = 0; it < samples; ++it) {
        std::vector<Res> d;
        for (int k = 0; k < F.nu; ++k) d.push_back(F.rfrom_index(rng.below(F.q)));
        Elem z = F.from_digits(d);
        for (int t1 = 1; t1 <= 2; ++t1)
            for (int t2 = 1; t2 <= 2; ++t2)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        int k = star(M, L, i, j, t1, t2);
                        Elem lhs = F.apply(realize(M, L, t1, i), F.apply(realize(M, L, t2, j), z));
                        Elem rhs = F.apply(realize(M, L, t1 + t2, k), z);
                        if (lhs != rhs) return false;
                    }
    }
    return true;
}

std::vector<std::pair<std::string, Group>> small_groups() {
    return {
        {"C1", Group::cyclic(1)},
        {"C2", Group::cyclic(2)},
        {"C3", Group::cyclic(3)},
        {"C4", Group::cyclic(4)},
        {"C2xC2", Group::direct_product(Group::cyclic(2), Group::cyclic(2))},
        {"C5", Group::cyclic(5)},
        {"C6", Group::cyclic(6)},
        {"S3", Group::from_permutations({{1, 0, 2}, {1, 2, 0}})},
    };
}

}  // namespace pcurv
