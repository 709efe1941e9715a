#include "pcurv/local_field.hpp"

#include <algorithm>

namespace pcurv {

namespace {

using Poly = std::vector<uint64_t>;

int64_t modp(int64_t a, int64_t p) {
    a %= p;
    return a < 0 ? a + p : a;
}

// remainder of a (low coefficients) modulo a monic b over F_p
std::vector<int64_t> poly_rem(std::vector<int64_t> a, const std::vector<int64_t>& b, int p) {
    int db = (int)b.size() - 1;
    for (int d = (int)a.size() - 1; d >= db; --d) {
        int64_t lead = modp(a[d], p);
        if (!lead) continue;
        for (int i = 0; i <= db; ++i) a[d - db + i] = modp(a[d - db + i] - lead * b[i], p);
    }
    a.resize(std::max(db, 0));
    for (auto& x : a) x = modp(x, p);
    return a;
}

}  // namespace

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool is_irreducible_mod_p(const std::vector<int64_t>& low, int p) {
    int f = (int)low.size();
    std::vector<int64_t> g(low);
    g.push_back(1);
    for (int d = 1; 2 * d <= f; ++d) {
        int64_t count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (int64_t idx = 0; idx < count; ++idx) {
            std::vector<int64_t> h(d + 1);
            int64_t x = idx;
            for (int i = 0; i < d; ++i) { h[i] = x % p; x /= p; }
            h[d] = 1;
            auto r = poly_rem(g, h, p);
            if (std::all_of(r.begin(), r.end(), [](int64_t v) { return v == 0; })) return false;
        }
    }
    return true;
}

std::vector<int64_t> default_modulus(int p, int f) {
    int64_t count = 1;
    for (int i = 0; i < f; ++i) count *= p;
    for (int64_t idx = 0; idx < count; ++idx) {
        std::vector<int64_t> low(f);
        int64_t x = idx;
        for (int i = 0; i < f; ++i) { low[i] = x % p; x /= p; }
        if (is_irreducible_mod_p(low, p)) return low;
    }
    throw Error("SchemaError", "no irreducible polynomial found");
}

bool Res::is_zero() const {
    return std::all_of(v.begin(), v.end(), [](int64_t x) { return x == 0; });
}

bool Elem::operator==(const Elem& o) const {
    int pr = std::min(prec, o.prec);
    if (prec == o.prec) return c == o.c;
    return F->with_prec(*this, pr).c == F->with_prec(o, pr).c;
}

bool Elem::is_zero() const {
    return std::all_of(c.begin(), c.end(), [](uint64_t x) { return x == 0; });
}

Field::Field(const FieldSpec& s) : p(s.p), f(s.f), e(s.e), nu(s.nu) {
    if (p < 3 || !is_prime(p)) throw Error("SchemaError", "p must be an odd prime");
    if (f < 1 || e < 1 || nu < 1) throw Error("SchemaError", "f, e, precision must be positive");
    m = (nu + e - 1) / e;
    unsigned __int128 big = 1;
    for (int i = 0; i < m; ++i) {
        big *= (unsigned)p;
        if (big >= ((unsigned __int128)1 << 62)) throw Error("SchemaError", "p^ceil(nu/e) too large");
    }
    M = (uint64_t)big;
    big = 1;
    for (int i = 0; i < f; ++i) {
        big *= (unsigned)p;
        if (big >= ((unsigned __int128)1 << 31)) throw Error("SchemaError", "residue field too large");
    }
    q = (uint64_t)big;

    if (s.modulus.empty()) {
        gbar = default_modulus(p, f);
    } else {
        if ((int)s.modulus.size() != f) throw Error("SchemaError", "residue_modulus must have f low coefficients");
        for (auto x : s.modulus) gbar.push_back(modp(x, p));
        if (!is_irreducible_mod_p(gbar, p)) throw Error("SchemaError", "residue_modulus is reducible");
    }
    for (auto x : gbar) ghat_.push_back((uint64_t)x);

    // Witt Frobenius: root of ghat congruent to t^p
    if (f == 1) {
        tau_pows_ = {1};
    } else {
        Poly t(f, 0);
        t[1] = 1;
        Poly tau = cpow(t, (uint64_t)p);
        auto eval = [&](const Poly& x, bool deriv) {
            Poly acc(f, 0), xp(f, 0);
            xp[0] = 1;
            int top = deriv ? f - 1 : f;
            for (int j = 0; j <= top; ++j) {
                uint64_t coef;
                if (deriv) coef = mm((uint64_t)(j + 1), (j + 1 == f) ? 1 : ghat_[j + 1]);
                else coef = (j == f) ? 1 : ghat_[j];
                for (int i = 0; i < f; ++i) acc[i] = ma(acc[i], mm(coef, xp[i]));
                xp = cmul(xp, x);
            }
            return acc;
        };
        for (int it = 0; it < m + 1; ++it) {
            Poly num = eval(tau, false);
            Poly den = eval(tau, true);
            Poly corr = cmul(num, cinv(den));
            for (int i = 0; i < f; ++i) tau[i] = ms(tau[i], corr[i]);
        }
        tau_pows_.assign((size_t)f * f, 0);
        Poly xp(f, 0);
        xp[0] = 1;
        for (int j = 0; j < f; ++j) {
            std::copy(xp.begin(), xp.end(), tau_pows_.begin() + (size_t)j * f);
            xp = cmul(xp, tau);
        }
    }

    if ((q - 1) % (uint64_t)e == 0) {
        std::vector<int> primes;
        for (int d = 2; d <= e; ++d)
            if (e % d == 0 && is_prime(d)) primes.push_back(d);
        for (uint64_t idx = 1; idx < q; ++idx) {
            Res x = rfrom_index(idx);
            if (rpow(x, (uint64_t)e) != rone()) continue;
            bool prim = true;
            for (int r : primes)
                if (rpow(x, (uint64_t)(e / r)) == rone()) prim = false;
            if (prim) {
                zeta_ = x;
                has_zeta_ = true;
                break;
            }
        }
        Poly y(f);
        for (int i = 0; i < f; ++i) y[i] = (uint64_t)zeta_.v[i];
        for (int it = 0; it < m; ++it) y = cpow(y, q);
        zeta_lift_ = y;
    }
}

FieldSpec Field::spec() const { return FieldSpec{p, f, e, nu, gbar}; }

const Res& Field::zeta() const {
    if (!has_zeta_) throw Error("SchemaError", "e does not divide p^f - 1; no Galois action over F");
    return zeta_;
}

uint64_t Field::mm(uint64_t a, uint64_t b) const { return (uint64_t)((unsigned __int128)a * b % M); }

Field::Poly Field::cmul(const Poly& a, const Poly& b) const {
    Poly r(2 * f - 1, 0);
    for (int i = 0; i < f; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < f; ++j) r[i + j] = ma(r[i + j], mm(a[i], b[j]));
    }
    for (int d = 2 * f - 2; d >= f; --d) {
        uint64_t lead = r[d];
        if (!lead) continue;
        for (int i = 0; i < f; ++i) r[d - f + i] = ms(r[d - f + i], mm(lead, ghat_[i]));
    }
    r.resize(f);
    return r;
}

Field::Poly Field::cpow(Poly a, uint64_t k) const {
    Poly r(f, 0);
    r[0] = 1 % M;
    while (k) {
        if (k & 1) r = cmul(r, a);
        a = cmul(a, a);
        k >>= 1;
    }
    return r;
}

Field::Poly Field::cinv(const Poly& a) const {
    Res r = rzero();
    for (int i = 0; i < f; ++i) r.v[i] = (int64_t)(a[i] % (uint64_t)p);
    if (r.is_zero()) throw Error("NotAUnit", "coefficient not invertible");
    Res ri = rinv(r);
    Poly y(f);
    for (int i = 0; i < f; ++i) y[i] = (uint64_t)ri.v[i];
    for (int k = 1; k < m; k *= 2) {
        Poly ay = cmul(a, y);
        Poly two(f, 0);
        two[0] = 2 % M;
        for (int i = 0; i < f; ++i) two[i] = ms(two[i], ay[i]);
        y = cmul(y, two);
    }
    return y;
}

Field::Poly Field::cfrob(const Poly& a) const {
    if (f == 1) return a;
    Poly r(f, 0);
    for (int j = 0; j < f; ++j) {
        if (!a[j]) continue;
        for (int i = 0; i < f; ++i) r[i] = ma(r[i], mm(a[j], tau_pows_[(size_t)j * f + i]));
    }
    return r;
}

Field::Poly Field::cfrob_pow(const Poly& a, int s) const {
    s = ((s % f) + f) % f;
    Poly r = a;
    for (int i = 0; i < s; ++i) r = cfrob(r);
    return r;
}

Field::Poly Field::cpart(const Elem& a, int k) const {
    return Poly(a.c.begin() + (size_t)k * f, a.c.begin() + (size_t)(k + 1) * f);
}

void Field::normalize(Elem& a) const {
    for (int k = 0; k < e; ++k) {
        int need = a.prec > k ? (a.prec - k + e - 1) / e : 0;
        uint64_t mod = 1;
        for (int i = 0; i < need; ++i) mod *= (uint64_t)p;
        for (int t = 0; t < f; ++t) a.c[(size_t)k * f + t] %= mod;
    }
}

Elem Field::make(int prec) const {
    Elem r;
    r.F = this;
    r.c.assign((size_t)e * f, 0);
    r.prec = prec < 0 ? nu : std::min(prec, nu);
    return r;
}

// residue field

Res Field::rzero() const { return Res{this, std::vector<int64_t>(f, 0)}; }

Res Field::rone() const {
    Res r = rzero();
    r.v[0] = 1;
    return r;
}

Res Field::rint(int64_t n) const {
    Res r = rzero();
    r.v[0] = modp(n, p);
    return r;
}

Res Field::rvec(std::vector<int64_t> v) const {
    if ((int)v.size() != f) throw Error("SchemaError", "residue element needs f coordinates");
    for (auto& x : v) x = modp(x, p);
    return Res{this, std::move(v)};
}

Res Field::radd(const Res& a, const Res& b) const {
    Res r = rzero();
    for (int i = 0; i < f; ++i) r.v[i] = (a.v[i] + b.v[i]) % p;
    return r;
}

Res Field::rsub(const Res& a, const Res& b) const {
    Res r = rzero();
    for (int i = 0; i < f; ++i) r.v[i] = modp(a.v[i] - b.v[i], p);
    return r;
}

Res Field::rneg(const Res& a) const { return rsub(rzero(), a); }

Res Field::rmul(const Res& a, const Res& b) const {
    std::vector<int64_t> t(2 * f - 1, 0);
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) t[i + j] = (t[i + j] + a.v[i] * b.v[j]) % p;
    std::vector<int64_t> g(gbar);
    g.push_back(1);
    return Res{this, poly_rem(t, g, p)};
}

Res Field::rpow(const Res& a, uint64_t k) const {
    Res r = rone(), b = a;
    while (k) {
        if (k & 1) r = rmul(r, b);
        b = rmul(b, b);
        k >>= 1;
    }
    return r;
}

Res Field::rinv(const Res& a) const {
    if (a.is_zero()) throw Error("NotAUnit", "zero has no inverse in the residue field");
    return rpow(a, q - 2);
}

Res Field::rfrob(const Res& a, int k) const {
    k = ((k % f) + f) % f;
    Res r = a;
    for (int i = 0; i < k; ++i) r = rpow(r, (uint64_t)p);
    return r;
}

bool Field::ris_square(const Res& a) const { return a.is_zero() || rpow(a, (q - 1) / 2) == rone(); }

Res Field::rsqrt(const Res& a) const {
    if (a.is_zero()) return a;
    if (!ris_square(a)) throw Error("NoSquareRoot", "residue is not a square");
    uint64_t Q = q - 1;
    int S = 0;
    while (Q % 2 == 0) { Q /= 2; ++S; }
    Res z;
    for (uint64_t idx = 1; idx < q; ++idx) {
        z = rfrom_index(idx);
        if (!ris_square(z)) break;
    }
    Res c = rpow(z, Q), t = rpow(a, Q), r = rpow(a, (Q + 1) / 2);
    int Mexp = S;
    while (t != rone()) {
        int i = 0;
        Res tt = t;
        while (tt != rone()) { tt = rmul(tt, tt); ++i; }
        Res b = c;
        for (int k = 0; k < Mexp - i - 1; ++k) b = rmul(b, b);
        Mexp = i;
        c = rmul(b, b);
        t = rmul(t, c);
        r = rmul(r, b);
    }
    return r;
}

uint64_t Field::rindex(const Res& a) const {
    uint64_t r = 0;
    for (int i = f - 1; i >= 0; --i) r = r * (uint64_t)p + (uint64_t)a.v[i];
    return r;
}

Res Field::rfrom_index(uint64_t idx) const {
    Res r = rzero();
    for (int i = 0; i < f; ++i) { r.v[i] = (int64_t)(idx % (uint64_t)p); idx /= (uint64_t)p; }
    return r;
}

// ring elements

Elem Field::zero(int prec) const { return make(prec); }

Elem Field::one(int prec) const { return from_int(1, prec); }

Elem Field::from_int(int64_t n, int prec) const {
    Elem r = make(prec);
    int64_t mv = n % (int64_t)M;
    if (mv < 0) mv += (int64_t)M;
    r.c[0] = (uint64_t)mv;
    normalize(r);
    return r;
}

Elem Field::pi() const {
    Elem r = make(-1);
    if (e == 1) r.c[0] = (uint64_t)p % M;
    else r.c[(size_t)f] = 1;
    normalize(r);
    return r;
}

Elem Field::lift(const Res& x, int prec) const {
    Elem r = make(prec);
    for (int i = 0; i < f; ++i) r.c[i] = (uint64_t)x.v[i];
    normalize(r);
    return r;
}

Elem Field::teich(const Res& x, int prec) const {
    Poly y(f);
    for (int i = 0; i < f; ++i) y[i] = (uint64_t)x.v[i];
    for (int it = 0; it < m; ++it) y = cpow(y, q);
    Elem r = make(prec);
    for (int i = 0; i < f; ++i) r.c[i] = y[i];
    normalize(r);
    return r;
}

Elem Field::from_digits(const std::vector<Res>& d) const {
    if (d.empty() || (int)d.size() > nu) throw Error("SchemaError", "digit list length must be in [1, precision]");
    int pr = (int)d.size();
    Elem r = zero(pr);
    for (int k = pr - 1; k >= 0; --k) r = add(mul_pi(r), teich(d[k], pr));
    return with_prec(r, pr);
}

std::vector<Res> Field::digits(const Elem& a) const {
    std::vector<Res> out;
    Elem x = a;
    int pr = a.prec;
    for (int k = 0; k < pr; ++k) {
        Res d = residue(x);
        out.push_back(d);
        if (k + 1 < pr) x = div_pi(sub(x, teich(d)));
    }
    return out;
}

Res Field::residue(const Elem& a) const {
    if (a.prec < 1) throw Error("InsufficientPrecision", "residue of an element with precision 0");
    Res r = rzero();
    for (int i = 0; i < f; ++i) r.v[i] = (int64_t)(a.c[i] % (uint64_t)p);
    return r;
}

Res Field::digit(const Elem& a, int k) const {
    if (k >= a.prec) throw Error("InsufficientPrecision", "digit beyond precision");
    return digits(with_prec(a, k + 1))[k];
}

Elem Field::with_prec(const Elem& a, int prec) const {
    Elem r = a;
    r.prec = std::min(prec, a.prec);
    normalize(r);
    return r;
}

Elem Field::add(const Elem& a, const Elem& b) const {
    Elem r = make(std::min(a.prec, b.prec));
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = ma(a.c[i], b.c[i]);
    normalize(r);
    return r;
}

Elem Field::sub(const Elem& a, const Elem& b) const {
    Elem r = make(std::min(a.prec, b.prec));
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = ms(a.c[i], b.c[i]);
    normalize(r);
    return r;
}

Elem Field::neg(const Elem& a) const { return sub(zero(a.prec), a); }

Elem Field::mul(const Elem& a, const Elem& b) const {
    Elem r = make(std::min(a.prec, b.prec));
    std::vector<Poly> acc(2 * e - 1, Poly(f, 0));
    for (int k = 0; k < e; ++k) {
        Poly ak = cpart(a, k);
        if (std::all_of(ak.begin(), ak.end(), [](uint64_t x) { return x == 0; })) continue;
        for (int l = 0; l < e; ++l) {
            Poly pr = cmul(ak, cpart(b, l));
            for (int t = 0; t < f; ++t) acc[k + l][t] = ma(acc[k + l][t], pr[t]);
        }
    }
    for (int d = 2 * e - 2; d >= e; --d)
        for (int t = 0; t < f; ++t) acc[d - e][t] = ma(acc[d - e][t], mm((uint64_t)p, acc[d][t]));
    for (int k = 0; k < e; ++k)
        for (int t = 0; t < f; ++t) r.c[(size_t)k * f + t] = acc[k][t];
    normalize(r);
    return r;
}

Elem Field::pow(const Elem& a, uint64_t k) const {
    Elem r = one(a.prec), b = a;
    while (k) {
        if (k & 1) r = mul(r, b);
        b = mul(b, b);
        k >>= 1;
    }
    return r;
}

Elem Field::inv(const Elem& a) const {
    Res r = residue(a);
    if (r.is_zero()) throw Error("NotAUnit", "element is not a unit");
    Elem y = lift(rinv(r), a.prec);
    Elem two = from_int(2, a.prec);
    for (int k = 1; k < a.prec; k *= 2) y = mul(y, sub(two, mul(a, y)));
    return y;
}

Elem Field::mul_pi(const Elem& a, int k) const {
    Elem x = a;
    for (int it = 0; it < k; ++it) {
        Elem r = make(std::min(x.prec + 1, nu));
        for (int t = 0; t < f; ++t) {
            r.c[t] = mm((uint64_t)p, x.c[(size_t)(e - 1) * f + t]);
            for (int j = 1; j < e; ++j) r.c[(size_t)j * f + t] = x.c[(size_t)(j - 1) * f + t];
        }
        normalize(r);
        x = std::move(r);
    }
    return x;
}

Elem Field::div_pi(const Elem& a, int k) const {
    Elem x = a;
    for (int it = 0; it < k; ++it) {
        if (x.prec < 1) throw Error("InsufficientPrecision", "division by pi at precision 0");
        for (int t = 0; t < f; ++t)
            if (x.c[t] % (uint64_t)p) throw Error("DivisionNotExact", "element not divisible by pi");
        Elem r = make(x.prec - 1);
        for (int t = 0; t < f; ++t) {
            for (int j = 0; j + 1 < e; ++j) r.c[(size_t)j * f + t] = x.c[(size_t)(j + 1) * f + t];
            r.c[(size_t)(e - 1) * f + t] = x.c[t] / (uint64_t)p;
        }
        normalize(r);
        x = std::move(r);
    }
    return x;
}

bool Field::in_base_field(const Elem& a) const {
    for (size_t i = (size_t)f; i < a.c.size(); ++i)
        if (a.c[i]) return false;
    return true;
}

Elem Field::sigma_pow(const Elem& a, int j) const {
    j = ((j % e) + e) % e;
    if (j == 0) return a;
    zeta();
    Elem r = a;
    Poly z = cpow(zeta_lift_, (uint64_t)j), zk(f, 0);
    zk[0] = 1 % M;
    for (int k = 0; k < e; ++k) {
        Poly part = cmul(cpart(a, k), zk);
        std::copy(part.begin(), part.end(), r.c.begin() + (size_t)k * f);
        zk = cmul(zk, z);
    }
    normalize(r);
    return r;
}

Elem Field::frob_pow(const Elem& a, int s) const {
    s = ((s % f) + f) % f;
    if (s == 0) return a;
    Elem r = a;
    for (int k = 0; k < e; ++k) {
        Poly part = cfrob_pow(cpart(a, k), s);
        std::copy(part.begin(), part.end(), r.c.begin() + (size_t)k * f);
    }
    normalize(r);
    return r;
}

Elem Field::apply(const Frob& fr, const Elem& a) const { return frob_pow(sigma_pow(a, fr.j), fr.s); }

Elem Field::apply_inv(const Frob& fr, const Elem& a) const { return sigma_pow(frob_pow(a, -fr.s), -fr.j); }

uint64_t Field::ppow(int s) const {
    uint64_t r = 1;
    for (int i = 0; i < s; ++i) r *= (uint64_t)p;
    return r;
}

int Field::pinv_mod_e(int s) const {
    if (e == 1) return 0;
    int pe = p % e, pinv = 0;
    for (int x = 1; x < e; ++x)
        if ((pe * x) % e == 1) pinv = x;
    if (!pinv) throw Error("SchemaError", "p not invertible mod e");
    int base = s >= 0 ? pinv : pe;
    int r = 1;
    for (int i = 0; i < std::abs(s); ++i) r = (r * base) % e;
    return r;
}

Frob Field::compose(const Frob& a, const Frob& b) const {
    int j = e == 1 ? 0 : (a.j * pinv_mod_e(b.s) + b.j) % e;
    return Frob{a.s + b.s, j};
}

Frob Field::inverse(const Frob& a) const {
    int j = e == 1 ? 0 : ((e - a.j % e) * pinv_mod_e(-a.s)) % e;
    return Frob{-a.s, j};
}

Elem Field::delta(const Frob& fr, const Elem& a) const {
    if (a.prec < 2) throw Error("InsufficientPrecision", "pi-derivation needs precision >= 2");
    if (fr.s < 0) throw Error("SchemaError", "negative degree");
    Elem d = sub(apply(fr, a), pow(a, ppow(fr.s)));
    for (int t = 0; t < f; ++t)
        if (d.c[t] % (uint64_t)p) throw Error("DivisionNotExact", "phi(a) - a^{p^s} not divisible by pi");
    return div_pi(d);
}

Elem Field::norm(const Elem& a) const {
    Elem r = a;
    for (int j = 1; j < e; ++j) r = mul(r, sigma_pow(a, j));
    return r;
}

int Field::legendre(const Elem& a) const {
    if (!in_base_field(a)) throw Error("NotInBaseField", "Legendre symbol needs an element of O_F");
    Res r = residue(a);
    if (r.is_zero()) throw Error("NotAUnit", "Legendre symbol of a non-unit");
    return rpow(r, (q - 1) / 2) == rone() ? 1 : -1;
}

Elem Field::sqrt(const Elem& a) const {
    Res r = residue(a);
    if (r.is_zero()) throw Error("NotAUnit", "square root of a non-unit");
    if (!ris_square(r)) throw Error("NoSquareRoot", "residue is not a square");
    Elem y = lift(rsqrt(r), a.prec);
    Elem half = inv(from_int(2, a.prec));
    for (int k = 1; k < a.prec; k *= 2) y = mul(half, add(y, mul(a, inv(y))));
    return y;
}

Elem operator+(const Elem& a, const Elem& b) { return a.F->add(a, b); }
Elem operator-(const Elem& a, const Elem& b) { return a.F->sub(a, b); }
Elem operator-(const Elem& a) { return a.F->neg(a); }
Elem operator*(const Elem& a, const Elem& b) { return a.F->mul(a, b); }
Res operator+(const Res& a, const Res& b) { return a.F->radd(a, b); }
Res operator-(const Res& a, const Res& b) { return a.F->rsub(a, b); }
Res operator-(const Res& a) { return a.F->rneg(a); }
Res operator*(const Res& a, const Res& b) { return a.F->rmul(a, b); }

}  // namespace pcurv
