#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcurv {

struct Error : std::runtime_error {
    std::string kind;
    Error(std::string k, const std::string& msg) : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

class Field;

// element of F_{p^f}, coordinates in the basis 1, t, ..., t^{f-1}
struct Res {
    const Field* F = nullptr;
    std::vector<int64_t> v;
    bool operator==(const Res& o) const { return v == o.v; }
    bool operator!=(const Res& o) const { return v != o.v; }
    bool is_zero() const;
};

// element of O_E / pi^prec, stored as sum_{k<e} a_k(t) pi^k with a_k in Z[t]/(p^m, g)
struct Elem {
    const Field* F = nullptr;
    std::vector<uint64_t> c;  // c[k*f + t]
    int prec = 0;
    bool operator==(const Elem& o) const;
    bool operator!=(const Elem& o) const { return !(*this == o); }
    bool is_zero() const;
};

// phi^s sigma^j ; phi the Witt Frobenius fixing pi, sigma(pi) = zeta_e pi
struct Frob {
    int s = 0;
    int j = 0;
    bool operator==(const Frob& o) const = default;
};

struct FieldSpec {
    int p = 5, f = 1, e = 1, nu = 4;
    std::vector<int64_t> modulus;  // c_0..c_{f-1} of the monic residue modulus; empty = default
};

class Field {
public:
    explicit Field(const FieldSpec& spec);

    int p, f, e, nu, m;
    uint64_t M;                     // p^m
    uint64_t q;                     // p^f
    std::vector<int64_t> gbar;      // residue modulus, monic, low coefficients
    bool galois_ok() const { return has_zeta_; }
    const Res& zeta() const;        // primitive e-th root of unity in F_q
    FieldSpec spec() const;

    // residue field
    Res rzero() const;
    Res rone() const;
    Res rint(int64_t n) const;
    Res rvec(std::vector<int64_t> v) const;
    Res radd(const Res& a, const Res& b) const;
    Res rsub(const Res& a, const Res& b) const;
    Res rneg(const Res& a) const;
    Res rmul(const Res& a, const Res& b) const;
    Res rpow(const Res& a, uint64_t k) const;
    Res rinv(const Res& a) const;
    Res rfrob(const Res& a, int k) const;  // a^{p^k}, k may be negative
    bool ris_square(const Res& a) const;
    Res rsqrt(const Res& a) const;
    uint64_t rindex(const Res& a) const;   // sum v_i p^i
    Res rfrom_index(uint64_t idx) const;

    // O_E / pi^nu
    Elem zero(int prec = -1) const;
    Elem one(int prec = -1) const;
    Elem from_int(int64_t n, int prec = -1) const;
    Elem pi() const;
    Elem lift(const Res& r, int prec = -1) const;      // coordinate lift (not Teichmuller)
    Elem teich(const Res& r, int prec = -1) const;
    Elem from_digits(const std::vector<Res>& d) const;
    std::vector<Res> digits(const Elem& a) const;
    Res residue(const Elem& a) const;
    Res digit(const Elem& a, int k) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(const Elem& a, uint64_t k) const;
    Elem inv(const Elem& a) const;
    Elem mul_pi(const Elem& a, int k = 1) const;
    Elem div_pi(const Elem& a, int k = 1) const;
    Elem with_prec(const Elem& a, int prec) const;
    bool is_unit(const Elem& a) const { return !residue(a).is_zero(); }
    bool in_base_field(const Elem& a) const;

    Elem apply(const Frob& fr, const Elem& a) const;
    Elem apply_inv(const Frob& fr, const Elem& a) const;
    Elem delta(const Frob& fr, const Elem& a) const;
    Frob compose(const Frob& a, const Frob& b) const;  // a after b
    Frob inverse(const Frob& a) const;
    uint64_t ppow(int s) const;                          // p^s
    int pinv_mod_e(int s) const;                         // p^{-s} mod e

    Elem norm(const Elem& a) const;
    int legendre(const Elem& a) const;
    Elem sqrt(const Elem& a) const;  // throws NoSquareRoot

private:
    using Poly = std::vector<uint64_t>;
    std::vector<uint64_t> ghat_;           // monic lift, low coefficients
    Poly tau_pows_;                         // tau^j, j<f, flattened
    Res zeta_;
    bool has_zeta_ = false;
    Poly zeta_lift_;                        // Teichmuller lift of zeta in the coefficient ring

    uint64_t mm(uint64_t a, uint64_t b) const;
    uint64_t ma(uint64_t a, uint64_t b) const { uint64_t r = a + b; return r >= M ? r - M : r; }
    uint64_t ms(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + M - b; }
    Poly cmul(const Poly& a, const Poly& b) const;
    Poly cinv(const Poly& a) const;
    Poly cfrob(const Poly& a) const;
    Poly cfrob_pow(const Poly& a, int s) const;
    Poly cpow(Poly a, uint64_t k) const;
    Poly cpart(const Elem& a, int k) const;
    void normalize(Elem& a) const;
    Elem make(int prec) const;
    Elem sigma_pow(const Elem& a, int j) const;
    Elem frob_pow(const Elem& a, int s) const;
};

Elem operator+(const Elem& a, const Elem& b);
Elem operator-(const Elem& a, const Elem& b);
Elem operator-(const Elem& a);
Elem operator*(const Elem& a, const Elem& b);
Res operator+(const Res& a, const Res& b);
Res operator-(const Res& a, const Res& b);
Res operator-(const Res& a);
Res operator*(const Res& a, const Res& b);

bool is_irreducible_mod_p(const std::vector<int64_t>& monic_low, int p);
std::vector<int64_t> default_modulus(int p, int f);
bool is_prime(int64_t n);

}  // namespace pcurv
