#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcurv/connections.hpp"
#include "pcurv/rng.hpp"

namespace pcurv {

// permutation matrix times a diagonal of roots of unity in O_F; entry (i, perm[i]) = diag[i]
struct GaugeElement {
    std::vector<int> perm;
    std::vector<Elem> diag;

    static GaugeElement identity(const Field& F, int N);
    static GaugeElement permutation(const Field& F, std::vector<int> perm);
    int N() const { return (int)perm.size(); }
    EMat matrix(const Field& F) const;
    GaugeElement inverse(const Field& F) const;
    bool operator==(const GaugeElement& o) const { return perm == o.perm && diag == o.diag; }
};
GaugeElement operator*(const GaugeElement& a, const GaugeElement& b);
void validate(const Field& F, const GaugeElement& w);  // SchemaError unless diag are roots of unity in O_F
GaugeElement random_gauge(const Field& F, int N, SplitMix64& rng);

// Ad^{(tc)}(sigma)(i) = label of sigma phi_i sigma^{-1}; table[sigma][i]
std::vector<std::vector<int>> ad_map(const WeilMonoid& M, const Labeling& L, int t);
bool ad_is_homomorphism(const WeilMonoid& M, const std::vector<std::vector<int>>& ad);
bool ad_invariant(const EMat& q, const std::vector<std::vector<int>>& ad);

// homomorphism from a subgroup of Gal(E/F) (sigma exponents) to the gauge group
struct Cocycle {
    std::vector<int> tau;
    std::vector<GaugeElement> values;
    int index_of(const Field& F, int j) const;
};
void validate(const Field& F, const Cocycle& u);  // subgroup + homomorphism
bool is_trivial(const Field& F, const Cocycle& u);
bool is_phi_invariant(const Field& F, const Cocycle& u, const std::vector<Frob>& lifts);  // NotNormalized
bool is_metric_compatible(const Field& F, const Cocycle& u, const EMat& q);
Cocycle conjugate(const Field& F, const Cocycle& u, const GaugeElement& a);  // a^{-1} u a

struct CompatibilityReport {
    bool ok = true;
    bool torsion_scaled = false;  // LC torsion multiplied by p/pi
    int samples = 0;
    std::vector<std::string> failures;
};
CompatibilityReport connection_compatibility_check(const Field& F, const Cocycle& u, Flavor flavor, const EMat& q,
                                                   const TorsionSymbol* L, const std::vector<Frob>& lifts,
                                                   int samples, uint64_t seed);

// Lambda~_i(a) = Lambda_i(w a) for the metric w^t q w
bool gauge_covariance(const Field& F, Flavor flavor, const EMat& q, const TorsionSymbol* L,
                      const std::vector<Frob>& lifts, const GaugeElement& w, const EMat& a);

struct LegendreReport {
    std::vector<Elem> lambda;  // det Lambda_i(1)
    Elem D, ND;
    int legendre_ND = 0;
    bool squares_ok = false;   // lambda_i^2 = D^{p^s} / phi_i(D)
    bool norms_ok = false;     // N(lambda_i) = (N(D)/p) N(D)^{(p^s-1)/2}
    bool norms_agree = false;  // N(lambda_i) independent of i
    bool residue_one = false;  // lambda_i = 1 mod pi
    bool sqrt_exists = false;
    std::optional<bool> ratio_ok;       // lambda_1 / lambda_i = phi^s(sigma_i sqrt D / sqrt D)
    std::optional<bool> corollary_ok;   // only when D in F and sqrt D not in F
    std::string note;
    bool ok() const {
        return squares_ok && norms_ok && norms_agree && residue_one && ratio_ok.value_or(true) &&
               corollary_ok.value_or(true);
    }
};
// lifts[i] = phi^s sigma^{j_i}; the lift with j = 0 plays the role of index 1
LegendreReport legendre_verify(const Field& F, const EMat& q, const std::vector<Frob>& lifts, Flavor flavor,
                               const TorsionSymbol* L);

}  // namespace pcurv
