#pragma once

#include <optional>
#include <vector>

#include "pcurv/matrix.hpp"
#include "pcurv/weil_monoid.hpp"

namespace pcurv {

struct TorsionSymbol {
    enum class Kind { Zero, Additive, Multiplicative };
    Kind kind = Kind::Zero;
    std::vector<EMat> beta;      // beta[k](i, j) = beta^k_{ij}
    std::optional<Elem> scale;   // multiplies every component; default 1

    // L^k_{ij} evaluated at Lambda_m = 1 + pi G_m; G == nullptr means Lambda = 1
    Elem eval(const Field& F, int k, int i, int j, const std::vector<EMat>* G) const;
    bool vanishes_at_one(const Field& F, int n) const;
};

TorsionSymbol canonical_torsion(const Field& F, const SymbolTables& T, TorsionSymbol::Kind kind,
                                std::optional<Elem> scale = std::nullopt);

enum class Flavor { LeviCivita, Chern };
enum class SolveMethod { Christoffel, Elimination };

struct ConnectionAtPoint {
    Flavor flavor = Flavor::LeviCivita;
    EMat point;
    std::vector<Frob> lifts;
    std::vector<EMat> lambda;  // Lambda_i(a)
    std::vector<EMat> G;       // Gamma_i^t = (Lambda_i - 1)/pi ; G[i](k, j) = Gamma^k_{ij}
    int prec = 0;              // precision of lambda
};

// A_i(a), B(a) of the metric equation
struct MetricSystem {
    std::vector<EMat> A;
    EMat B;
};
MetricSystem metric_system(const EMat& q, const std::vector<Frob>& lifts, const EMat& a);

ConnectionAtPoint solve_levi_civita(const EMat& q, const TorsionSymbol& L, const std::vector<Frob>& lifts,
                                    const EMat& a, SolveMethod method = SolveMethod::Christoffel);
ConnectionAtPoint solve_chern(const EMat& q, const std::vector<Frob>& lifts, const EMat& a,
                              SolveMethod method = SolveMethod::Christoffel);

// both defining equations hold exactly at the connection's precision
bool residual_ok(const ConnectionAtPoint& c, const EMat& q, const TorsionSymbol* L);

struct ChristoffelModPi {
    std::vector<RMat> upper;  // upper[i](k, j) = Gamma^k_{ij} mod pi
    std::vector<RMat> lower;  // lower[i](j, k) = Gamma_{ijk} mod pi  (when N = n)
};

ChristoffelModPi christoffel_from_connection(const ConnectionAtPoint& c, const EMat& q);
ChristoffelModPi christoffel_lc_mod_pi(const EMat& q, const TorsionSymbol& L, const std::vector<Frob>& lifts);
ChristoffelModPi christoffel_chern_mod_pi(const EMat& q, const std::vector<Frob>& lifts);
std::vector<RMat> lower_indices(const std::vector<RMat>& upper, const RMat& qfrob);
std::vector<RMat> raise_indices(const std::vector<RMat>& lower, const RMat& qfrob);

// q_hh^{t-1} q
EMat canonical_secondary_metric(const EMat& q, int h, int t);
// q^{(s)}_{ij} = prod_r q_{w_i[r], w_j[r]}
EMat secondary_metric_from_words(const EMat& q, const std::vector<std::vector<int>>& words);
std::vector<std::vector<int>> labeling_words(const Labeling& L, int n, int t);

struct BurtaReport {
    bool additive_symmetric = false;        // 1)
    bool additive_matrix_form = false;      // 2)
    bool multiplicative_symmetric = false;  // 1*)
    bool multiplicative_matrix_form = false;  // 2*)
    bool agree() const {
        return additive_symmetric == additive_matrix_form && multiplicative_symmetric == multiplicative_matrix_form;
    }
};
BurtaReport verify_prop_burta(const ConnectionAtPoint& c, const std::vector<EMat>& beta);

}  // namespace pcurv
