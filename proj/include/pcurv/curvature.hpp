#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcurv/connections.hpp"

namespace pcurv {

// everything needed to produce connections at degrees t*c
struct Geometry {
    const Field* F = nullptr;
    WeilMonoid M;
    Labeling L;
    EMat q;                                        // q^{(c)}
    Flavor flavor = Flavor::LeviCivita;
    TorsionSymbol::Kind torsion_kind = TorsionSymbol::Kind::Additive;
    std::optional<Elem> torsion_scale;
    int h = 0;                                     // canonical secondary metric index
    SolveMethod method = SolveMethod::Christoffel;
    std::map<int, EMat> metric_override;           // t -> q^{(tc)}
    std::map<int, TorsionSymbol> torsion_override; // t -> L^{(tc)}

    int n() const { return M.n(); }
    int N() const { return q.rows; }
    EMat metric(int t) const;
    TorsionSymbol torsion(int t) const;
    std::vector<Frob> lifts(int t) const;
    ChristoffelModPi christoffel(int t) const;
    ConnectionAtPoint connection(int t, const EMat& a) const;
};

struct CurvatureTensor {
    int n = 0, N = 0;
    std::vector<Res> upper;  // R^k_{ijl} at [((k*n + i)*n + j)*N + l]
    std::vector<Res> lower;  // R_{ijkl} at [((i*n + j)*N + k)*N + l]

    const Res& up(int k, int i, int j, int l) const { return upper[(((size_t)k * n + i) * n + j) * N + l]; }
    Res& up(int k, int i, int j, int l) { return upper[(((size_t)k * n + i) * n + j) * N + l]; }
    const Res& low(int i, int j, int k, int l) const { return lower[(((size_t)i * n + j) * N + k) * N + l]; }
    Res& low(int i, int j, int k, int l) { return lower[(((size_t)i * n + j) * N + k) * N + l]; }
};

CurvatureTensor curvature_reduced(const Geometry& g);
void lower_curvature(CurvatureTensor& T, const RMat& qbar, int twist);

// abelian only; lower part filled
CurvatureTensor tery_rhs(const Geometry& g);

struct SymmetryViolation {
    std::string identity;  // antisym_ij, antisym_kl, bianchi, pair
    std::array<int, 4> idx;
};
std::vector<SymmetryViolation> symmetry_report(const CurvatureTensor& T);

// (phi_i^(t1 c) phi_j^(t2 c) composite defect)/pi at a, entry (k, l) = R^k_{ijl}
EMat curvature_full_at_point(const Geometry& g, int i, int t1, int j, int t2, const EMat& a);

struct MultiplicativeCurvature {
    EMat star;    // R*(phi_i, phi_j)(1)
    EMat naive;   // R**(phi_i, phi_j)(1)
    RMat rstar;   // (k, l) -> R^{k*}_{ijl}
    RMat rnaive;  // (k, l) -> R^{k**}_{ijl}
};
MultiplicativeCurvature multiplicative_curvature_identity(const Geometry& g, int i, int j);

// derivation of phi_i phi_j, both of degree c
Res composed_delta_residue(const Field& F, const Frob& a, const Frob& b, const Elem& x);

struct ChernCurvature {
    // r[i](j) = 1/2 lambda^{-p^{2c}} (delta_ij lambda - delta_ji lambda) ; R^k_{ijl} = r * delta_kl
    RMat r;
};
ChernCurvature chern_curvature(const Geometry& g, const EMat& q2c, const Elem& lambda);
// F[h](i, j)
std::vector<RMat> chern_tensor(const Geometry& g);

RMat epsilon_matrix(const Field& F, const std::vector<Frob>& lifts);
struct KNWitness {
    std::array<int, 4> idx;
    Res value;
};
std::vector<KNWitness> kulkarni_nomizu(const Field& F, const RMat& eps, const RMat& c);
std::vector<KNWitness> kn_witnesses(const Geometry& g);

// entries are r * Fr^s with one common s
struct TwistedMatrix {
    RMat m;
    int s = 0;
};
TwistedMatrix operator*(const TwistedMatrix& a, const TwistedMatrix& b);
TwistedMatrix operator-(const TwistedMatrix& a, const TwistedMatrix& b);
TwistedMatrix operator+(const TwistedMatrix& a, const TwistedMatrix& b);

TwistedMatrix reduced_connection_matrix(const Geometry& g, const ChristoffelModPi& ch, int t, int i);
TwistedMatrix reduced_curvature_matrix(const Geometry& g, const CurvatureTensor& T, int i, int j);
// commutator - bracket == curvature matrix for every (i, j)
bool reduced_matrices_consistent(const Geometry& g, const CurvatureTensor& T);

// invariant expressions: sums over all assignments of nvars index variables
struct InvFactor {
    enum class Kind { Q, Qinv, X, Y };
    Kind kind = Kind::Q;
    std::vector<int> slots;  // >= 0 variable, < 0 fixed index -1-slot
};
struct InvMonomial {
    int64_t coeff = 1;
    std::vector<InvFactor> factors;
};
struct InvariantExpr {
    std::string name;
    int nvars = 0;
    std::vector<InvMonomial> terms;
};

std::vector<InvariantExpr> invariant_catalog();
InvariantExpr parse_invariant(const std::string& name, const std::string& text);
std::string to_string(const InvariantExpr& I);
bool formally_invariant(const InvariantExpr& I, int n);

struct InvariantData {
    RMat q;
    RMat qinv;
    const CurvatureTensor* T = nullptr;
    const std::vector<RMat>* Y = nullptr;
};
InvariantData invariant_data(const EMat& q, const CurvatureTensor* T, const std::vector<RMat>* Y);
Res evaluate(const Field& F, const InvariantExpr& I, const InvariantData& d);
std::vector<InvariantExpr> riem_ideal_generators();
// adding generator * monomial of I leaves the value unchanged
bool respects_riem_ideal(const Field& F, const InvariantExpr& I, const InvariantData& d);

Geometry relabel(const Geometry& g, const std::vector<int>& eps);
bool sigma_equivariance(const Geometry& g, const std::vector<int>& eps);
bool invariant_stable(const Geometry& g, const InvariantExpr& I, const std::vector<int>& eps);

}  // namespace pcurv
