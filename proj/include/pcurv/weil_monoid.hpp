#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcurv/local_field.hpp"

namespace pcurv {

// finite group given by its Cayley table over {0..n-1}
struct Group {
    int n = 1;
    std::vector<std::vector<int>> mul;
    int identity = 0;

    static Group from_table(std::vector<std::vector<int>> table);
    static Group cyclic(int n);
    static Group direct_product(const Group& a, const Group& b);
    static Group from_permutations(const std::vector<std::vector<int>>& gens);
    int inv(int g) const;
    bool is_abelian() const;
    bool is_automorphism(const std::vector<int>& theta) const;
    std::vector<std::vector<int>> automorphisms() const;
};

// element (s, g) of the semidirect product cN x| S, s counted in units of c
struct MElem {
    int t = 0;
    int g = 0;
    bool operator==(const MElem& o) const = default;
    auto operator<=>(const MElem& o) const = default;
};

class WeilMonoid {
public:
    WeilMonoid() = default;
    WeilMonoid(Group S, std::vector<int> theta, int c);

    // subgroup of Gal(E/F) given by sigma exponents, theta = conjugation by phi^c
    static WeilMonoid galois(const Field& F, const std::vector<int>& exponents, int c);

    Group S;
    std::vector<int> theta;
    int c = 1;
    std::optional<std::vector<int>> sigma_exponents;  // galois backing

    int n() const { return S.n; }
    int theta_pow(int g, int k) const;
    int theta_order() const;
    MElem mul(const MElem& a, const MElem& b) const;
    bool is_abelian() const;
    bool is_associative() const;
};

// lambda_t : {0..n-1} -> S labels the degree t*c piece
struct Labeling {
    std::vector<int> omega;                  // degree c
    std::vector<int> gamma;                  // gamma(t c) for t = 1, 2, ...; last value repeats
    std::vector<std::vector<int>> explicit_;  // optional explicit bijections for t = 1, 2, ...

    static Labeling canonical(int n, int h = 0);
    std::vector<int> at(const WeilMonoid& M, int t) const;
    MElem elem(const WeilMonoid& M, int t, int i) const { return {t, at(M, t)[i]}; }
    int index_of(const WeilMonoid& M, const MElem& x) const;
    bool is_coherent(const WeilMonoid& M, int tmax) const;
};

// alpha[k](i,j) = 1 iff phi_i^{(s)} phi_j^{(r)} = phi_k^{(s+r)}
struct SymbolTables {
    int n = 0;
    std::vector<std::vector<int>> star;                   // star[i][j] = k
    std::vector<std::vector<std::vector<int>>> alpha;     // alpha[k][i][j]
    std::vector<std::vector<std::vector<int>>> ell;       // ell[k][i][j] = [i*j = k] - [(j*i)_{r,s} = k]
};

SymbolTables symbol_tables(const WeilMonoid& M, const Labeling& L, int t1, int t2);
int star(const WeilMonoid& M, const Labeling& L, int i, int j, int t1, int t2);
int centralizing_power(const WeilMonoid& M, const Labeling& L, int i);

// noncommutative integer polynomials, words over {0..n-1}
using NCPoly = std::map<std::vector<int>, int64_t>;
std::string to_string(const NCPoly& f);
NCPoly parse_ncpoly(const std::string& s);

std::vector<NCPoly> ideal_generators(const WeilMonoid& M, const Labeling& L);
MElem word_value(const WeilMonoid& M, const Labeling& L, const std::vector<int>& word);
std::vector<std::vector<int>> words(int n, int len);  // lexicographic
int64_t word_rank(int n, const std::vector<int>& w);

struct IdealComponent {
    int degree_t = 0;  // degree t*c
    int n = 0;
    std::vector<std::vector<int64_t>> basis;  // rows over the n^t monomials, Hermite normal form
    int rank() const { return (int)basis.size(); }
};

IdealComponent graded_component_basis(const WeilMonoid& M, const Labeling& L, int t);
std::vector<int64_t> to_vector(const NCPoly& f, int n, int t);
NCPoly from_vector(const std::vector<int64_t>& v, int n, int t);

std::vector<std::vector<int64_t>> hermite_normal_form(std::vector<std::vector<int64_t>> rows);
bool same_lattice(const std::vector<std::vector<int64_t>>& a, const std::vector<std::vector<int64_t>>& b);

struct Witness {
    int t = 1;  // degree t*c of X, Y
    MElem X1, Y1, X2, Y2;
    std::vector<int> wX1, wY1, wX2, wY2;  // section words
    NCPoly vector;
};

std::optional<Witness> hochschild_witness(const WeilMonoid& M, const Labeling& L);
std::optional<Witness> lie_witness(const WeilMonoid& M, const Labeling& L, int tmax = -1);
bool witness_sound(const WeilMonoid& M, const Labeling& L, const Witness& w);

std::vector<int> section_word(const WeilMonoid& M, const Labeling& L, const MElem& x);

// realization of phi_i^{(tc)} as phi^{tc} sigma^j
Frob realize(const WeilMonoid& M, const Labeling& L, int t, int i);
bool galois_consistent(const Field& F, const WeilMonoid& M, const Labeling& L, int samples, uint64_t seed);

// small groups of order <= 6 for property checks
std::vector<std::pair<std::string, Group>> small_groups();

}  // namespace pcurv
