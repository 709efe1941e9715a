#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "pcurv/curvature.hpp"
#include "pcurv/sampling.hpp"

using namespace pcurv;

namespace {

struct Config {
    int p, e, f;
};
const Config kConfigs[] = {{5, 2, 1}, {7, 3, 1}, {13, 3, 1}, {5, 2, 2}, {5, 3, 2}};

Geometry make(const Field& F, int e, Flavor fl) {
    std::vector<int> ex(e);
    std::iota(ex.begin(), ex.end(), 0);
    Geometry g;
    g.F = &F;
    g.M = WeilMonoid::galois(F, ex, 1);
    g.L = Labeling::canonical(e);
    g.flavor = fl;
    return g;
}

std::vector<std::vector<int>> all_perms(int n) {
    std::vector<int> e(n);
    std::iota(e.begin(), e.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(e);
    while (std::next_permutation(e.begin(), e.end()));
    return out;
}

}  // namespace

TEST_CASE("n = 2 sectional curvature against its closed form") {
    Field F(FieldSpec{5, 1, 2, 4, {}});
    Geometry g = make(F, 2, Flavor::LeviCivita);
    auto lifts = g.lifts(1);
    SplitMix64 r(17);
    Res mhalf = F.rneg(F.rinv(F.rint(2)));
    for (int it = 0; it < 10; ++it) {
        g.q = random_metric(F, 2, r);
        auto T = curvature_reduced(g);
        // delta^{(2)}_{ij} x = delta_i pi (delta_j x)^p mod pi
        auto d2 = [&](int i, int j, const Elem& x) {
            return F.residue(F.delta(lifts[i], F.pi())) * F.rfrob(F.residue(F.delta(lifts[j], x)), 1);
        };
        Res want = mhalf * (d2(1, 1, g.q(0, 0)) - F.rint(2) * d2(0, 1, g.q(0, 1)) + d2(0, 0, g.q(1, 1)));
        CHECK(T.low(0, 1, 0, 1) == want);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) CHECK(T.up(k, i, i, l).is_zero());
    }
}

TEST_CASE("two curvature pipelines agree") {
    for (const auto& c : kConfigs) {
        Field F(FieldSpec{c.p, c.f, c.e, 4, {}});
        SplitMix64 r(c.p * 7 + c.e + c.f);
        for (Flavor fl : {Flavor::LeviCivita, Flavor::Chern}) {
            Geometry g = make(F, c.e, fl);
            bool ab = g.M.is_abelian();
            for (int it = 0; it < 3; ++it) {
                g.q = random_metric(F, c.e, r);
                auto T = curvature_reduced(g);
                EMat one = identity(F, c.e);
                for (int i = 0; i < c.e; ++i)
                    for (int j = 0; j < c.e; ++j) {
                        EMat R = curvature_full_at_point(g, i, 1, j, 1, one);
                        for (int k = 0; k < c.e; ++k)
                            for (int l = 0; l < c.e; ++l) CHECK(F.residue(R(k, l)) == T.up(k, i, j, l));
                        auto mc = multiplicative_curvature_identity(g, i, j);
                        CHECK(mc.rstar == [&] {
                            RMat m = rzeros(F, c.e, c.e);
                            for (int k = 0; k < c.e; ++k)
                                for (int l = 0; l < c.e; ++l) m(k, l) = T.up(k, i, j, l);
                            return m;
                        }());
                        auto G = g.christoffel(1);
                        CHECK(mc.rnaive == G.upper[i] - G.upper[j]);
                        if (i == j) CHECK(mc.star == identity(F, c.e, mc.star.d[0].prec));
                    }
                CHECK(reduced_matrices_consistent(g, T));

                auto v = symmetry_report(T);
                if (ab && fl == Flavor::LeviCivita) {
                    CHECK(v.empty());
                    auto t = tery_rhs(g);
                    CHECK(t.lower == T.lower);
                    CHECK(symmetry_report(t).empty());
                } else {
                    for (const auto& x : v) CHECK(x.identity != "antisym_ij");
                }
            }
        }
    }
}

TEST_CASE("closed curvature formula vanishes for Teichmuller metrics") {
    Field F(FieldSpec{7, 1, 3, 4, {}});
    Geometry g = make(F, 3, Flavor::LeviCivita);
    // entries in Z_p fixed by every lift
    g.q = identity(F, 3);
    g.q(0, 1) = g.q(1, 0) = F.from_int(2);
    g.q(2, 2) = F.from_int(3);
    auto t = tery_rhs(g);
    for (const auto& x : t.lower) CHECK(x.is_zero());
    CHECK(kn_witnesses(g).empty());
}

TEST_CASE("closed curvature formula equals -1/2 KN product of epsilon and the digit-1 matrix") {
    for (const auto& c : {Config{5, 2, 1}, Config{7, 3, 1}, Config{5, 2, 2}}) {
        Field F(FieldSpec{c.p, c.f, c.e, 4, {}});
        Geometry g = make(F, c.e, Flavor::LeviCivita);
        SplitMix64 r(c.p + 11);
        int n = c.e;
        for (int it = 0; it < 3; ++it) {
            g.q = random_metric(F, n, r);
            auto t = tery_rhs(g);
            std::vector<Res> K(t.lower.size(), F.rzero());
            for (const auto& w : kn_witnesses(g)) {
                auto [i, j, k, l] = w.idx;
                K[((i * n + j) * n + k) * n + l] = F.rneg(F.rinv(F.rint(2))) * F.rfrob(w.value, 2);
            }
            CHECK(K == t.lower);
        }
    }
}

TEST_CASE("kulkarni-nomizu hand case") {
    Field F(FieldSpec{5, 1, 2, 4, {}});
    RMat eps = rzeros(F, 2, 2), c = rzeros(F, 2, 2);
    eps(0, 0) = eps(1, 1) = F.rone();
    eps(0, 1) = eps(1, 0) = F.rneg(F.rone());
    c(0, 1) = c(1, 0) = F.rone();
    auto w = kulkarni_nomizu(F, eps, c);
    bool found = false;
    for (const auto& x : w)
        if (x.idx == std::array<int, 4>{0, 1, 0, 1}) {
            found = true;
            CHECK(x.value == F.rint(2));
        }
    CHECK(found);
    CHECK(kulkarni_nomizu(F, eps, rzeros(F, 2, 2)).empty());

    Geometry g = make(F, 2, Flavor::LeviCivita);
    RMat e2 = epsilon_matrix(F, g.lifts(1));
    CHECK(e2 == eps);
}

TEST_CASE("chern curvature") {
    for (const auto& c : kConfigs) {
        Field F(FieldSpec{c.p, c.f, c.e, 4, {}});
        Geometry g = make(F, c.e, Flavor::Chern);
        SplitMix64 r(c.p * 3 + c.f);
        for (int it = 0; it < 3; ++it) {
            g.q = random_metric(F, c.e, r);
            auto T = curvature_reduced(g);
            Elem lam = g.q(g.h, g.h);
            auto ch = chern_curvature(g, g.metric(2), lam);
            bool zero = true;
            for (int k = 0; k < c.e; ++k)
                for (int i = 0; i < c.e; ++i)
                    for (int j = 0; j < c.e; ++j)
                        for (int l = 0; l < c.e; ++l)
                            CHECK(T.up(k, i, j, l) == (k == l ? ch.r(i, j) : F.rzero()));
            for (int i = 0; i < c.e; ++i)
                for (int j = 0; j < c.e; ++j) {
                    CHECK(ch.r(i, j) == F.rneg(ch.r(j, i)));
                    zero = zero && ch.r(i, j).is_zero();
                }
            if (g.M.is_abelian()) CHECK(zero);
            // lambda = 1 with q^{(2c)} = q
            Geometry g2 = g;
            g2.metric_override[2] = g.q;
            auto c1 = chern_curvature(g2, g.q, F.one());
            for (const auto& x : c1.r.d) CHECK(x.is_zero());
            CHECK_THROWS_AS(chern_curvature(g, g.q + scale(F.pi(), identity(F, c.e)), F.one()), Error);
        }
    }
    // the nonabelian case with a random unit factor is generally nonzero
    Field F(FieldSpec{5, 2, 3, 4, {}});
    Geometry g = make(F, 3, Flavor::Chern);
    SplitMix64 r(99);
    int nonzero = 0;
    for (int it = 0; it < 5; ++it) {
        g.q = random_metric(F, 3, r);
        Elem lam = random_unit(F, r);
        Geometry g2 = g;
        g2.metric_override[2] = scale(lam, g.q);
        auto ch = chern_curvature(g2, g2.metric(2), lam);
        for (const auto& x : ch.r.d) nonzero += !x.is_zero();
    }
    CHECK(nonzero > 0);
}

TEST_CASE("invariants") {
    auto cat = invariant_catalog();
    CHECK(cat.size() >= 6);
    for (const auto& I : cat)
        for (int n = 1; n <= 3; ++n) CHECK(formally_invariant(I, n));
    auto bad = parse_invariant("bad", "Q[0,a]");
    CHECK_FALSE(formally_invariant(bad, 3));
    auto S = parse_invariant("S", "Qinv[a,b]*Qinv[c,d]*X[c,a,d,b]");
    CHECK(formally_invariant(S, 3));
    CHECK(parse_invariant("again", to_string(S)).terms.size() == S.terms.size());
    CHECK_THROWS_AS(parse_invariant("oops", "Q[a"), Error);

    Field F(FieldSpec{7, 1, 3, 4, {}});
    Geometry g = make(F, 3, Flavor::LeviCivita);
    SplitMix64 r(31);
    for (int it = 0; it < 3; ++it) {
        g.q = random_metric(F, 3, r);
        auto T = curvature_reduced(g);
        auto Y = chern_tensor(g);
        auto d = invariant_data(g.q, &T, &Y);
        for (const auto& eps : all_perms(3)) {
            CHECK(sigma_equivariance(g, eps));
            for (const auto& I : cat) CHECK(invariant_stable(g, I, eps));
            CHECK(invariant_stable(g, S, eps));
        }
        for (const auto& I : cat) CHECK(respects_riem_ideal(F, I, d));
        // identity relabel changes nothing
        Geometry h = relabel(g, {0, 1, 2});
        CHECK(curvature_reduced(h).lower == T.lower);
    }
}

TEST_CASE("relabeling the nonabelian monoid") {
    Field F(FieldSpec{5, 2, 3, 4, {}});
    Geometry g = make(F, 3, Flavor::LeviCivita);
    SplitMix64 r(8);
    g.q = random_metric(F, 3, r);
    for (const auto& eps : all_perms(3)) CHECK(sigma_equivariance(g, eps));
}
