#include "pcurv/sampling.hpp"

namespace pcurv {

namespace {

constexpr int kRetries = 100;

[[noreturn]] void exhausted(const char* what) {
    throw Error("SamplingFailed", std::string("no valid ") + what + " after 100 draws");
}

}  // namespace

Elem random_element(const Field& F, SplitMix64& rng, int prec) {
    int pr = prec < 0 ? F.nu : prec;
    std::vector<Res> d;
    for (int k = 0; k < pr; ++k) d.push_back(F.rfrom_index(rng.below(F.q)));
    return F.with_prec(F.from_digits(d), pr);
}

Elem random_unit(const Field& F, SplitMix64& rng, int prec) {
    for (int it = 0; it < kRetries; ++it) {
        Elem x = random_element(F, rng, prec);
        if (F.is_unit(x)) return x;
    }
    exhausted("unit");
}

Elem random_base_unit(const Field& F, SplitMix64& rng, int prec) {
    int pr = prec < 0 ? F.nu : prec;
    for (int it = 0; it < kRetries; ++it) {
        // p-adic digits in O_F: sum of Teichmuller lifts times p^k
        Elem x = F.zero(pr);
        Elem pk = F.one(pr);
        for (int k = 0; k * F.e < pr; ++k) {
            x = x + F.teich(F.rfrom_index(rng.below(F.q)), pr) * pk;
            pk = pk * F.from_int(F.p, pr);
        }
        if (F.is_unit(x)) return x;
    }
    exhausted("unit of the base field");
}

EMat random_metric(const Field& F, int n, SplitMix64& rng, int prec) {
    for (int it = 0; it < kRetries; ++it) {
        EMat q = ezeros(F, n, n, prec);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) q(i, j) = q(j, i) = random_element(F, rng, prec);
        bool ok = !det(residue(q)).is_zero();
        for (int i = 0; i < n && ok; ++i) ok = F.is_unit(q(i, i));
        if (ok) return q;
    }
    exhausted("metric");
}

EMat random_diagonal_metric(const Field& F, int n, SplitMix64& rng, int prec) {
    EMat q = ezeros(F, n, n, prec);
    for (int i = 0; i < n; ++i) q(i, i) = random_unit(F, rng, prec);
    return q;
}

EMat random_point(const Field& F, int n, SplitMix64& rng, int prec) {
    for (int it = 0; it < kRetries; ++it) {
        EMat a = ezeros(F, n, n, prec);
        for (auto& x : a.d) x = random_element(F, rng, prec);
        if (!det(residue(a)).is_zero()) return a;
    }
    exhausted("point");
}

}  // namespace pcurv
