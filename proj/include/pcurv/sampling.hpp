#pragma once

#include "pcurv/matrix.hpp"
#include "pcurv/rng.hpp"

namespace pcurv {

// seeded draws; every draw retries at most 100 times before raising SamplingFailed
Elem random_element(const Field& F, SplitMix64& rng, int prec = -1);
Elem random_unit(const Field& F, SplitMix64& rng, int prec = -1);
Elem random_base_unit(const Field& F, SplitMix64& rng, int prec = -1);  // unit of O_F
// symmetric, invertible mod pi, unit diagonal
EMat random_metric(const Field& F, int n, SplitMix64& rng, int prec = -1);
EMat random_diagonal_metric(const Field& F, int n, SplitMix64& rng, int prec = -1);
// invertible mod pi
EMat random_point(const Field& F, int n, SplitMix64& rng, int prec = -1);

}  // namespace pcurv
