#pragma once

#include <span>

namespace qshyp {

/// Fixed-order pairwise (cascade) summation. The association tree depends
/// only on the length, so results are reproducible regardless of how the
/// summands were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace qshyp
