#pragma once

#include <vector>

namespace tmlab {

/// Weighted least-squares projection of y onto nonincreasing sequences
/// (pool adjacent violators). Weights must be positive.
std::vector<double> pava_nonincreasing(const std::vector<double>& y, const std::vector<double>& w);

}  // namespace tmlab
