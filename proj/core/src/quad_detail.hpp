#pragma once

#include <vector>

namespace qtensor::detail {

// Gauss-Legendre nodes (ascending) and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace qtensor::detail
