#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace dms {

// Gauss-Legendre nodes and weights on [-1, 1]. Cached per order.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t m);

// Nodes/weights mapped to [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t m, double a,
                                                                   double b);

}  // namespace dms
