// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kpzh/paths.hpp"

namespace kpzh {

// out[j] = log of the integral of exp(h) from node `first` to node j, with h
// interpolated linearly between nodes and each cell integrated exactly.
// out[j] = -inf for j <= first. Cells with a non-finite endpoint carry no mass.
// Works for |h| far beyond the double exponent range.
std::vector<double> prefix_log_integral(std::span<const double> h, double step, std::size_t first);

// log of the exact integral of exp(linear) over one cell of width `step`
// with endpoint exponents a, b.
double log_cell_integral(double a, double b, double step) noexcept;

double log_add_exp(double a, double b) noexcept;

// beta^{-1} log of the integral of exp(beta g) from left_cut to each node.
// Nodes at or left of left_cut get -inf. Throws EmptyRange if no node lies
// strictly right of left_cut; OffGrid if left_cut is not a node.
std::vector<double> prefix_log_int_exp(std::span<const double> g, const Grid& grid, double beta,
                                       double left_cut);

// Single-node version; throws EmptyRange for y <= left_cut.
double log_int_exp_at(std::span<const double> g, const Grid& grid, double beta, double left_cut, double y);

// beta^{-1} log of the mass discarded left of the cut when g behaves like
// g(left_cut) + delta (x - left_cut) beyond it: e^{beta g(L)} / (beta delta).
double log_tail_bound(double g_at_cut, double beta, double delta) noexcept;

}  // namespace kpzh
