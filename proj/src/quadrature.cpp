// SPDX-License-Identifier: Apache-2.0
#include "kpzh/quadrature.hpp"

#include <cmath>
#include <limits>

#include "kpzh/errors.hpp"

namespace kpzh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// (1 - e^{-d}) / d for d >= 0.
inline double phi(double d) noexcept {
    if (d < 1e-8) return 1.0 - 0.5 * d;
    return -std::expm1(-d) / d;
}

}  // namespace

double log_add_exp(double a, double b) noexcept {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

double log_cell_integral(double a, double b, double step) noexcept {
    if (!std::isfinite(a) || !std::isfinite(b)) return kNegInf;
    const double d = std::abs(b - a);
    return std::log(step) + std::max(a, b) + std::log(phi(d));
}

std::vector<double> prefix_log_integral(std::span<const double> h, double step, std::size_t first) {
    const std::size_t n = h.size();
    std::vector<double> out(n, kNegInf);
    if (first + 1 >= n) return out;

    // Sum kept as S * e^M; M moves up when a node exceeds it by a wide margin.
    double M = kNegInf;
    double S = 0.0;
    double e_prev = 0.0;
    if (std::isfinite(h[first])) {
        M = h[first];
        e_prev = 1.0;
    }
    for (std::size_t j = first + 1; j < n; ++j) {
        const double a = h[j - 1];
        const double b = h[j];
        double e_cur = 0.0;
        if (std::isfinite(b)) {
            if (M == kNegInf) {
                M = b;
            } else if (b - M > 300.0) {
                const double r = std::exp(M - b);
                S *= r;
                e_prev *= r;
                M = b;
            }
            e_cur = std::exp(b - M);
        }
        if (std::isfinite(a) && std::isfinite(b)) {
            const double d = b - a;
            const double top = d >= 0 ? e_cur : e_prev;
            S += step * top * phi(std::abs(d));
        }
        out[j] = S > 0.0 ? M + std::log(S) : kNegInf;
        e_prev = e_cur;
    }
    return out;
}

std::vector<double> prefix_log_int_exp(std::span<const double> g, const Grid& grid, double beta, double left_cut) {
    require(g.size() == grid.size(), Errc::Precondition, "integrand length does not match grid");
    require(beta > 0 && std::isfinite(beta), Errc::Precondition, "beta must be finite and > 0");
    const std::size_t first = grid.index_of(left_cut);
    require(first + 1 < grid.size(), Errc::EmptyRange, "no node right of the left cut");
    std::vector<double> h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = beta * g[i];
    auto out = prefix_log_integral(h, grid.step(), first);
    for (auto& v : out) v /= beta;
    return out;
}

double log_int_exp_at(std::span<const double> g, const Grid& grid, double beta, double left_cut, double y) {
    require(y > left_cut, Errc::EmptyRange, "evaluation point not right of the left cut");
    const std::size_t j = grid.index_of(y);
    return prefix_log_int_exp(g, grid, beta, left_cut)[j];
}

double log_tail_bound(double g_at_cut, double beta, double delta) noexcept {
    return g_at_cut - std::log(beta * delta) / beta;
}

}  // namespace kpzh
