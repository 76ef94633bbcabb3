// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kpzh/paths.hpp"
#include "kpzh/queue_ops.hpp"
#include "kpzh/rng.hpp"
#include "kpzh/stats.hpp"

namespace kpzh {

inline constexpr double kDefaultStep = 0x1.0p-10;

struct GammaIncrementModel {
    double lambda_gap;
    double beta;

    GammaIncrementModel(double lambda_gap, double beta);
    double shape() const noexcept { return lambda_gap / beta; }
    double rate() const noexcept { return 1.0 / (beta * beta); }
    double mean() const noexcept { return lambda_gap * beta; }
};

struct IncrementSample {
    double y = 0.0;
    double value = 0.0;
};

struct KpzhOptions {
    GapPolicy gap = GapPolicy::Warn;
    // Grow the grid to the left until beta * (min gap) * |x_min| >= tail_target,
    // sample there and restrict back to the requested window.
    bool extend_left = false;
    double tail_target = 30.0;
};

// beta * delta * |x_min| for the requested setup.
double tail_margin(const DriftVector& drifts, double beta, const Grid& grid);
std::uint64_t tail_warnings() noexcept;

// (Y^1, D^{(2)}(Y^1,Y^2), ..., D^{(k)}(Y^1,...,Y^k)) on independent BMs with
// drifts lambda_i and diffusivity 1. Y^i uses rng.split(i).
CouplingSample sample_kpzh(const DriftVector& drifts, double beta, const Grid& grid, const RngStream& rng,
                           const KpzhOptions& opt = {});

// Zero-temperature analogue followed by f(x) -> f(2x). The BMs are drawn on
// the grid scaled by 2 so the output lives on `grid`.
CouplingSample sample_sh(const DriftVector& drifts, const Grid& grid, const RngStream& rng);

// sample_kpzh drawn on the grid scaled by 2, then f(x) -> f(2x).
CouplingSample sample_kpzh_dilated(const DriftVector& drifts, double beta, const Grid& grid, const RngStream& rng,
                                   const KpzhOptions& opt = {});

// beta^{-1} log(1 + X Y(y)), X ~ Gamma(lambda/beta, rate beta^{-2}) from
// rng.split(0), Y(y) = int_0^y exp(sqrt2 beta B + lambda beta x) dx with B
// drawn from rng.split(1).
IncrementSample increment_gap_sample(double lambda_gap, double beta, double y, const RngStream& rng,
                                     double step = kDefaultStep);

// 1 / int_{left_cut}^0 exp(sqrt2 beta B(x) + lambda beta x) dx.
double dufresne_inverse_sample(double lambda, double beta, double grid_step, double left_cut, const RngStream& rng,
                               bool strict = true);

// log of int_0^y exp(a B(x) + b x) dx for a fresh BM on [0, y].
double log_exponential_functional(double a, double b, double y, double step, RngStream& rng);

TestReport ew_limit_check(double lambda_gap, std::span<const double> betas, double y, std::size_t reps,
                          const RngStream& rng, double step = kDefaultStep);

}  // namespace kpzh
