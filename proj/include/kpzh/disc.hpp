// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kpzh/kpzh.hpp"
#include "kpzh/rng.hpp"
#include "kpzh/stats.hpp"

namespace kpzh {

struct JumpEstimate {
    double estimate = 0.0;
    Interval ci;  // Wilson 99%
    std::size_t hits = 0;
    std::size_t trials = 0;
};

// P(increment_gap_sample(lambda, beta, y) > epsilon) by Monte Carlo.
JumpEstimate jump_prob(double lambda, double beta, double y, double epsilon, std::size_t reps, const RngStream& rng,
                       double step = kDefaultStep);

struct JumpScanResult {
    std::vector<double> lambda_values;
    std::vector<double> probs;
    std::vector<double> rates;
    std::vector<double> ci_half_widths;  // on the rate scale
    std::vector<Interval> rate_ci;
    bool pass = false;
};

// PASS iff the smallest-lambda rate has a CI above 0 and its upper CI bound
// is at least half the lower CI bound of the largest-lambda rate.
JumpScanResult jump_rate_scan(std::span<const double> lambdas, double beta, double y, double epsilon,
                              std::size_t reps, const RngStream& rng, double step = kDefaultStep);

// The same scan for the deterministic increment X(lambda) = lambda * y.
JumpScanResult jump_rate_scan_control(std::span<const double> lambdas, double y, double epsilon, std::size_t reps);

double lambda_gamma_lambda(double lambda);

TestReport to_report(const JumpScanResult& r, const std::string& name);

}  // namespace kpzh
