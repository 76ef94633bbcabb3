// SPDX-License-Identifier: Apache-2.0
// Verification suites shared by the command-line tool and the acceptance runner.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpzh/kpzh.hpp"
#include "kpzh/stats.hpp"

namespace kpzh::suites {

struct Suite {
    std::string name;
    std::vector<TestReport> reports;
    bool pass() const;
};

// Deterministic report: pass decided by the caller, p_value mirrors it.
TestReport verdict(const std::string& name, double statistic, bool pass, const std::string& rule);

struct IntertwineResult {
    double worst_residual = 0.0;   // at the coarse step
    double min_ratio = 0.0;        // coarse / fine residual
    double literal_min_coarse = 0.0;
    double literal_max_ratio = 0.0;
};
// BM triples (drifts 0,1,2) sampled at step/2, coarsened to step.
IntertwineResult intertwining(int seeds, double x_min, double x_max, double step, double beta, std::uint64_t seed);
std::vector<TestReport> intertwining_reports(int seeds, double x_min, double x_max, double step, double beta,
                                             std::uint64_t seed);

// Worst relative exp-scale gap between recursion and nested form, n in {2,3}.
std::vector<TestReport> closed_form_reports(int seeds, const Grid& grid, double beta, std::uint64_t seed);

std::vector<TestReport> scaling_reports(int seeds, const Grid& grid, double beta, std::uint64_t seed);

std::vector<TestReport> zero_temperature_reports(const Grid& grid, std::uint64_t seed);

struct LseResult {
    std::vector<double> betas;
    std::vector<double> errors;
};
LseResult lse_to_max(const Grid& grid, std::vector<double> betas);
TestReport lse_halving_report(const Grid& grid);

Suite identities(const Grid& grid, double beta, std::uint64_t seed);
Suite invariance(const DriftVector& drifts, double beta, const Grid& grid, std::size_t reps, std::uint64_t seed);
Suite gamma_law(double beta, const Grid& grid, std::size_t reps, std::uint64_t seed);
std::vector<TestReport> dufresne_reports(std::size_t reps, double step, std::uint64_t seed);
TestReport gap_vs_kpzh_report(double lambda, double beta, double y, const Grid& grid, std::size_t reps,
                              std::uint64_t seed);
std::vector<TestReport> beta_infinity_reports(const DriftVector& drifts, double beta, const Grid& grid, double y,
                                              std::size_t reps, std::uint64_t seed);
TestReport ew_report(double lambda, double y, std::size_t reps, std::uint64_t seed);
Suite limits(const DriftVector& drifts, const Grid& grid, std::size_t reps, double y, std::uint64_t seed);
// alpha feeds the moment-integral check.
Suite kernels(std::size_t ito_reps, std::uint64_t seed, double alpha = 1.0);
Suite jump_scan(double beta, double y, double epsilon, std::size_t reps, std::uint64_t seed);

struct Figure1Stats {
    std::vector<double> betas;
    std::vector<double> medians;
    double worst_violation = 0.0;
};
inline const std::vector<double> kFigureBetas{0.1, 1.0, 20.0};
inline const std::vector<double> kFigureDrifts{-5.0, -2.5, 0.0, 2.5, 5.0};

std::vector<CouplingSample> figure1_samples(const Grid& grid, std::uint64_t seed);
std::vector<std::string> write_figure1(const std::string& dir, const Grid& grid, std::uint64_t seed);
// Largest de-trended pairwise sup distance over [-window, window].
double detrended_spread(const CouplingSample& s, double window);
double worst_order_violation(const CouplingSample& s);
Figure1Stats figure1_statistics(const Grid& grid, int seeds, std::uint64_t seed, double window = 1.0);

}  // namespace kpzh::suites
