// SPDX-License-Identifier: Apache-2.0
#include "kpzh/disc.hpp"

#include <cmath>
#include <sstream>

#include "kpzh/errors.hpp"
#include "kpzh/parallel.hpp"

namespace kpzh {

namespace {

constexpr double kConfidence = 0.99;

void check_lambdas(std::span<const double> lambdas) {
    require(!lambdas.empty(), Errc::Precondition, "no lambda values");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        require(lambdas[i] > 0, Errc::Precondition, "lambda values must be positive");
        if (i > 0) require(lambdas[i] < lambdas[i - 1], Errc::Precondition, "lambda values must decrease");
    }
}

JumpScanResult finish(std::span<const double> lambdas, const std::vector<std::size_t>& hits, std::size_t reps) {
    JumpScanResult r;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double l = lambdas[i];
        const Interval ci = wilson_ci(hits[i], reps, kConfidence);
        const double p = static_cast<double>(hits[i]) / static_cast<double>(reps);
        r.lambda_values.push_back(l);
        r.probs.push_back(p);
        r.rates.push_back(p / l);
        r.rate_ci.push_back({ci.lo / l, ci.hi / l});
        r.ci_half_widths.push_back(0.5 * (ci.hi - ci.lo) / l);
    }
    const Interval& small = r.rate_ci.back();
    const Interval& large = r.rate_ci.front();
    r.pass = small.lo > 0 && small.hi >= 0.5 * large.lo;
    return r;
}

}  // namespace

JumpEstimate jump_prob(double lambda, double beta, double y, double epsilon, std::size_t reps, const RngStream& rng,
                       double step) {
    require(lambda > 0 && beta > 0 && epsilon > 0 && y >= 0, Errc::Precondition,
            "need lambda, beta, epsilon > 0 and y >= 0");
    require(reps >= 10000, Errc::TooFewSamples, "jump_prob needs at least 10^4 replicates");
    std::vector<unsigned char> hit(reps, 0);
    parallel_for(reps, [&](std::size_t r) {
        hit[r] = increment_gap_sample(lambda, beta, y, rng.split(r), step).value > epsilon ? 1 : 0;
    });
    JumpEstimate e;
    e.trials = reps;
    for (auto h : hit) e.hits += h;
    e.estimate = static_cast<double>(e.hits) / static_cast<double>(reps);
    e.ci = wilson_ci(e.hits, reps, kConfidence);
    return e;
}

JumpScanResult jump_rate_scan(std::span<const double> lambdas, double beta, double y, double epsilon,
                              std::size_t reps, const RngStream& rng, double step) {
    check_lambdas(lambdas);
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        hits.push_back(jump_prob(lambdas[i], beta, y, epsilon, reps, rng.split(i), step).hits);
    }
    return finish(lambdas, hits, reps);
}

JumpScanResult jump_rate_scan_control(std::span<const double> lambdas, double y, double epsilon, std::size_t reps) {
    check_lambdas(lambdas);
    require(reps > 0, Errc::Precondition, "need replicates");
    std::vector<std::size_t> hits;
    for (double l : lambdas) hits.push_back(l * y > epsilon ? reps : 0);
    return finish(lambdas, hits, reps);
}

double lambda_gamma_lambda(double lambda) {
    require(lambda > 0, Errc::Precondition, "lambda must be positive");
    return std::exp(std::log(lambda) + std::lgamma(lambda));
}

TestReport to_report(const JumpScanResult& r, const std::string& name) {
    TestReport t;
    t.name = name;
    t.statistic = r.rates.empty() ? 0.0 : r.rates.back();
    t.pass = r.pass;
    t.p_value = r.pass ? 1.0 : 0.0;
    t.threshold = 0.5;
    for (std::size_t i = 0; i < r.lambda_values.size(); ++i) {
        std::ostringstream key, val;
        key << "lambda=" << r.lambda_values[i];
        val.precision(8);
        val << "prob " << r.probs[i] << " rate " << r.rates[i] << " rate_ci [" << r.rate_ci[i].lo << ", "
            << r.rate_ci[i].hi << "]";
        t.metadata[key.str()] = val.str();
    }
    t.metadata["rule"] = "smallest-lambda rate CI above 0 and its upper bound >= half the largest-lambda lower bound";
    return t;
}

}  // namespace kpzh
