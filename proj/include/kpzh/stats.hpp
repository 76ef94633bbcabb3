// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace kpzh {

struct TestReport {
    std::string name;
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double threshold = 0.01;
    bool pass = false;
    std::map<std::string, std::string> metadata;

    // pass = p_value > threshold
    void decide() { pass = p_value > threshold; }
};

void to_json(nlohmann::json& j, const TestReport& r);
void from_json(const nlohmann::json& j, TestReport& r);

struct NormalDist {
    double mu = 0.0;
    double sigma2 = 1.0;
};
struct GammaDist {
    double shape = 1.0;
    double rate = 1.0;
};
using RefDist = std::variant<NormalDist, GammaDist>;

double cdf(const RefDist& d, double x);

inline constexpr std::size_t kMinSamples = 100;

// Two-sided KS with asymptotic Kolmogorov p-value. Threshold 0.01 by default.
TestReport ks_one_sample(std::span<const double> samples, const RefDist& dist, double threshold = 0.01);
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double threshold = 0.01);

// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

double gamma_cdf(double shape, double rate, double x);
double normal_cdf(double mu, double sigma2, double x);
double lgamma(double x);
double erfc(double x);
// Upper standard normal quantile, z with P(Z > z) = p.
double normal_upper_quantile(double p);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

Interval wilson_ci(std::size_t successes, std::size_t trials, double confidence);

double bonferroni_threshold(double family_level, std::size_t tests);

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double fourth_central = 0.0;
    double se_mean() const;
    // Standard error of the sample variance (uses the fourth moment).
    double se_variance() const;
};
Moments moments(std::span<const double> x);

// Combine reports: pass iff every member passes. p_value is the minimum.
TestReport combine_reports(const std::string& name, std::span<const TestReport> parts);

// Sets threshold = family / parts.size() on every member and re-decides.
void apply_bonferroni(std::vector<TestReport>& parts, double family_level = 0.01);

std::string summary_line(std::span<const TestReport> reports);

}  // namespace kpzh
