// SPDX-License-Identifier: Apache-2.0
#include "kpzh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "kpzh/errors.hpp"

namespace kpzh {

void to_json(nlohmann::json& j, const TestReport& r) {
    j = nlohmann::json{{"name", r.name},   {"statistic", r.statistic}, {"p_value", r.p_value},
                       {"n1", r.n1},       {"n2", r.n2},               {"threshold", r.threshold},
                       {"pass", r.pass},   {"metadata", r.metadata}};
}

void from_json(const nlohmann::json& j, TestReport& r) {
    j.at("name").get_to(r.name);
    j.at("statistic").get_to(r.statistic);
    j.at("p_value").get_to(r.p_value);
    j.at("n1").get_to(r.n1);
    j.at("n2").get_to(r.n2);
    j.at("threshold").get_to(r.threshold);
    j.at("pass").get_to(r.pass);
    j.at("metadata").get_to(r.metadata);
}

double gamma_cdf(double shape, double rate, double x) {
    require(shape > 0 && rate > 0 && std::isfinite(shape) && std::isfinite(rate), Errc::DomainError,
            "gamma parameters must be positive");
    if (x <= 0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::gamma_p(shape, rate * x);
}

double normal_cdf(double mu, double sigma2, double x) {
    require(sigma2 > 0 && std::isfinite(sigma2), Errc::DomainError, "variance must be positive");
    return 0.5 * std::erfc(-(x - mu) / std::sqrt(2.0 * sigma2));
}

double lgamma(double x) {
    require(!(x <= 0 && x == std::floor(x)), Errc::DomainError, "lgamma pole");
    return boost::math::lgamma(x);
}

double erfc(double x) { return std::erfc(x); }

double normal_upper_quantile(double p) {
    require(p > 0 && p < 1, Errc::DomainError, "probability must be in (0,1)");
    return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<>(), p));
}

double cdf(const RefDist& d, double x) {
    return std::visit(
        [x](const auto& dist) -> double {
            using T = std::decay_t<decltype(dist)>;
            if constexpr (std::is_same_v<T, NormalDist>) {
                return normal_cdf(dist.mu, dist.sigma2, x);
            } else {
                return gamma_cdf(dist.shape, dist.rate, x);
            }
        },
        d);
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0) return 1.0;
    if (lambda < 1.0) {
        // Jacobi-transformed series for the CDF, fast for small lambda.
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double s = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double m = 2.0 * k - 1.0;
            s += std::exp(-m * m * pi2 / (8.0 * lambda * lambda));
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 == 1) ? term : -term;
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

TestReport ks_one_sample(std::span<const double> samples, const RefDist& dist, double threshold) {
    require(samples.size() >= kMinSamples, Errc::TooFewSamples, "KS needs at least 100 samples");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(dist, x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
    }
    TestReport r;
    r.name = "ks_one_sample";
    r.statistic = d;
    r.p_value = kolmogorov_survival(std::sqrt(n) * d);
    r.n1 = x.size();
    r.threshold = threshold;
    r.decide();
    return r;
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double threshold) {
    require(a.size() >= kMinSamples && b.size() >= kMinSamples, Errc::TooFewSamples,
            "KS needs at least 100 samples per side");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    TestReport r;
    r.name = "ks_two_sample";
    r.statistic = d;
    r.p_value = kolmogorov_survival(std::sqrt(n * m / (n + m)) * d);
    r.n1 = x.size();
    r.n2 = y.size();
    r.threshold = threshold;
    r.decide();
    return r;
}

Interval wilson_ci(std::size_t successes, std::size_t trials, double confidence) {
    require(trials > 0 && successes <= trials, Errc::Precondition, "bad binomial counts");
    require(confidence > 0 && confidence < 1, Errc::DomainError, "confidence must be in (0,1)");
    const double z = normal_upper_quantile((1.0 - confidence) / 2.0);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
    if (successes == 0) ci.lo = 0.0;
    if (successes == trials) ci.hi = 1.0;
    return ci;
}

double bonferroni_threshold(double family_level, std::size_t tests) {
    require(tests > 0, Errc::Precondition, "no tests");
    return family_level / static_cast<double>(tests);
}

double Moments::se_mean() const { return n > 0 ? std::sqrt(variance / static_cast<double>(n)) : 0.0; }

double Moments::se_variance() const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double v = fourth_central - variance * variance * (nn - 3.0) / (nn - 1.0);
    return std::sqrt(std::max(0.0, v) / nn);
}

Moments moments(std::span<const double> x) {
    Moments m;
    m.n = x.size();
    if (x.empty()) return m;
    double s = 0.0;
    for (double v : x) s += v;
    m.mean = s / static_cast<double>(x.size());
    double s2 = 0.0, s4 = 0.0;
    for (double v : x) {
        const double d = v - m.mean;
        s2 += d * d;
        s4 += d * d * d * d;
    }
    m.variance = x.size() > 1 ? s2 / static_cast<double>(x.size() - 1) : 0.0;
    m.fourth_central = s4 / static_cast<double>(x.size());
    return m;
}

TestReport combine_reports(const std::string& name, std::span<const TestReport> parts) {
    TestReport r;
    r.name = name;
    r.pass = !parts.empty();
    r.p_value = 1.0;
    r.threshold = parts.empty() ? 0.01 : parts.front().threshold;
    for (const auto& p : parts) {
        r.pass = r.pass && p.pass;
        if (p.p_value < r.p_value) r.p_value = p.p_value;
        r.statistic = std::max(r.statistic, p.statistic);
        r.n1 = std::max(r.n1, p.n1);
        r.n2 = std::max(r.n2, p.n2);
    }
    r.metadata["parts"] = std::to_string(parts.size());
    r.metadata["rule"] = "all parts pass";
    return r;
}

void apply_bonferroni(std::vector<TestReport>& parts, double family_level) {
    if (parts.empty()) return;
    const double t = bonferroni_threshold(family_level, parts.size());
    for (auto& p : parts) {
        p.threshold = t;
        p.decide();
        p.metadata["bonferroni_family"] = std::to_string(family_level);
        p.metadata["bonferroni_tests"] = std::to_string(parts.size());
    }
}

std::string summary_line(std::span<const TestReport> reports) {
    std::size_t k = 0;
    for (const auto& r : reports) k += r.pass ? 1 : 0;
    return "PASS " + std::to_string(k) + "/" + std::to_string(reports.size());
}

}  // namespace kpzh
