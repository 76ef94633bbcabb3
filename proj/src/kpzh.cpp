// SPDX-License-Identifier: Apache-2.0
#include "kpzh/kpzh.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <boost/random/normal_distribution.hpp>
#include <sstream>

#include "kpzh/errors.hpp"
#include "kpzh/parallel.hpp"
#include "kpzh/quadrature.hpp"

namespace kpzh {

namespace {

std::atomic<std::uint64_t> g_tail_warnings{0};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

GammaIncrementModel::GammaIncrementModel(double lambda_gap_, double beta_) : lambda_gap(lambda_gap_), beta(beta_) {
    require(lambda_gap > 0 && beta > 0 && std::isfinite(lambda_gap) && std::isfinite(beta), Errc::Precondition,
            "gap and beta must be positive");
}

double tail_margin(const DriftVector& drifts, double beta, const Grid& grid) {
    return beta * drifts.min_gap() * -grid.x_min();
}

std::uint64_t tail_warnings() noexcept { return g_tail_warnings.load(std::memory_order_relaxed); }

CouplingSample sample_kpzh(const DriftVector& drifts, double beta, const Grid& grid, const RngStream& rng,
                           const KpzhOptions& opt) {
    require(beta > 0 && std::isfinite(beta), Errc::Precondition, "beta must be finite and > 0");
    Grid work = grid;
    if (drifts.size() > 1) {
        const double need = opt.tail_target / (beta * drifts.min_gap());
        if (opt.extend_left && need > -grid.x_min()) {
            const double x_min = -std::ceil(need / grid.step()) * grid.step();
            work = make_grid(x_min, grid.x_max(), grid.step());
        } else if (tail_margin(drifts, beta, grid) < opt.tail_target) {
            g_tail_warnings.fetch_add(1, std::memory_order_relaxed);
        }
    }
    std::vector<SampledPath> Y;
    Y.reserve(drifts.size());
    for (std::size_t i = 0; i < drifts.size(); ++i) {
        RngStream s = rng.split(i);
        Y.push_back(sample_bm(work, drifts[i], 1.0, s));
    }
    const TransformConfig cfg{beta, std::nullopt, opt.gap};
    std::vector<SampledPath> F;
    F.reserve(drifts.size());
    for (std::size_t i = 0; i < drifts.size(); ++i) {
        F.push_back(d_iter(std::span<const SampledPath>(Y.data(), i + 1), cfg));
    }
    if (!(work == grid)) {
        for (auto& f : F) f = restrict_to(f, grid.x_min(), grid.x_max());
    }
    return CouplingSample(std::move(F), drifts);
}

CouplingSample sample_sh(const DriftVector& drifts, const Grid& grid, const RngStream& rng) {
    const Grid wide = make_grid(2 * grid.x_min(), 2 * grid.x_max(), 2 * grid.step());
    std::vector<SampledPath> Y;
    Y.reserve(drifts.size());
    for (std::size_t i = 0; i < drifts.size(); ++i) {
        RngStream s = rng.split(i);
        Y.push_back(sample_bm(wide, drifts[i], 1.0, s));
    }
    std::vector<SampledPath> G;
    G.reserve(drifts.size());
    for (std::size_t i = 0; i < drifts.size(); ++i) {
        G.push_back(dilate(sh_d_iter(std::span<const SampledPath>(Y.data(), i + 1)), 2.0));
    }
    std::vector<double> d2(drifts.values().begin(), drifts.values().end());
    for (auto& d : d2) d *= 2;
    return CouplingSample(std::move(G), DriftVector(std::move(d2)));
}

CouplingSample sample_kpzh_dilated(const DriftVector& drifts, double beta, const Grid& grid, const RngStream& rng,
                                   const KpzhOptions& opt) {
    const Grid wide = make_grid(2 * grid.x_min(), 2 * grid.x_max(), 2 * grid.step());
    CouplingSample s = sample_kpzh(drifts, beta, wide, rng, opt);
    std::vector<SampledPath> G;
    G.reserve(s.size());
    for (const auto& p : s.paths) G.push_back(dilate(p, 2.0));
    std::vector<double> d2(drifts.values().begin(), drifts.values().end());
    for (auto& d : d2) d *= 2;
    return CouplingSample(std::move(G), DriftVector(std::move(d2)));
}

double log_exponential_functional(double a, double b, double y, double step, RngStream& rng) {
    require(y >= 0 && step > 0, Errc::Precondition, "need y >= 0 and step > 0");
    if (y == 0) return -std::numeric_limits<double>::infinity();
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(y / step - 1e-9)));
    const double h = y / static_cast<double>(n);
    const double sd = std::sqrt(h);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> e(n + 1);
    double B = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        B += sd * normal(rng);
        e[i] = a * B + b * h * static_cast<double>(i);
    }
    return prefix_log_integral(e, h, 0).back();
}

IncrementSample increment_gap_sample(double lambda_gap, double beta, double y, const RngStream& rng, double step) {
    const GammaIncrementModel model(lambda_gap, beta);
    require(y >= 0 && std::isfinite(y), Errc::Precondition, "y must be >= 0");
    IncrementSample out{y, 0.0};
    if (y == 0) return out;
    RngStream xs = rng.split(0);
    std::gamma_distribution<double> gamma(model.shape(), 1.0 / model.rate());
    const double X = gamma(xs);
    if (!(X > 0)) return out;
    RngStream bs = rng.split(1);
    const double logY =
        log_exponential_functional(std::numbers::sqrt2 * beta, lambda_gap * beta, y, step, bs);
    const double s = std::log(X) + logY;
    const double l1p = s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
    out.value = l1p / beta;
    return out;
}

double dufresne_inverse_sample(double lambda, double beta, double grid_step, double left_cut, const RngStream& rng,
                               bool strict) {
    require(lambda > 0 && beta > 0 && grid_step > 0, Errc::Precondition, "lambda, beta, step must be > 0");
    require(left_cut < 0, Errc::EmptyRange, "left cut must be negative");
    if (beta * lambda * -left_cut < 30.0) {
        if (strict) fail(Errc::TailTooHeavy, "beta*lambda*|left_cut| < 30");
        g_tail_warnings.fetch_add(1, std::memory_order_relaxed);
    }
    const double q = -left_cut / grid_step;
    require(std::abs(q - std::round(q)) <= 1e-9 * q, Errc::NonAlignedBounds, "left cut is not a multiple of step");
    const auto n = static_cast<std::size_t>(std::round(q));
    RngStream s = rng.split(0);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    // Node i sits at x = -i*step; integrate from the far end toward 0.
    std::vector<double> e(n + 1);
    const double a = std::numbers::sqrt2 * beta;
    const double sd = std::sqrt(grid_step);
    double B = 0.0;
    e[n] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        B += sd * normal(s);
        e[n - i] = a * B - lambda * beta * grid_step * static_cast<double>(i);
    }
    return std::exp(-prefix_log_integral(e, grid_step, 0).back());
}

TestReport ew_limit_check(double lambda_gap, std::span<const double> betas, double y, std::size_t reps,
                          const RngStream& rng, double step) {
    require(lambda_gap > 0, Errc::Precondition, "gap must be positive");
    require(!betas.empty(), Errc::Precondition, "no beta values");
    require(y >= 0, Errc::Precondition, "y must be >= 0");
    require(reps >= 2, Errc::TooFewSamples, "need at least two replicates");
    for (std::size_t j = 0; j < betas.size(); ++j) {
        require(betas[j] > 0, Errc::Precondition, "beta values must be positive");
        if (j > 0) require(betas[j] < betas[j - 1], Errc::Precondition, "beta values must decrease");
    }
    const std::size_t tests = 2 * betas.size() - 1;
    const double family = 0.01;
    const double z = normal_upper_quantile(family / (2.0 * static_cast<double>(tests)));
    std::vector<Moments> mom;
    for (std::size_t j = 0; j < betas.size(); ++j) {
        std::vector<double> v(reps);
        const RngStream bs = rng.split(j);
        parallel_for(reps, [&](std::size_t r) { v[r] = increment_gap_sample(lambda_gap, betas[j], y, bs.split(r), step).value; });
        mom.push_back(moments(v));
    }
    TestReport rep;
    rep.name = "ew_limit_check";
    rep.n1 = reps;
    rep.pass = true;
    double worst_z = 0.0;
    const double target = lambda_gap * y;
    for (std::size_t j = 0; j < betas.size(); ++j) {
        const Moments& m = mom[j];
        const double se = m.se_mean();
        const double zz = se > 0 ? std::abs(m.mean - target) / se : (m.mean == target ? 0.0 : 1e300);
        worst_z = std::max(worst_z, zz);
        if (zz > z) rep.pass = false;
        const std::string key = "beta=" + fmt(betas[j]);
        rep.metadata[key + ".mean"] = fmt(m.mean);
        rep.metadata[key + ".mean_se"] = fmt(se);
        rep.metadata[key + ".variance"] = fmt(m.variance);
        rep.metadata[key + ".variance_se"] = fmt(m.se_variance());
        if (j > 0) {
            const Moments& p = mom[j - 1];
            const double slack = z * std::hypot(m.se_variance(), p.se_variance());
            if (m.variance > p.variance + slack) rep.pass = false;
        }
    }
    rep.statistic = worst_z;
    rep.p_value = std::min(1.0, 2.0 * static_cast<double>(betas.size()) * 0.5 * std::erfc(worst_z / std::numbers::sqrt2));
    rep.threshold = family;
    rep.metadata["lambda_gap"] = fmt(lambda_gap);
    rep.metadata["y"] = fmt(y);
    rep.metadata["seed"] = std::to_string(rng.seed());
    rep.metadata["stream_id"] = std::to_string(rng.stream_id());
    rep.metadata["rule"] =
        "means within Bonferroni z-band of lambda*y; each variance not above the previous one beyond the band";
    return rep;
}

}  // namespace kpzh
