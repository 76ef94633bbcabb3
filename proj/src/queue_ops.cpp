// SPDX-License-Identifier: Apache-2.0
#include "kpzh/queue_ops.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "kpzh/errors.hpp"
#include "kpzh/quadrature.hpp"

namespace kpzh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::atomic<std::uint64_t> g_gap_warnings{0};

void same_grid(const SampledPath& a, const SampledPath& b) {
    require(a.grid() == b.grid(), Errc::Precondition, "paths live on different grids");
}

void check_gap(const SampledPath& B, const SampledPath& Y, GapPolicy policy) {
    if (policy == GapPolicy::Off) return;
    const double gap = estimated_drift_gap(B, Y);
    if (std::isnan(gap) || gap > 0) return;
    if (policy == GapPolicy::Strict) {
        std::ostringstream os;
        os << "estimated tail-slope gap " << gap << " is not positive";
        fail(Errc::DriftGapViolated, os.str());
    }
    g_gap_warnings.fetch_add(1, std::memory_order_relaxed);
}

struct Prefix {
    std::vector<double> L;  // beta^{-1} log int_cut^y e^{beta(Y-B)}
    double L0;
};

Prefix prefix(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg) {
    same_grid(B, Y);
    const Grid& g = B.grid();
    const double cut = cfg.cut(g);
    require(cut < 0.0, Errc::EmptyRange, "left cut must lie left of the origin");
    std::vector<double> diff(g.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = Y[i] - B[i];
    Prefix p{prefix_log_int_exp(diff, g, cfg.beta, cut), 0.0};
    p.L0 = p.L[g.origin()];
    require(std::isfinite(p.L0), Errc::EmptyRange, "no integrable mass between the cut and the origin");
    return p;
}

SampledPath build_d(const SampledPath& B, const SampledPath& Y, const Prefix& p) {
    const Grid& g = B.grid();
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double s = p.L[i] - p.L0;
        v[i] = (s == -kInf) ? -kInf : B[i] + s;
        if (std::isnan(v[i])) v[i] = -kInf;
    }
    v[g.origin()] = 0.0;
    return SampledPath(g, std::move(v), Y.drift_label());
}

SampledPath build_r(const SampledPath& B, const SampledPath& Y, const Prefix& p) {
    const Grid& g = B.grid();
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double s = p.L[i] - p.L0;
        v[i] = (s == -kInf) ? kInf : Y[i] - s;
        if (std::isnan(v[i])) v[i] = kInf;
    }
    v[g.origin()] = 0.0;
    return SampledPath(g, std::move(v), B.drift_label());
}

SampledPath d_unchecked(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg) {
    return build_d(B, Y, prefix(B, Y, cfg));
}

SampledPath r_unchecked(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg) {
    return build_r(B, Y, prefix(B, Y, cfg));
}

std::size_t cut_index(const Grid& g, std::optional<double> left_cut) {
    return left_cut ? g.index_of(*left_cut) : 0;
}

}  // namespace

CouplingSample::CouplingSample(std::vector<SampledPath> p, DriftVector d) : paths(std::move(p)), drifts(std::move(d)) {
    require(!paths.empty(), Errc::Precondition, "empty coupling");
    require(paths.size() == drifts.size(), Errc::Precondition, "one drift label per path");
    for (std::size_t i = 0; i < paths.size(); ++i) {
        same_grid(paths[0], paths[i]);
        paths[i].set_drift_label(drifts[i]);
    }
}

std::uint64_t drift_gap_warnings() noexcept { return g_gap_warnings.load(std::memory_order_relaxed); }

double estimated_drift_gap(const SampledPath& B, const SampledPath& Y) {
    same_grid(B, Y);
    const Grid& g = B.grid();
    const double window = -g.x_min() / 2;
    if (window / g.step() < 10) return std::numeric_limits<double>::quiet_NaN();
    try {
        return tail_slope(Y, window) - tail_slope(B, window);
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

std::vector<double> q_map(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg) {
    check_gap(B, Y, cfg.gap);
    same_grid(B, Y);
    const Grid& g = B.grid();
    std::vector<double> diff(g.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = Y[i] - B[i];
    auto L = prefix_log_int_exp(diff, g, cfg.beta, cfg.cut(g));
    for (std::size_t i = 0; i < L.size(); ++i) L[i] = (L[i] == -kInf) ? -kInf : (B[i] - Y[i]) + L[i];
    return L;
}

SampledPath d_map(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg) {
    check_gap(B, Y, cfg.gap);
    return d_unchecked(B, Y, cfg);
}

SampledPath r_map(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg) {
    check_gap(B, Y, cfg.gap);
    return r_unchecked(B, Y, cfg);
}

DRPair dr_map(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg) {
    check_gap(B, Y, cfg.gap);
    const Prefix p = prefix(B, Y, cfg);
    return {build_d(B, Y, p), build_r(B, Y, p)};
}

SampledPath d_iter(std::span<const SampledPath> Ys, const TransformConfig& cfg) {
    require(!Ys.empty(), Errc::Precondition, "d_iter needs at least one path");
    SampledPath cur = Ys.back();
    for (std::size_t i = Ys.size() - 1; i-- > 0;) cur = d_map(Ys[i], cur, cfg);
    return cur;
}

SampledPath d_iter_nested(std::span<const SampledPath> Ys, const TransformConfig& cfg) {
    require(!Ys.empty(), Errc::Precondition, "d_iter needs at least one path");
    if (Ys.size() == 1) return Ys[0];
    const Grid& g = Ys[0].grid();
    for (const auto& y : Ys) same_grid(Ys[0], y);
    const std::size_t first = g.index_of(cfg.cut(g));
    const double beta = cfg.beta;
    const double h = g.step();
    // Each level is renormalized to max 1; the factors cancel in N(y)/N(0).
    // Plain doubles, so moderate beta*|paths| only (no log-space guard here).
    std::vector<double> J(g.size(), 1.0), f(g.size());
    for (std::size_t lvl = Ys.size() - 1; lvl-- > 0;) {
        const SampledPath& lo = Ys[lvl];
        const SampledPath& hi = Ys[lvl + 1];
        double top = -kInf;
        for (std::size_t i = first; i < g.size(); ++i) {
            const double e = beta * (hi[i] - lo[i]);
            if (std::isfinite(e) && J[i] > 0) top = std::max(top, e);
        }
        require(std::isfinite(top), Errc::EmptyRange, "integrand vanishes");
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double e = beta * (hi[i] - lo[i]);
            f[i] = (i >= first && std::isfinite(e)) ? std::exp(e - top) * J[i] : 0.0;
        }
        std::vector<double> next(g.size(), 0.0);
        double acc = 0.0;
        for (std::size_t i = first + 1; i < g.size(); ++i) {
            const double a = f[i - 1], b = f[i];
            double cell = 0.0;
            if (a > 0 && b > 0) {
                const double d = std::log(b / a);
                cell = std::abs(d) < 1e-4 ? a * (1 + d / 2 + d * d / 6 + d * d * d / 24) : (b - a) / d;
            }
            acc += h * cell;
            next[i] = acc;
        }
        double m = 0.0;
        for (double v : next) m = std::max(m, v);
        require(m > 0, Errc::EmptyRange, "nested integral vanishes");
        for (auto& v : next) v /= m;
        J.swap(next);
    }
    const std::size_t i0 = g.origin();
    require(J[i0] > 0, Errc::EmptyRange, "nested integral vanishes at the origin");
    const SampledPath& y1 = Ys[0];
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = J[i] > 0 ? y1[i] + std::log(J[i] / J[i0]) / beta : -kInf;
    v[i0] = 0.0;
    return SampledPath(g, std::move(v), Ys.back().drift_label());
}

double sup_distance(const SampledPath& a, const SampledPath& b, double from) {
    same_grid(a, b);
    const Grid& g = a.grid();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.node(i) < from) continue;
        const bool fa = std::isfinite(a[i]), fb = std::isfinite(b[i]);
        if (fa && fb) {
            worst = std::max(worst, std::abs(a[i] - b[i]));
        } else if (fa != fb || a[i] != b[i]) {
            return kInf;
        }
    }
    return worst;
}

std::vector<SampledPath> multiline_step(const SampledPath& B, std::span<const SampledPath> Ys,
                                        const TransformConfig& cfg) {
    require(!Ys.empty(), Errc::Precondition, "multiline step needs at least one line");
    std::vector<SampledPath> out;
    out.reserve(Ys.size());
    SampledPath Bi = B;
    for (std::size_t i = 0; i < Ys.size(); ++i) {
        auto dr = dr_map(Bi, Ys[i], cfg);
        out.push_back(std::move(dr.d));
        if (i + 1 < Ys.size()) Bi = std::move(dr.r);
    }
    return out;
}

CouplingSample markov_step(const SampledPath& B, const CouplingSample& etas, const TransformConfig& cfg) {
    std::vector<SampledPath> out;
    out.reserve(etas.size());
    for (const auto& eta : etas.paths) out.push_back(d_map(B, eta, cfg));
    return CouplingSample(std::move(out), etas.drifts);
}

double intertwine_residual(const SampledPath& B1, const SampledPath& Y1, const SampledPath& Y2,
                           const TransformConfig& cfg, const IntertwineOptions& opt) {
    same_grid(B1, Y1);
    same_grid(B1, Y2);
    check_gap(B1, Y1, cfg.gap);
    check_gap(Y1, Y2, cfg.gap);
    const Grid& g = B1.grid();
    const SampledPath B2 =
        opt.order == IntertwineOrder::Resolved ? r_unchecked(B1, Y1, cfg) : r_unchecked(Y1, B1, cfg);
    const SampledPath lhs = d_unchecked(d_unchecked(B1, Y1, cfg), d_unchecked(B2, Y2, cfg), cfg);
    const SampledPath rhs = d_unchecked(B1, d_unchecked(Y1, Y2, cfg), cfg);
    return sup_distance(lhs, rhs, opt.eval_from.value_or(cfg.cut(g) / 2));
}

SampledPath sh_d_map(const SampledPath& B, const SampledPath& Y, std::optional<double> left_cut) {
    same_grid(B, Y);
    const Grid& g = B.grid();
    const std::size_t first = cut_index(g, left_cut);
    require(first < g.origin(), Errc::EmptyRange, "left cut must lie left of the origin");
    std::vector<double> M(g.size(), -kInf);
    double run = -kInf;
    for (std::size_t i = first; i < g.size(); ++i) {
        const double d = Y[i] - B[i];
        if (std::isfinite(d) && d > run) run = d;
        M[i] = run;
    }
    const double m0 = M[g.origin()];
    std::vector<double> v(g.size(), -kInf);
    for (std::size_t i = first; i < g.size(); ++i) v[i] = B[i] + (M[i] - m0);
    v[g.origin()] = 0.0;
    return SampledPath(g, std::move(v), Y.drift_label());
}

SampledPath sh_d_iter(std::span<const SampledPath> Ys, std::optional<double> left_cut) {
    require(!Ys.empty(), Errc::Precondition, "sh_d_iter needs at least one path");
    if (Ys.size() == 1) return Ys[0];
    const Grid& g = Ys[0].grid();
    for (const auto& y : Ys) same_grid(Ys[0], y);
    const std::size_t first = cut_index(g, left_cut);
    require(first < g.origin(), Errc::EmptyRange, "left cut must lie left of the origin");
    const std::size_t n = Ys.size();
    // V holds the level value sup over x_{n-1} <= ... <= x_i <= x of the partial sum.
    std::vector<double> V(g.size(), 0.0);
    for (std::size_t lvl = n - 1; lvl-- > 0;) {
        const SampledPath& lo = Ys[lvl];
        const SampledPath& hi = Ys[lvl + 1];
        double run = -kInf;
        for (std::size_t i = first; i < g.size(); ++i) {
            const double w = (hi[i] - lo[i]) + (lvl + 2 == n ? 0.0 : V[i]);
            if (std::isfinite(w) && w > run) run = w;
            V[i] = run;
        }
    }
    const double a0 = V[g.origin()];
    const SampledPath& y1 = Ys[0];
    std::vector<double> v(g.size(), -kInf);
    for (std::size_t i = first; i < g.size(); ++i) v[i] = y1[i] + (V[i] - a0);
    v[g.origin()] = 0.0;
    return SampledPath(g, std::move(v), Ys.back().drift_label());
}

SampledPath sh_d_iter_recursive(std::span<const SampledPath> Ys, std::optional<double> left_cut) {
    require(!Ys.empty(), Errc::Precondition, "sh_d_iter needs at least one path");
    SampledPath cur = Ys.back();
    for (std::size_t i = Ys.size() - 1; i-- > 0;) cur = sh_d_map(Ys[i], cur, left_cut);
    return cur;
}

}  // namespace kpzh
