// SPDX-License-Identifier: Apache-2.0
#include "kpzh/paths.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <boost/random/normal_distribution.hpp>
#include <sstream>

#include "kpzh/errors.hpp"

namespace kpzh {

namespace {

bool aligned(double v, double step, long long& k) {
    const double q = v / step;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-12 * std::max(1.0, std::abs(q))) return false;
    k = static_cast<long long>(r);
    return true;
}

}  // namespace

Grid make_grid(double x_min, double x_max, double step) {
    require(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(step) && step > 0,
            Errc::DegenerateGrid, "grid bounds and step must be finite with step > 0");
    if (!(x_min <= 0.0 && 0.0 <= x_max)) {
        std::ostringstream os;
        os << "grid [" << x_min << ", " << x_max << "] does not contain the origin";
        fail(Errc::NonAlignedBounds, os.str());
    }
    long long kl = 0, kr = 0;
    if (!aligned(x_min, step, kl) || !aligned(x_max, step, kr)) {
        std::ostringstream os;
        os << "bounds " << x_min << ", " << x_max << " are not multiples of step " << step;
        fail(Errc::NonAlignedBounds, os.str());
    }
    const auto n = static_cast<std::size_t>(kr - kl + 1);
    require(n >= 3, Errc::DegenerateGrid, "grid needs at least 3 nodes");
    return Grid(step, static_cast<std::size_t>(-kl), n);
}

std::optional<std::size_t> Grid::try_index_of(double x) const noexcept {
    const double q = x / step_;
    const double r = std::round(q);
    if (!std::isfinite(q) || std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q))) return std::nullopt;
    const double idx = r + static_cast<double>(i0_);
    if (idx < 0 || idx > static_cast<double>(n_ - 1)) return std::nullopt;
    return static_cast<std::size_t>(idx);
}

std::size_t Grid::index_of(double x) const {
    if (auto i = try_index_of(x)) return *i;
    std::ostringstream os;
    os << std::setprecision(17) << x << " is not a node of " << describe();
    fail(Errc::OffGrid, os.str());
}

std::string Grid::describe() const {
    std::ostringstream os;
    os << std::setprecision(17) << "[" << x_min() << ", " << x_max() << "] step " << step_;
    return os.str();
}

SampledPath::SampledPath(Grid grid, std::vector<double> values, double drift_label)
    : grid_(grid), values_(std::move(values)), drift_(drift_label) {
    require(values_.size() == grid_.size(), Errc::Precondition, "path length does not match grid");
    require(values_[grid_.origin()] == 0.0, Errc::Precondition, "path is not pinned at the origin");
}

double SampledPath::interpolate(double x) const {
    const double q = (x - grid_.x_min()) / grid_.step();
    const double last = static_cast<double>(grid_.size() - 1);
    require(q >= -1e-9 && q <= last + 1e-9, Errc::DomainExceeded, "interpolation point outside grid");
    const double qc = std::clamp(q, 0.0, last);
    auto i = static_cast<std::size_t>(std::floor(qc));
    if (i >= grid_.size() - 1) i = grid_.size() - 2;
    const double t = qc - static_cast<double>(i);
    if (t == 0.0) return values_[i];
    return (1.0 - t) * values_[i] + t * values_[i + 1];
}

DriftVector::DriftVector(std::vector<double> drifts) : d_(std::move(drifts)) {
    require(!d_.empty(), Errc::Precondition, "empty drift vector");
    for (std::size_t i = 1; i < d_.size(); ++i)
        require(d_[i] > d_[i - 1], Errc::Precondition, "drifts must be strictly increasing");
}

double DriftVector::min_gap() const noexcept {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < d_.size(); ++i) g = std::min(g, d_[i] - d_[i - 1]);
    return g;
}

SampledPath zero_path(const Grid& grid) { return SampledPath(grid, std::vector<double>(grid.size(), 0.0)); }

SampledPath linear_path(const Grid& grid, double slope) {
    return from_function(grid, [slope](double x) { return slope * x; }, slope);
}

SampledPath sample_bm(const Grid& grid, double drift, double diffusivity, RngStream& rng) {
    require(diffusivity > 0 && std::isfinite(diffusivity), Errc::Precondition, "diffusivity must be > 0");
    const double h = grid.step();
    const double sd = diffusivity * std::sqrt(h);
    const double mu = drift * h;
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(grid.size(), 0.0);
    const std::size_t i0 = grid.origin();
    for (std::size_t i = i0 + 1; i < v.size(); ++i) v[i] = v[i - 1] + mu + sd * normal(rng);
    for (std::size_t i = i0; i-- > 0;) v[i] = v[i + 1] - mu + sd * normal(rng);
    return SampledPath(grid, std::move(v), drift);
}

double increment(const SampledPath& path, double x, double y) { return path.at(y) - path.at(x); }

SampledPath affine_rescale(const SampledPath& path, double gamma, double alpha, std::optional<Grid> target) {
    require(gamma > 0 && std::isfinite(gamma), Errc::Precondition, "gamma must be > 0");
    const Grid& src = path.grid();
    const double g2 = gamma * gamma;
    const Grid out = target ? *target : make_grid(src.x_min() / g2, src.x_max() / g2, src.step() / g2);
    const double tol = 1e-9 * src.step();
    require(g2 * out.x_min() >= src.x_min() - tol && g2 * out.x_max() <= src.x_max() + tol,
            Errc::DomainExceeded, "rescaled target grid leaves the source domain");
    std::vector<double> v(out.size());
    const bool natural = !target.has_value();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i == out.origin()) {
            v[i] = 0.0;
            continue;
        }
        const double x = out.node(i);
        const double f = natural ? path[i] : path.interpolate(g2 * x);
        v[i] = f / gamma + alpha * x;
    }
    return SampledPath(out, std::move(v), gamma * path.drift_label() + alpha);
}

SampledPath dilate(const SampledPath& path, double c) {
    require(c > 0 && std::isfinite(c), Errc::Precondition, "dilation factor must be > 0");
    const Grid& src = path.grid();
    const Grid out = make_grid(src.x_min() / c, src.x_max() / c, src.step() / c);
    std::vector<double> v(path.values().begin(), path.values().end());
    return SampledPath(out, std::move(v), c * path.drift_label());
}

SampledPath restrict_to(const SampledPath& path, double x_lo, double x_hi) {
    const Grid& g = path.grid();
    const std::size_t lo = g.index_of(x_lo);
    const std::size_t hi = g.index_of(x_hi);
    const Grid out = make_grid(g.node(lo), g.node(hi), g.step());
    std::vector<double> v(path.values().begin() + static_cast<std::ptrdiff_t>(lo),
                          path.values().begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    return SampledPath(out, std::move(v), path.drift_label());
}

double tail_slope(const SampledPath& path, double window) {
    const Grid& g = path.grid();
    require(window > 0 && window <= -g.x_min() + 1e-12, Errc::Precondition, "window must be in (0, |x_min|]");
    const double end = g.x_min() + window;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < g.size() && g.node(i) <= end + 1e-12 * g.step(); ++i) {
        const double y = path[i];
        if (!std::isfinite(y)) continue;
        const double x = g.node(i) - g.x_min();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    require(m >= 10, Errc::WindowTooSmall, "fewer than 10 usable nodes in slope window");
    const double n = static_cast<double>(m);
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double increment_violation(const SampledPath& lower, const SampledPath& upper) {
    require(lower.grid() == upper.grid(), Errc::Precondition, "paths live on different grids");
    // e = upper - lower must be nondecreasing; violation is max over x<y of e(x) - e(y).
    double run = -std::numeric_limits<double>::infinity();
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lower.size(); ++i) {
        const double a = lower[i], b = upper[i];
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        const double e = b - a;
        if (run > -std::numeric_limits<double>::infinity()) worst = std::max(worst, run - e);
        run = std::max(run, e);
    }
    return worst;
}

void write_csv(std::ostream& os, std::span<const SampledPath> paths) {
    require(!paths.empty(), Errc::Precondition, "nothing to write");
    const Grid& g = paths.front().grid();
    for (const auto& p : paths) require(p.grid() == g, Errc::Precondition, "paths live on different grids");
    os << "x";
    for (std::size_t j = 0; j < paths.size(); ++j) os << (j == 0 ? ",value" : ",value" + std::to_string(j + 1));
    os << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < g.size(); ++i) {
        os << g.node(i);
        for (const auto& p : paths) os << ',' << p[i];
        os << '\n';
    }
}

void write_csv_file(const std::string& file, std::span<const SampledPath> paths) {
    std::ofstream f(file);
    require(static_cast<bool>(f), Errc::Precondition, "cannot open " + file + " for writing");
    write_csv(f, paths);
    require(static_cast<bool>(f), Errc::Precondition, "write to " + file + " failed");
}

}  // namespace kpzh
