// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kpzh/rng.hpp"

namespace kpzh {

// Uniform lattice containing the origin. Nodes are x_min + i*step.
class Grid {
public:
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return node(size() - 1); }
    double step() const noexcept { return step_; }
    std::size_t size() const noexcept { return n_; }
    std::size_t origin() const noexcept { return i0_; }

    double node(std::size_t i) const noexcept {
        return (static_cast<double>(i) - static_cast<double>(i0_)) * step_;
    }
    // Index of the node at x; throws OffGrid when x is not a node.
    std::size_t index_of(double x) const;
    std::optional<std::size_t> try_index_of(double x) const noexcept;

    bool operator==(const Grid& o) const noexcept {
        return n_ == o.n_ && i0_ == o.i0_ && step_ == o.step_;
    }

    std::string describe() const;

private:
    friend Grid make_grid(double, double, double);
    Grid(double step, std::size_t i0, std::size_t n)
        : x_min_(-static_cast<double>(i0) * step), step_(step), i0_(i0), n_(n) {}

    double x_min_;
    double step_;
    std::size_t i0_;
    std::size_t n_;
};

Grid make_grid(double x_min, double x_max, double step);

class SampledPath {
public:
    SampledPath(Grid grid, std::vector<double> values, double drift_label = 0.0);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::vector<double>& mutable_values() noexcept { return values_; }
    double drift_label() const noexcept { return drift_; }
    void set_drift_label(double d) noexcept { drift_ = d; }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double at(double x) const { return values_[grid_.index_of(x)]; }
    // Linear interpolation; x must lie inside the grid.
    double interpolate(double x) const;
    std::size_t size() const noexcept { return values_.size(); }

private:
    Grid grid_;
    std::vector<double> values_;
    double drift_;
};

// Strictly increasing drift labels.
class DriftVector {
public:
    DriftVector() = default;
    explicit DriftVector(std::vector<double> drifts);
    std::span<const double> values() const noexcept { return d_; }
    std::size_t size() const noexcept { return d_.size(); }
    double operator[](std::size_t i) const noexcept { return d_[i]; }
    double min_gap() const noexcept;

private:
    std::vector<double> d_;
};

SampledPath zero_path(const Grid& grid);
// f(x) = slope*x, and f(x) = a(x) for an arbitrary callable via from_function.
SampledPath linear_path(const Grid& grid, double slope);

template <class F>
SampledPath from_function(const Grid& grid, F&& f, double drift_label = 0.0) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i == grid.origin()) ? 0.0 : f(grid.node(i));
    return SampledPath(grid, std::move(v), drift_label);
}

// c*W(x) + drift*x, built outward from the origin. Right half first, then left.
SampledPath sample_bm(const Grid& grid, double drift, double diffusivity, RngStream& rng);

double increment(const SampledPath& path, double x, double y);

// T f(x) = f(c^2 x)/c + alpha x on the target grid. Default target is the
// source grid scaled by 1/gamma^2 so every node maps onto a source node.
SampledPath affine_rescale(const SampledPath& path, double gamma, double alpha,
                           std::optional<Grid> target = std::nullopt);

// g(x) = f(c x) on the source grid scaled by 1/c.
SampledPath dilate(const SampledPath& path, double c);

// Restrict to the sub-window [x_lo, x_hi] (both nodes, containing 0).
SampledPath restrict_to(const SampledPath& path, double x_lo, double x_hi);

// Least-squares slope over nodes in [x_min, x_min + window]. Non-finite
// values are skipped.
double tail_slope(const SampledPath& path, double window);

// sup over x < y of (lower(x,y) - upper(x,y)), over nodes where both paths
// are finite. <= 0 means lower <=_inc upper.
double increment_violation(const SampledPath& lower, const SampledPath& upper);

// CSV: header x,value[,value2,...]; 17 significant digits.
void write_csv(std::ostream& os, std::span<const SampledPath> paths);
void write_csv_file(const std::string& file, std::span<const SampledPath> paths);

}  // namespace kpzh
