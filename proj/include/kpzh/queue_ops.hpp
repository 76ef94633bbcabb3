// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kpzh/paths.hpp"

namespace kpzh {

enum class GapPolicy { Off, Warn, Strict };

struct TransformConfig {
    double beta = 1.0;
    std::optional<double> left_cut;  // defaults to grid x_min
    GapPolicy gap = GapPolicy::Warn;

    double cut(const Grid& g) const { return left_cut.value_or(g.x_min()); }
};

// Ordered tuple of pinned paths on one grid with strictly increasing drift labels.
struct CouplingSample {
    std::vector<SampledPath> paths;
    DriftVector drifts;

    CouplingSample(std::vector<SampledPath> p, DriftVector d);
    std::size_t size() const noexcept { return paths.size(); }
    const SampledPath& operator[](std::size_t i) const { return paths[i]; }
    const Grid& grid() const { return paths.front().grid(); }
};

// Number of drift-gap warnings raised so far in this process (Warn policy).
std::uint64_t drift_gap_warnings() noexcept;

// Estimated tail-slope gap of Y over B (left window of half the negative axis).
// NaN when the window is too short to estimate.
double estimated_drift_gap(const SampledPath& B, const SampledPath& Y);

// Q(y) = beta^{-1} log int_{cut}^y exp(beta(B(x,y) - Y(x,y))) dx. Not pinned.
std::vector<double> q_map(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg);
SampledPath d_map(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg);
SampledPath r_map(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg);

struct DRPair {
    SampledPath d;
    SampledPath r;
};
// D and R from one quadrature pass.
DRPair dr_map(const SampledPath& B, const SampledPath& Y, const TransformConfig& cfg);

// D^{(n)}(Y^1,...,Y^n) = D(Y^1, D^{(n-1)}(Y^2,...,Y^n)); n = 1 returns Y^1.
SampledPath d_iter(std::span<const SampledPath> Ys, const TransformConfig& cfg);

// Same value through the nested-integral representation
// e^{beta D^{(n)}(y)} = e^{beta Y^1(y)} N(y) / N(0),
// N(y) = int_{x_1<y} e^{beta(Y^2-Y^1)(x_1)} int_{x_2<x_1} ... e^{beta(Y^n-Y^{n-1})(x_{n-1})},
// evaluated level by level in scaled linear arithmetic.
SampledPath d_iter_nested(std::span<const SampledPath> Ys, const TransformConfig& cfg);

// sup |a - b| over nodes x >= from where both are finite; +inf if exactly one is.
double sup_distance(const SampledPath& a, const SampledPath& b, double from);

// Ybar^1 = D(B,Y^1), B^i = R(B^{i-1},Y^{i-1}), Ybar^i = D(B^i,Y^i).
std::vector<SampledPath> multiline_step(const SampledPath& B, std::span<const SampledPath> Ys,
                                        const TransformConfig& cfg);

// Componentwise D(B, eta^i).
CouplingSample markov_step(const SampledPath& B, const CouplingSample& etas, const TransformConfig& cfg);

enum class IntertwineOrder {
    Resolved,  // B2 = R(B1, Y1)
    Literal,   // B2 = R(Y1, B1)
};

struct IntertwineOptions {
    IntertwineOrder order = IntertwineOrder::Resolved;
    // Residual is taken over nodes x >= eval_from; default is half way from
    // the cut to the origin, away from the cells next to the cut where the
    // zero-mass convention makes a single nested level lose a node.
    std::optional<double> eval_from;
};

// sup |D(D(B1,Y1), D(B2,Y2)) - D^{(3)}(B1,Y1,Y2)| over the evaluation window.
double intertwine_residual(const SampledPath& B1, const SampledPath& Y1, const SampledPath& Y2,
                           const TransformConfig& cfg, const IntertwineOptions& opt = {});

// Zero temperature: B(y) + sup_{cut<=x<=y}(Y-B) - sup_{cut<=x<=0}(Y-B).
SampledPath sh_d_map(const SampledPath& B, const SampledPath& Y, std::optional<double> left_cut = std::nullopt);

// Zero-temperature D^{(n)} by max-plus dynamic programming, one pass per level.
SampledPath sh_d_iter(std::span<const SampledPath> Ys, std::optional<double> left_cut = std::nullopt);

// Zero-temperature D^{(n)} through repeated sh_d_map.
SampledPath sh_d_iter_recursive(std::span<const SampledPath> Ys, std::optional<double> left_cut = std::nullopt);

}  // namespace kpzh
