// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kpzh/paths.hpp"
#include "kpzh/queue_ops.hpp"
#include "kpzh/rng.hpp"
#include "kpzh/stats.hpp"

namespace kpzh {

// e^{-y} y^n / n!, zero off Z_{>=0} x R_{>=0}; q(n, 0) = 1(n = 0).
double poisson_kernel(long long n, double y);
double heat_kernel(double t, double x);

struct KernelParams {
    long long N = 1;
    double t = 1.0;
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
};

// sqrt(N) q(floor(tN) - floor(sN), (t-s)N + sqrt(N)(y-x)).
double pn_kernel(const KernelParams& p);

struct PolymerField {
    std::vector<SampledPath> levels;  // levels[r] drives level r
    double beta = 1.0;

    const Grid& grid() const { return levels.front().grid(); }
};

// Fresh field of `count` independent standard BMs; level r uses rng.split(r).
PolymerField sample_field(const Grid& grid, std::size_t count, double beta, const RngStream& rng);

// log Z(n, w | m, x) at every node w (-inf for w < x, and for w == x when n > m).
std::vector<double> zsd_profile(int n, int m, double x, const PolymerField& field);

// log Z(n, y | m, x).
double zsd_point(int n, double y, int m, double x, const PolymerField& field);

// log Z(n, y | r, w) at every node w (-inf for w > y), by suffix integration.
std::vector<double> zsd_backward(int n, double y, int r, const PolymerField& field);

// log of int_x^y Z(n,y|r,w) Z(r-1,w|m,x) dw for m < r <= n.
double zsd_split(int n, double y, int m, double x, int r, const PolymerField& field);

// log Z(n, . | e^{beta F}) with the integral over x cut at left_cut (default
// x_min), levels 0..n of the field.
std::vector<double> zsd_boundary_log(int n, const SampledPath& F, const PolymerField& field,
                                     std::optional<double> left_cut = std::nullopt);

struct InvarianceOptions {
    std::vector<double> nodes{-4.0, -1.0, 0.5, 1.0, 3.0};
    double family_level = 0.01;
};

// Evolves KPZH samples through markov_step and compares them with fresh
// samples after each checkpoint (two-sample KS per component and node).
// Bonferroni over every test of every checkpoint.
std::vector<TestReport> zsd_ratio_invariance_suite(const DriftVector& drifts, double beta, std::span<const int> checkpoints,
                                                   std::size_t reps, const Grid& grid, const RngStream& rng,
                                                   const InvarianceOptions& opt = {});

TestReport zsd_ratio_invariance(const DriftVector& drifts, double beta, int steps, std::size_t reps, const Grid& grid,
                                const RngStream& rng);

struct MomentCheck {
    double numeric = 0.0;
    double analytic_limit = 0.0;
    double error_estimate = 0.0;
};

// Left side: int_{-inf}^{t sqrt N + y} e^{alpha|x|} p_N^M(t,y|0,x) dx by
// adaptive Gauss-Kronrod. Right side: erfc closed form of the N -> inf limit.
MomentCheck moment_integral_check(long long N, double t, double y, double alpha, int M);
double moment_integral_limit(double t, double y, double alpha, int M);

struct ChaosCheck {
    double exact = 0.0;        // nested quadrature over compositions and simplex
    double closed_form = 0.0;  // Dirichlet closed form of the same sum
    double bound = 0.0;        // C^k q^2 y^k n^{k/2} / ((2n+k)^k Gamma((k+1)/2))
};

// Calibrated constant: 1.1 * exact / base at k = 1, n = 1.
double chaos_bound_constant();
double chaos_bound_base(int n, int k, double y);
ChaosCheck chaos_l2_bruteforce(int n, int k, double y);

// g(n, y) of the product bound for one composition a (k+1 parts summing to n)
// and increments u (k+1 lengths summing to y).
double product_bound_g(std::span<const int> a, std::span<const double> u);
// Closed form of the simplex integral of g for composition a and total length y.
double dirichlet_closed_form(std::span<const int> a, double y);
// Nested Gauss-Legendre integral of g over the simplex, k = a.size() - 1 <= 3.
double dirichlet_quadrature(std::span<const int> a, double y);

// Monte Carlo mean of e^{-y - gamma^2 y / 2} Z_gamma(n, y | 0, 0) vs q(n, y);
// pass iff within 3 standard errors.
TestReport ito_mean_check(int n, double y, double gamma, std::size_t reps, const RngStream& rng,
                          double step = 0x1.0p-10);

}  // namespace kpzh
