// SPDX-License-Identifier: Apache-2.0
#include "kpzh/ocy_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kpzh/errors.hpp"
#include "kpzh/kpzh.hpp"
#include "kpzh/parallel.hpp"
#include "kpzh/quadrature.hpp"

namespace kpzh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_poisson(long long n, double y) {
    if (n < 0 || y < 0) return kNegInf;
    if (y == 0) return n == 0 ? 0.0 : kNegInf;
    const double nd = static_cast<double>(n);
    // y^n e^{-y} / n! without the cancellation of the naive log form.
    const double q = boost::math::gamma_p_derivative(nd + 1.0, y);
    if (q > std::numeric_limits<double>::min()) return std::log(q);
    return -y + nd * std::log(y) - std::lgamma(nd + 1.0);
}

const SampledPath& level(const PolymerField& f, int r) {
    require(r >= 0 && static_cast<std::size_t>(r) < f.levels.size(), Errc::Precondition,
            "polymer field has no level " + std::to_string(r));
    return f.levels[static_cast<std::size_t>(r)];
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

double poisson_kernel(long long n, double y) {
    const double l = log_poisson(n, y);
    return l == kNegInf ? 0.0 : std::exp(l);
}

double heat_kernel(double t, double x) {
    if (!(t > 0)) return 0.0;
    return std::exp(-x * x / (2 * t)) / std::sqrt(2 * std::numbers::pi * t);
}

double pn_kernel(const KernelParams& p) {
    require(p.t > p.s, Errc::Precondition, "need t > s");
    require(p.N >= 1, Errc::Precondition, "need N >= 1");
    const double N = static_cast<double>(p.N);
    const long long n = static_cast<long long>(std::floor(p.t * N)) - static_cast<long long>(std::floor(p.s * N));
    const double arg = (p.t - p.s) * N + std::sqrt(N) * (p.y - p.x);
    const double l = log_poisson(n, arg);
    return l == kNegInf ? 0.0 : std::exp(0.5 * std::log(N) + l);
}

PolymerField sample_field(const Grid& grid, std::size_t count, double beta, const RngStream& rng) {
    PolymerField f;
    f.beta = beta;
    f.levels.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        RngStream s = rng.split(r);
        f.levels.push_back(sample_bm(grid, 0.0, 1.0, s));
    }
    return f;
}

std::vector<double> zsd_profile(int n, int m, double x, const PolymerField& field) {
    require(n >= m, Errc::OrderViolated, "need n >= m");
    const Grid& g = field.grid();
    const std::size_t ix = g.index_of(x);
    const double beta = field.beta;
    const SampledPath& Bm = level(field, m);
    std::vector<double> z(g.size(), kNegInf);
    for (std::size_t i = ix; i < g.size(); ++i) z[i] = beta * (Bm[i] - Bm[ix]);
    std::vector<double> h(g.size(), kNegInf);
    for (int r = m + 1; r <= n; ++r) {
        const SampledPath& Br = level(field, r);
        for (std::size_t i = ix; i < g.size(); ++i) h[i] = z[i] - beta * Br[i];
        const auto I = prefix_log_integral(h, g.step(), ix);
        for (std::size_t i = ix; i < g.size(); ++i) z[i] = I[i] == kNegInf ? kNegInf : beta * Br[i] + I[i];
    }
    return z;
}

double zsd_point(int n, double y, int m, double x, const PolymerField& field) {
    require(n >= m, Errc::OrderViolated, "need n >= m");
    require(y >= x, Errc::OrderViolated, "need y >= x");
    const Grid& g = field.grid();
    const std::size_t iy = g.index_of(y);
    g.index_of(x);
    return zsd_profile(n, m, x, field)[iy];
}

std::vector<double> zsd_backward(int n, double y, int r, const PolymerField& field) {
    require(n >= r, Errc::OrderViolated, "need n >= r");
    const Grid& g = field.grid();
    const std::size_t iy = g.index_of(y);
    const double beta = field.beta;
    const SampledPath& Bn = level(field, n);
    std::vector<double> z(g.size(), kNegInf);
    for (std::size_t i = 0; i <= iy; ++i) z[i] = beta * (Bn[iy] - Bn[i]);
    std::vector<double> rev(iy + 1);
    for (int k = n - 1; k >= r; --k) {
        const SampledPath& Bk = level(field, k);
        for (std::size_t i = 0; i <= iy; ++i) rev[iy - i] = z[i] + beta * Bk[i];
        const auto S = prefix_log_integral(rev, g.step(), 0);
        for (std::size_t i = 0; i <= iy; ++i) {
            const double s = S[iy - i];
            z[i] = s == kNegInf ? kNegInf : s - beta * Bk[i];
        }
    }
    return z;
}

double zsd_split(int n, double y, int m, double x, int r, const PolymerField& field) {
    require(m < r && r <= n, Errc::OrderViolated, "need m < r <= n");
    require(y >= x, Errc::OrderViolated, "need y >= x");
    const Grid& g = field.grid();
    const std::size_t ix = g.index_of(x);
    const std::size_t iy = g.index_of(y);
    const auto fwd = zsd_profile(r - 1, m, x, field);
    const auto bwd = zsd_backward(n, y, r, field);
    std::vector<double> h(g.size(), kNegInf);
    for (std::size_t i = ix; i <= iy; ++i) h[i] = fwd[i] + bwd[i];
    return prefix_log_integral(h, g.step(), ix)[iy];
}

std::vector<double> zsd_boundary_log(int n, const SampledPath& F, const PolymerField& field,
                                     std::optional<double> left_cut) {
    require(n >= 0, Errc::Precondition, "need n >= 0");
    const Grid& g = field.grid();
    require(F.grid() == g, Errc::Precondition, "boundary path and field use different grids");
    const std::size_t first = left_cut ? g.index_of(*left_cut) : 0;
    const double beta = field.beta;
    std::vector<double> z(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) z[i] = beta * F[i];
    std::vector<double> h(g.size());
    for (int r = 0; r <= n; ++r) {
        const SampledPath& Br = level(field, r);
        for (std::size_t i = 0; i < g.size(); ++i) h[i] = z[i] - beta * Br[i];
        const auto I = prefix_log_integral(h, g.step(), first);
        for (std::size_t i = 0; i < g.size(); ++i) z[i] = I[i] == kNegInf ? kNegInf : beta * Br[i] + I[i];
    }
    return z;
}

std::vector<TestReport> zsd_ratio_invariance_suite(const DriftVector& drifts, double beta, std::span<const int> checkpoints,
                                                   std::size_t reps, const Grid& grid, const RngStream& rng,
                                                   const InvarianceOptions& opt) {
    for (double d : drifts.values()) require(d > 0, Errc::Precondition, "drifts must be strictly positive");
    require(!checkpoints.empty(), Errc::Precondition, "no checkpoints");
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        require(checkpoints[c] >= 0, Errc::Precondition, "negative step count");
        if (c > 0) require(checkpoints[c] > checkpoints[c - 1], Errc::Precondition, "checkpoints must increase");
    }
    std::vector<std::size_t> idx;
    for (double x : opt.nodes) idx.push_back(grid.index_of(x));
    const std::size_t k = drifts.size(), P = idx.size(), C = checkpoints.size();
    // evolved[c][i][p][r], fresh[i][p][r]
    std::vector<double> evolved(C * k * P * reps), fresh(k * P * reps);
    auto ev = [&](std::size_t c, std::size_t i, std::size_t p, std::size_t r) -> double& {
        return evolved[((c * k + i) * P + p) * reps + r];
    };
    auto fr = [&](std::size_t i, std::size_t p, std::size_t r) -> double& { return fresh[(i * P + p) * reps + r]; };
    const TransformConfig cfg{beta, std::nullopt, GapPolicy::Warn};
    const RngStream s_start = rng.split(0), s_fresh = rng.split(1), s_drive = rng.split(2);
    parallel_for(reps, [&](std::size_t r) {
        CouplingSample cur = sample_kpzh(drifts, beta, grid, s_start.split(r));
        const CouplingSample ref = sample_kpzh(drifts, beta, grid, s_fresh.split(r));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t p = 0; p < P; ++p) fr(i, p, r) = ref[i][idx[p]];
        const RngStream drive = s_drive.split(r);
        int done = 0;
        for (std::size_t c = 0; c < C; ++c) {
            for (; done < checkpoints[c]; ++done) {
                RngStream bs = drive.split(static_cast<std::uint64_t>(done));
                const SampledPath B = sample_bm(grid, 0.0, 1.0, bs);
                cur = markov_step(B, cur, cfg);
            }
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t p = 0; p < P; ++p) ev(c, i, p, r) = cur[i][idx[p]];
        }
    });
    std::vector<TestReport> out;
    for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t p = 0; p < P; ++p) {
                auto rep = ks_two_sample(std::span<const double>(&ev(c, i, p, 0), reps),
                                         std::span<const double>(&fr(i, p, 0), reps));
                rep.name = "invariance steps=" + std::to_string(checkpoints[c]) + " component=" + std::to_string(i + 1) +
                           " x=" + fmt(opt.nodes[p]);
                rep.metadata["beta"] = fmt(beta);
                rep.metadata["drift"] = fmt(drifts[i]);
                rep.metadata["steps"] = std::to_string(checkpoints[c]);
                rep.metadata["grid"] = grid.describe();
                rep.metadata["seed"] = std::to_string(rng.seed());
                rep.metadata["stream_id"] = std::to_string(rng.stream_id());
                out.push_back(std::move(rep));
            }
        }
    }
    apply_bonferroni(out, opt.family_level);
    return out;
}

TestReport zsd_ratio_invariance(const DriftVector& drifts, double beta, int steps, std::size_t reps, const Grid& grid,
                                const RngStream& rng) {
    const int cp[] = {steps};
    const auto parts = zsd_ratio_invariance_suite(drifts, beta, cp, reps, grid, rng);
    auto r = combine_reports("zsd_ratio_invariance steps=" + std::to_string(steps), parts);
    r.metadata["beta"] = fmt(beta);
    r.metadata["seed"] = std::to_string(rng.seed());
    r.metadata["stream_id"] = std::to_string(rng.stream_id());
    return r;
}

double moment_integral_limit(double t, double y, double alpha, int M) {
    require(t > 0 && alpha > 0 && M >= 1, Errc::Precondition, "need t > 0, alpha > 0, M >= 1");
    const double Md = M;
    const double c = alpha * t / Md;
    const double k = std::sqrt(Md / (2 * t));
    const double A = 2 * std::sqrt(Md) * std::pow(2 * std::numbers::pi * t, (Md - 1) / 2);
    const double pre = std::exp(alpha * alpha * t / (2 * Md)) / A;
    return pre * (std::exp(alpha * y) * std::erfc(-k * (y + c)) + std::exp(-alpha * y) * std::erfc(k * (y - c)));
}

MomentCheck moment_integral_check(long long N, double t, double y, double alpha, int M) {
    require(t > 0 && alpha > 0 && M >= 1 && N >= 1, Errc::Precondition, "need t > 0, alpha > 0, M >= 1, N >= 1");
    const double Nd = static_cast<double>(N);
    const long long n = static_cast<long long>(std::floor(t * Nd));
    const double lsn = 0.5 * std::log(Nd);
    auto f = [&](double x) {
        const double arg = t * Nd + std::sqrt(Nd) * (y - x);
        const double l = log_poisson(n, arg);
        if (l == kNegInf) return 0.0;
        return std::exp(alpha * std::abs(x) + M * (lsn + l));
    };
    const double Md = M;
    const double upper = y + t * std::sqrt(Nd);
    const double spread = 40.0 * std::sqrt(t / Md) + 2.0 * alpha * t / Md + 10.0;
    const double lo = y - spread;
    const double hi = std::min(upper, y + spread);
    std::vector<double> cuts{lo, hi};
    for (double b : {0.0, y, y - alpha * t / Md, y + alpha * t / Md})
        if (b > lo && b < hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    MomentCheck out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 20,
                                                                                        1e-12, &err);
        out.numeric += v;
        out.error_estimate += err;
    }
    if (!(std::isfinite(out.numeric)) || out.error_estimate > 1e-8 * std::max(1.0, std::abs(out.numeric)))
        fail(Errc::QuadratureNonconvergent, "moment integral did not converge");
    out.analytic_limit = moment_integral_limit(t, y, alpha, M);
    return out;
}

namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;

// Integral over x = y_0 < y_1 < ... < y_k < y_{k+1} = x + len of f(u), where
// u holds the k+1 gaps. Nested Gauss-Legendre, exact for polynomials of
// degree < 40 in each variable.
double simplex_integral(int k, double len, const std::function<double(std::span<const double>)>& f) {
    std::vector<double> u(static_cast<std::size_t>(k) + 1);
    std::function<double(int, double)> rec = [&](int j, double remaining) -> double {
        if (j == k) {
            u[static_cast<std::size_t>(k)] = remaining;
            return f(u);
        }
        return Gauss::integrate(
            [&](double g) {
                u[static_cast<std::size_t>(j)] = g;
                return rec(j + 1, remaining - g);
            },
            0.0, remaining);
    };
    return rec(0, len);
}

void compositions(int n, int parts, std::vector<int>& cur, const std::function<void(std::span<const int>)>& visit) {
    if (parts == 1) {
        cur.push_back(n);
        visit(cur);
        cur.pop_back();
        return;
    }
    for (int a = 0; a <= n; ++a) {
        cur.push_back(a);
        compositions(n - a, parts - 1, cur, visit);
        cur.pop_back();
    }
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

double product_bound_g(std::span<const int> a, std::span<const double> u) {
    require(a.size() == u.size() && !a.empty(), Errc::Precondition, "composition and gaps must match");
    const int k = static_cast<int>(a.size()) - 1;
    double total = 0.0, log_g = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += u[i];
        n += a[i];
        log_g += (a[i] == 0 ? 0.0 : 2.0 * a[i] * std::log(u[i])) - log_factorial(2 * a[i]) -
                 0.5 * std::log(std::max(a[i], 1));
    }
    log_g += -2.0 * total + 2.0 * n * std::log(2.0) - 0.5 * (k + 1) * std::log(std::numbers::pi);
    return std::exp(log_g);
}

double dirichlet_closed_form(std::span<const int> a, double y) {
    require(!a.empty(), Errc::Precondition, "empty composition");
    const int k = static_cast<int>(a.size()) - 1;
    int n = 0;
    double lp = 0.0;
    for (int ai : a) {
        n += ai;
        lp -= 0.5 * std::log(std::max(ai, 1));
    }
    const double l = 2.0 * n * std::log(2.0) + 2.0 * log_factorial(n) + k * std::log(y) + 2.0 * log_poisson(n, y) -
                     0.5 * (k + 1) * std::log(std::numbers::pi) - log_factorial(2 * n + k) + lp;
    return std::exp(l);
}

double dirichlet_quadrature(std::span<const int> a, double y) {
    const int k = static_cast<int>(a.size()) - 1;
    require(k >= 1, Errc::Precondition, "need at least two parts");
    require(k <= 3, Errc::TooLarge, "simplex dimension above 3");
    std::vector<int> comp(a.begin(), a.end());
    return simplex_integral(k, y, [&](std::span<const double> u) { return product_bound_g(comp, u); });
}

double chaos_bound_base(int n, int k, double y) {
    const double q = poisson_kernel(n, y);
    return q * q * std::pow(y, k) * std::pow(static_cast<double>(n), 0.5 * k) /
           (std::pow(2.0 * n + k, k) * std::tgamma(0.5 * (k + 1)));
}

double chaos_bound_constant() {
    static const double c = [] {
        std::vector<int> cur;
        double exact = 0.0;
        compositions(1, 2, cur, [&](std::span<const int> a) {
            exact += simplex_integral(1, 1.0, [&](std::span<const double> u) {
                return std::pow(poisson_kernel(a[0], u[0]) * poisson_kernel(a[1], u[1]), 2);
            });
        });
        return 1.1 * exact / chaos_bound_base(1, 1, 1.0);
    }();
    return c;
}

ChaosCheck chaos_l2_bruteforce(int n, int k, double y) {
    require(k >= 1, Errc::Precondition, "need k >= 1");
    require(k <= 3 && n <= 8, Errc::TooLarge, "brute force limited to k <= 3, n <= 8");
    require(n >= 0 && y > 0, Errc::Precondition, "need n >= 0 and y > 0");
    ChaosCheck out;
    std::vector<int> cur;
    compositions(n, k + 1, cur, [&](std::span<const int> a) {
        std::vector<int> comp(a.begin(), a.end());
        out.exact += simplex_integral(k, y, [&](std::span<const double> u) {
            double p = 1.0;
            for (std::size_t i = 0; i < comp.size(); ++i) {
                const double q = poisson_kernel(comp[i], u[i]);
                p *= q * q;
            }
            return p;
        });
        // Simplex integral of prod u_i^{2a_i} is y^{2n+k} prod (2a_i)! / (2n+k)!.
        double l = -2.0 * y + (2.0 * n + k) * std::log(y) - log_factorial(2 * n + k);
        for (int ai : comp) l += log_factorial(2 * ai) - 2.0 * log_factorial(ai);
        out.closed_form += std::exp(l);
    });
    out.bound = std::pow(chaos_bound_constant(), k) * chaos_bound_base(n, k, y);
    return out;
}

TestReport ito_mean_check(int n, double y, double gamma, std::size_t reps, const RngStream& rng, double step) {
    require(n >= 0 && y > 0 && gamma > 0, Errc::Precondition, "need n >= 0, y > 0, gamma > 0");
    require(reps >= 2, Errc::TooFewSamples, "need at least two replicates");
    const double cells = std::max(1.0, std::ceil(y / step - 1e-9));
    const double h = y / cells;
    const Grid g = make_grid(0.0, y, h);
    std::vector<double> v(reps);
    parallel_for(reps, [&](std::size_t r) {
        const PolymerField f = sample_field(g, static_cast<std::size_t>(n) + 1, gamma, rng.split(r));
        v[r] = std::exp(-y - 0.5 * gamma * gamma * y + zsd_point(n, y, 0, 0.0, f));
    });
    const Moments m = moments(v);
    const double target = poisson_kernel(n, y);
    TestReport rep;
    rep.name = "ito_mean_check n=" + std::to_string(n) + " y=" + fmt(y) + " gamma=" + fmt(gamma);
    rep.n1 = reps;
    rep.statistic = m.se_mean() > 0 ? (m.mean - target) / m.se_mean() : 0.0;
    rep.p_value = std::erfc(std::abs(rep.statistic) / std::numbers::sqrt2);
    rep.threshold = std::erfc(3.0 / std::numbers::sqrt2);
    rep.decide();
    rep.metadata["mean"] = fmt(m.mean);
    rep.metadata["se"] = fmt(m.se_mean());
    rep.metadata["target"] = fmt(target);
    rep.metadata["step"] = fmt(h);
    rep.metadata["rule"] = "pass iff |mean - q(n,y)| <= 3 SE";
    rep.metadata["seed"] = std::to_string(rng.seed());
    rep.metadata["stream_id"] = std::to_string(rng.stream_id());
    return rep;
}

}  // namespace kpzh
