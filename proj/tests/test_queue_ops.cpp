// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "kpzh/errors.hpp"
#include "kpzh/paths.hpp"
#include "kpzh/queue_ops.hpp"
#include "kpzh/stats.hpp"

using namespace kpzh;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

SampledPath bm(const Grid& g, double drift, const RngStream& base, std::uint64_t sub) {
    RngStream s = base.split(sub);
    return sample_bm(g, drift, 1.0, s);
}

// Integer multiples of 1/8 so max-plus arithmetic stays exact.
SampledPath dyadic_walk(const Grid& g, double slope, RngStream rng) {
    std::vector<double> v(g.size(), 0.0);
    for (std::size_t i = g.origin() + 1; i < g.size(); ++i)
        v[i] = v[i - 1] + (static_cast<double>(rng() % 17) - 8.0 + 8.0 * slope) / 8.0;
    for (std::size_t i = g.origin(); i-- > 0;)
        v[i] = v[i + 1] - (static_cast<double>(rng() % 17) - 8.0 + 8.0 * slope) / 8.0;
    return SampledPath(g, std::move(v), slope);
}

const TransformConfig kStrict{1.0, std::nullopt, GapPolicy::Strict};
const TransformConfig kWarn{1.0, std::nullopt, GapPolicy::Warn};
}  // namespace

TEST(QMap, EqualInputsGiveLogLength) {
    const Grid g = make_grid(-2, 2, 0x1.0p-6);
    const SampledPath B = linear_path(g, 0.7);
    const TransformConfig cfg{1.0, -2.0, GapPolicy::Off};
    const auto Q = q_map(B, B, cfg);
    EXPECT_NEAR(Q[g.origin()], std::log(2.0), 1e-14);
    EXPECT_NEAR(Q[g.index_of(1.0)], std::log(3.0), 1e-14);
}

TEST(QMap, LinearClosedForm) {
    const Grid g = make_grid(-20, 2, 0x1.0p-8);
    const auto Q = q_map(zero_path(g), linear_path(g, 1.0), kStrict);
    EXPECT_NEAR(Q[g.origin()], std::log1p(-std::exp(-20.0)), 1e-15);
}

TEST(QMap, FiniteOnBrownianInputs) {
    const Grid g = make_grid(-10, 2, 0x1.0p-6);
    const RngStream base(101, 0);
    for (std::size_t r = 0; r < 1000; ++r) {
        const RngStream s = base.split(r);
        const auto Q = q_map(bm(g, 0.0, s, 0), bm(g, 1.0, s, 1), {1.0, std::nullopt, GapPolicy::Off});
        for (std::size_t i = 1; i < g.size(); ++i) ASSERT_TRUE(std::isfinite(Q[i])) << r << ' ' << i;
        ASSERT_EQ(Q[0], -kInf);
    }
}

TEST(DMap, PinnedAndClosedForm) {
    const Grid g = make_grid(-20, 2, 0x1.0p-8);
    const SampledPath D = d_map(zero_path(g), linear_path(g, 1.0), kStrict);
    EXPECT_EQ(D[g.origin()], 0.0);
    const double want = 1.0 + std::log1p(-std::exp(-21.0)) - std::log1p(-std::exp(-20.0));
    EXPECT_NEAR(D.at(1.0), want, 1e-13);
    EXPECT_NEAR(D.at(1.0) - 1.0, 1.30290e-9, 1e-14);
    EXPECT_EQ(D.drift_label(), 1.0);
}

TEST(RMap, PinnedAndClosedForm) {
    const Grid g = make_grid(-20, 2, 0x1.0p-8);
    const SampledPath R = r_map(zero_path(g), linear_path(g, 1.0), kStrict);
    EXPECT_EQ(R[g.origin()], 0.0);
    EXPECT_LT(std::abs(R.at(1.0)), 1e-8);
}

TEST(DMap, LeftOfCutConvention) {
    const Grid g = make_grid(-4, 2, 0.25);
    const TransformConfig cfg{1.0, -2.0, GapPolicy::Off};
    const SampledPath D = d_map(zero_path(g), linear_path(g, 1.0), cfg);
    const SampledPath R = r_map(zero_path(g), linear_path(g, 1.0), cfg);
    for (std::size_t i = 0; i <= g.index_of(-2.0); ++i) {
        EXPECT_EQ(D[i], -kInf);
        EXPECT_EQ(R[i], kInf);
    }
}

TEST(DMap, StrictGapPolicyRejectsReversedDrifts) {
    const Grid g = make_grid(-20, 2, 0x1.0p-6);
    try {
        d_map(linear_path(g, 1.0), zero_path(g), kStrict);
        FAIL() << "expected DriftGapViolated";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DriftGapViolated);
    }
}

TEST(DMap, OutputIsBrownianWithUpperDrift) {
    const Grid g = make_grid(-20, 2, 0x1.0p-7);
    const std::size_t reps = 10000;
    std::vector<double> d(reps), r(reps);
    const RngStream base(202, 0);
    for (std::size_t k = 0; k < reps; ++k) {
        const RngStream s = base.split(k);
        const DRPair p = dr_map(bm(g, 0.0, s, 0), bm(g, 1.0, s, 1), kWarn);
        d[k] = p.d.at(1.0);
        r[k] = p.r.at(-1.0);
    }
    const TestReport td = ks_one_sample(d, NormalDist{1.0, 1.0});
    const TestReport tr = ks_one_sample(r, NormalDist{0.0, 1.0});
    EXPECT_TRUE(td.pass) << td.p_value;
    EXPECT_TRUE(tr.pass) << tr.p_value;
}

TEST(DIter, SmallOrders) {
    const Grid g = make_grid(-20, 2, 0x1.0p-6);
    const RngStream s(303, 0);
    const std::vector<SampledPath> Ys{bm(g, 0.0, s, 0), bm(g, 1.0, s, 1)};
    const SampledPath one = d_iter(std::span(Ys).first(1), kWarn);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(one[i], Ys[0][i]);
    const SampledPath two = d_iter(Ys, kWarn);
    const SampledPath dm = d_map(Ys[0], Ys[1], kWarn);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(two[i], dm[i]);
}

TEST(DIter, NestedFormOnPiecewiseLinearInputs) {
    const Grid g = make_grid(-20, 3, 0x1.0p-8);
    const std::vector<SampledPath> Ys{
        from_function(g, [](double x) { return std::min(0.3 * x, -0.1 * x); }),
        from_function(g, [](double x) { return x < 0 ? 1.2 * x : 0.5 * x; }),
        from_function(g, [](double x) { return x < 0 ? 2.2 * x : -x; })};
    const SampledPath a = d_iter(Ys, kWarn);
    const SampledPath b = d_iter_nested(Ys, kWarn);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
            EXPECT_EQ(std::isfinite(a[i]), std::isfinite(b[i])) << i;
            continue;
        }
        EXPECT_LE(std::abs(std::expm1(a[i] - b[i])), 1e-8) << g.node(i);
    }
}

TEST(Multiline, SingleLineIsDMap) {
    const Grid g = make_grid(-20, 2, 0x1.0p-6);
    const RngStream s(404, 0);
    const SampledPath B = bm(g, 0.0, s, 0);
    const std::vector<SampledPath> Ys{bm(g, 1.0, s, 1)};
    const auto out = multiline_step(B, Ys, kWarn);
    ASSERT_EQ(out.size(), 1u);
    const SampledPath d = d_map(B, Ys[0], kWarn);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(out[0][i], d[i]);
}

TEST(Multiline, MarginalsAndIndependence) {
    const Grid g = make_grid(-20, 2, 0x1.0p-7);
    const std::size_t reps = 10000;
    std::vector<double> a(reps), b(reps);
    const RngStream base(505, 0);
    for (std::size_t k = 0; k < reps; ++k) {
        const RngStream s = base.split(k);
        const std::vector<SampledPath> Ys{bm(g, 1.0, s, 1), bm(g, 2.0, s, 2)};
        const auto out = multiline_step(bm(g, 0.0, s, 0), Ys, kWarn);
        a[k] = out[0].at(1.0);
        b[k] = out[1].at(1.0);
    }
    auto ta = ks_one_sample(a, NormalDist{1.0, 1.0});
    auto tb = ks_one_sample(b, NormalDist{2.0, 1.0});
    EXPECT_TRUE(ta.pass) << ta.p_value;
    EXPECT_TRUE(tb.pass) << tb.p_value;
    const Moments ma = moments(a), mb = moments(b);
    double cov = 0.0;
    for (std::size_t k = 0; k < reps; ++k) cov += (a[k] - ma.mean) * (b[k] - mb.mean);
    const double corr = cov / (reps - 1) / std::sqrt(ma.variance * mb.variance);
    EXPECT_LT(std::abs(corr), 3.0 / std::sqrt(double(reps)));
}

TEST(MarkovStep, SingleComponentAndOrdering) {
    const Grid g = make_grid(-20, 2, 0x1.0p-6);
    const RngStream s(606, 0);
    const SampledPath B = bm(g, 0.0, s, 0);
    const CouplingSample one({bm(g, 1.0, s, 1)}, DriftVector({1.0}));
    const CouplingSample o1 = markov_step(B, one, kWarn);
    const SampledPath d = d_map(B, one[0], kWarn);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(o1[0][i], d[i]);

    // Ordered inputs: eta^2 = eta^1 + 2x keeps eta^1 <=_inc eta^2.
    const SampledPath e1 = bm(g, 1.0, s, 2);
    std::vector<double> v(e1.values().begin(), e1.values().end());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] += 2.0 * g.node(i);
    const CouplingSample two({e1, SampledPath(g, v, 3.0)}, DriftVector({1.0, 3.0}));
    const CouplingSample o2 = markov_step(B, two, kWarn);
    EXPECT_LE(increment_violation(o2[0], o2[1]), 1e-9);
    EXPECT_LE(increment_violation(B, o2[0]), 1e-9);
}

TEST(Intertwine, LinearInputs) {
    const Grid g = make_grid(-30, 5, 0x1.0p-12);
    const double r = intertwine_residual(zero_path(g), linear_path(g, 1.0), linear_path(g, 2.0), kStrict);
    EXPECT_LT(r, 1e-6);
}

TEST(Intertwine, ResolvedOrderRefinesLiteralDoesNot) {
    const Grid fine = make_grid(-30, 5, 0x1.0p-11);
    const Grid coarse = make_grid(-30, 5, 0x1.0p-10);
    const RngStream s(707, 0);
    const SampledPath P[] = {bm(fine, 0.0, s, 0), bm(fine, 1.0, s, 1), bm(fine, 2.0, s, 2)};
    std::vector<SampledPath> C;
    for (const auto& p : P) {
        std::vector<double> v(coarse.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = p[2 * i];
        C.emplace_back(coarse, std::move(v), p.drift_label());
    }
    const double rc = intertwine_residual(C[0], C[1], C[2], kWarn);
    const double rf = intertwine_residual(P[0], P[1], P[2], kWarn);
    EXPECT_GE(rc / rf, 1.8);
    IntertwineOptions lit;
    lit.order = IntertwineOrder::Literal;
    const double lc = intertwine_residual(C[0], C[1], C[2], kWarn, lit);
    const double lf = intertwine_residual(P[0], P[1], P[2], kWarn, lit);
    EXPECT_GT(lf, 1e-2);
    EXPECT_LT(lc / lf, 1.5);
}

TEST(ShDMap, Identities) {
    const Grid g = make_grid(-4, 4, 0.125);
    const SampledPath B = dyadic_walk(g, 0.0, RngStream(1, 1));
    const SampledPath same = sh_d_map(B, B);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(same[i], B[i]);
    const SampledPath D = sh_d_map(zero_path(g), from_function(g, [](double x) { return std::min(x, 0.0); }));
    EXPECT_EQ(D.at(1.0), 0.0);
    EXPECT_EQ(D.at(-1.0), -1.0);  // running sup of min(x,0) up to y < 0 is y
}

TEST(ShDIter, DpMatchesRecursionExactlyOnDyadicInputs) {
    const Grid g = make_grid(-8, 4, 0.125);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::vector<SampledPath> Ys{dyadic_walk(g, 0.0, RngStream(seed, 0)),
                                          dyadic_walk(g, 1.0, RngStream(seed, 1)),
                                          dyadic_walk(g, 2.0, RngStream(seed, 2))};
        const SampledPath one = sh_d_iter(std::span(Ys).first(1));
        for (std::size_t i = 0; i < g.size(); ++i) ASSERT_EQ(one[i], Ys[0][i]);
        const SampledPath two = sh_d_iter(std::span(Ys).first(2));
        const SampledPath m = sh_d_map(Ys[0], Ys[1]);
        for (std::size_t i = 0; i < g.size(); ++i) ASSERT_EQ(two[i], m[i]);
        const SampledPath dp = sh_d_iter(Ys);
        const SampledPath rec = sh_d_iter_recursive(Ys);
        for (std::size_t i = 0; i < g.size(); ++i) ASSERT_EQ(dp[i], rec[i]) << seed << ' ' << i;
    }
}

TEST(ShDMap, LogSumExpConvergesAtRateOneOverBeta) {
    const Grid g = make_grid(-20, 5, 0x1.0p-10);
    const SampledPath B = from_function(g, [](double x) { return 0.3 * std::sin(2 * x); });
    const SampledPath Y = from_function(g, [](double x) { return x + 0.2 * std::cos(x) - 0.2; });
    const SampledPath sh = sh_d_map(B, Y);
    const double e100 = sup_distance(d_map(B, Y, {100.0, std::nullopt, GapPolicy::Strict}), sh, -10.0);
    const double e200 = sup_distance(d_map(B, Y, {200.0, std::nullopt, GapPolicy::Strict}), sh, -10.0);
    EXPECT_GE(e100 / e200, 1.8);
    EXPECT_LE(e100 / e200, 2.2);
}

TEST(Transforms, OutputsPinned) {
    const Grid g = make_grid(-20, 2, 0x1.0p-6);
    const RngStream s(808, 0);
    const std::vector<SampledPath> Ys{bm(g, 0.0, s, 0), bm(g, 1.0, s, 1), bm(g, 2.0, s, 2)};
    EXPECT_EQ(d_map(Ys[0], Ys[1], kWarn).at(0.0), 0.0);
    EXPECT_EQ(r_map(Ys[0], Ys[1], kWarn).at(0.0), 0.0);
    EXPECT_EQ(d_iter(Ys, kWarn).at(0.0), 0.0);
    EXPECT_EQ(d_iter_nested(Ys, kWarn).at(0.0), 0.0);
    EXPECT_EQ(sh_d_iter(Ys).at(0.0), 0.0);
    for (const auto& p : multiline_step(Ys[0], std::span(Ys).subspan(1), kWarn)) EXPECT_EQ(p.at(0.0), 0.0);
}
