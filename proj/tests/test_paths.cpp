// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "kpzh/errors.hpp"
#include "kpzh/parallel.hpp"
#include "kpzh/paths.hpp"
#include "kpzh/stats.hpp"

using namespace kpzh;

namespace {
Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Precondition;  // sentinel for "did not throw"
}
}  // namespace

TEST(Grid, HalfStepNodes) {
    const Grid g = make_grid(-1, 1, 0.5);
    ASSERT_EQ(g.size(), 5u);
    const double want[] = {-1, -0.5, 0, 0.5, 1};
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(g.node(i), want[i]);
    EXPECT_EQ(g.origin(), 2u);
}

TEST(Grid, NonAlignedBoundsRejected) {
    EXPECT_EQ(code_of([] { make_grid(-1, 1, 0.3); }), Errc::NonAlignedBounds);
}

TEST(Grid, DefaultWindowNodeCount) { EXPECT_EQ(make_grid(-20, 5, 1e-3).size(), 25001u); }

TEST(Grid, MissingOriginRejected) {
    EXPECT_EQ(code_of([] { make_grid(-1, -0.5, 0.5); }), Errc::NonAlignedBounds);
}

TEST(Grid, IndexLookup) {
    const Grid g = make_grid(-2, 2, 0.25);
    EXPECT_EQ(g.index_of(0.0), g.origin());
    EXPECT_EQ(g.node(g.index_of(1.25)), 1.25);
    EXPECT_FALSE(g.try_index_of(0.1).has_value());
    EXPECT_EQ(code_of([&] { g.index_of(0.1); }), Errc::OffGrid);
}

TEST(SampledPath, PinningEnforced) {
    const Grid g = make_grid(-1, 1, 0.5);
    EXPECT_THROW(SampledPath(g, {1, 1, 1, 1, 1}), Error);
    EXPECT_NO_THROW(SampledPath(g, {1, 1, 0, 1, 1}));
}

TEST(SampleBm, IncrementMeanAndVariance) {
    const Grid g = make_grid(-1, 1, 0x1.0p-4);
    const std::size_t reps = 100000;
    std::vector<double> inc(reps);
    const RngStream base(11, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream s = base.split(r);
        const SampledPath p = sample_bm(g, 0.0, 1.0, s);
        inc[r] = increment(p, 0.0, g.step());
    }
    const Moments m = moments(inc);
    const double z_mean = m.mean / m.se_mean();
    const double z_var = (m.variance - g.step()) / m.se_variance();
    EXPECT_LT(std::abs(z_mean), 2.576);
    EXPECT_LT(std::abs(z_var), 2.576);
}

TEST(SampleBm, DriftMean) {
    const Grid g = make_grid(-1, 1, 0x1.0p-6);
    const std::size_t reps = 100000;
    double sum = 0.0;
    const RngStream base(12, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream s = base.split(r);
        sum += sample_bm(g, 2.0, 1.0, s).at(1.0);
    }
    EXPECT_LT(std::abs(sum / reps - 2.0), 3.0 / std::sqrt(double(reps)));
}

TEST(SampleBm, Deterministic) {
    const Grid g = make_grid(-3, 3, 0x1.0p-8);
    RngStream a(5, 9), b(5, 9);
    const SampledPath p = sample_bm(g, 1.0, 1.0, a), q = sample_bm(g, 1.0, 1.0, b);
    for (std::size_t i = 0; i < g.size(); ++i) ASSERT_EQ(p[i], q[i]);
}

TEST(SampleBm, DiffusivityRejected) {
    const Grid g = make_grid(-1, 1, 0.5);
    RngStream s(1, 1);
    EXPECT_THROW(sample_bm(g, 0.0, 0.0, s), Error);
}

TEST(Increment, Identities) {
    const Grid g = make_grid(-2, 2, 0.125);
    RngStream s(3, 3);
    const SampledPath F = sample_bm(g, 0.5, 1.0, s);
    EXPECT_EQ(increment(F, 0.75, 0.75), 0.0);
    EXPECT_EQ(increment(F, 0.0, 1.5), F.at(1.5));
    EXPECT_NEAR(increment(F, -1.0, 0.5) + increment(F, 0.5, 1.75), increment(F, -1.0, 1.75), 1e-14);
}

TEST(AffineRescale, IdentityAndSlope) {
    const Grid g = make_grid(-2, 2, 0.125);
    RngStream s(4, 4);
    const SampledPath F = sample_bm(g, 0.0, 1.0, s);
    const SampledPath I = affine_rescale(F, 1.0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(I[i], F[i]);
    const SampledPath T = affine_rescale(F, 1.0, 3.0);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(T[i], F[i] + 3.0 * g.node(i), 1e-14);
    EXPECT_EQ(T.drift_label(), F.drift_label() + 3.0);
}

TEST(AffineRescale, BrownianScalingKs) {
    // T_{2,0} of BM(drift 1) is BM(drift 2) on the target grid.
    const Grid g = make_grid(-8, 8, 0x1.0p-6);
    const std::size_t reps = 10000;
    std::vector<double> v(reps);
    const RngStream base(21, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream s = base.split(r);
        v[r] = affine_rescale(sample_bm(g, 1.0, 1.0, s), 2.0, 0.0).at(1.0);
    }
    const TestReport t = ks_one_sample(v, NormalDist{2.0, 1.0});
    EXPECT_TRUE(t.pass) << t.p_value;
}

TEST(AffineRescale, NaturalTargetGrid) {
    const Grid g = make_grid(-4, 4, 0.25);
    const SampledPath L = linear_path(g, 1.0);
    const SampledPath T = affine_rescale(L, 2.0, 0.0);
    EXPECT_EQ(T.grid().x_min(), -1.0);
    EXPECT_EQ(T.grid().x_max(), 1.0);
    EXPECT_NEAR(T.at(1.0), 2.0, 1e-15);
}

TEST(TailSlope, Deterministic) {
    const Grid g = make_grid(-10, 2, 0.125);
    EXPECT_NEAR(tail_slope(linear_path(g, 3.0), 5.0), 3.0, 1e-12);
    EXPECT_NEAR(tail_slope(from_function(g, [](double x) { return std::abs(x); }), 5.0), -1.0, 1e-12);
    EXPECT_THROW(tail_slope(linear_path(g, 1.0), 11.0), Error);
}

TEST(TailSlope, BrownianEstimate) {
    const Grid g = make_grid(-200, 5, 0x1.0p-4);
    int within = 0;
    const int reps = 200;
    const RngStream base(31, 0);
    for (int r = 0; r < reps; ++r) {
        RngStream s = base.split(r);
        within += std::abs(tail_slope(sample_bm(g, 2.0, 1.0, s), 50.0) - 2.0) < 1.0;
    }
    EXPECT_GE(within, reps * 99 / 100);
}

TEST(IncrementViolation, OrderedAndNot) {
    const Grid g = make_grid(-2, 2, 0.5);
    EXPECT_LE(increment_violation(linear_path(g, 0.0), linear_path(g, 1.0)), 0.0);
    EXPECT_GT(increment_violation(linear_path(g, 1.0), linear_path(g, 0.0)), 0.0);
}

TEST(Csv, HeaderAndRoundTrip) {
    const Grid g = make_grid(-1, 1, 0.5);
    const SampledPath p(g, {0.1 + 0.2, -1.0 / 3.0, 0.0, 1e-300, 2.5});
    const SampledPath q = linear_path(g, 2.0);
    std::ostringstream os;
    const SampledPath both[] = {p, q};
    write_csv(os, both);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "x,value,value2");
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::getline(is, line);
        std::istringstream ls(line);
        std::string a, b, c;
        std::getline(ls, a, ',');
        std::getline(ls, b, ',');
        std::getline(ls, c, ',');
        EXPECT_EQ(std::stod(a), g.node(i));
        EXPECT_EQ(std::stod(b), p[i]);
        EXPECT_EQ(std::stod(c), q[i]);
    }
}

TEST(Parallel, ThreadCountIndependence) {
    const Grid g = make_grid(-2, 2, 0x1.0p-6);
    auto run = [&](int threads) {
        set_thread_count(threads);
        std::vector<double> out(64);
        const RngStream base(77, 0);
        parallel_for(out.size(), [&](std::size_t r) {
            RngStream s = base.split(r);
            out[r] = sample_bm(g, 0.0, 1.0, s).at(1.0);
        });
        return out;
    };
    const auto a = run(1), b = run(4);
    set_thread_count(0);
    EXPECT_EQ(a, b);
}
