// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "kpzh/errors.hpp"
#include "kpzh/paths.hpp"
#include "kpzh/quadrature.hpp"

using namespace kpzh;

namespace {
std::vector<double> on_grid(const Grid& g, auto f) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.node(i));
    return v;
}
}  // namespace

TEST(PrefixLogIntExp, ConstantIntegrand) {
    const Grid g = make_grid(-2, 1, 0x1.0p-6);
    const auto L = prefix_log_int_exp(on_grid(g, [](double) { return 0.0; }), g, 1.0, -2.0);
    EXPECT_NEAR(L[g.origin()], std::log(2.0), 1e-14);
    EXPECT_NEAR(L[g.index_of(1.0)], std::log(3.0), 1e-14);
    EXPECT_EQ(L[0], -std::numeric_limits<double>::infinity());
}

TEST(PrefixLogIntExp, LinearIntegrandExact) {
    // The cell rule integrates exp-of-linear exactly, so only rounding remains.
    const Grid g = make_grid(-20, 1, 0x1.0p-8);
    const auto L = prefix_log_int_exp(on_grid(g, [](double x) { return x; }), g, 1.0, -20.0);
    EXPECT_LT(std::abs(L[g.origin()]), 3e-9);
    EXPECT_NEAR(L[g.origin()], std::log1p(-std::exp(-20.0)), 1e-14);
}

TEST(PrefixLogIntExp, LargeBetaNoOverflow) {
    const double beta = 50.0, L = 20.0;
    const Grid g = make_grid(-L, 5, 0x1.0p-8);
    const auto v = prefix_log_int_exp(on_grid(g, [](double x) { return x; }), g, beta, -L);
    for (double y : {-3.0, 0.0, 2.5, 5.0}) {
        const double got = v[g.index_of(y)];
        ASSERT_TRUE(std::isfinite(got));
        const double want = (std::log(-std::expm1(-beta * (y + L))) - std::log(beta)) / beta + y;
        EXPECT_NEAR(got, want, 1e-10 * std::abs(want));
    }
}

TEST(PrefixLogIntExp, MidGridCut) {
    const Grid g = make_grid(-4, 4, 0.25);
    const auto L = prefix_log_int_exp(on_grid(g, [](double) { return 0.0; }), g, 2.0, -1.0);
    EXPECT_EQ(L[g.index_of(-1.0)], -std::numeric_limits<double>::infinity());
    EXPECT_NEAR(L[g.index_of(1.0)], std::log(2.0) / 2.0, 1e-14);
}

TEST(PrefixLogIntExp, OffGridCutRejected) {
    const Grid g = make_grid(-4, 4, 0.25);
    const std::vector<double> z(g.size(), 0.0);
    EXPECT_THROW(prefix_log_int_exp(z, g, 1.0, -1.1), Error);
}

TEST(PrefixLogIntExp, RebasingKeepsRelativeAccuracy) {
    // Steep integrand: exp(600 x) forces several offset rebasings.
    const Grid g = make_grid(-1, 2, 0x1.0p-10);
    const auto v = prefix_log_int_exp(on_grid(g, [](double x) { return 600.0 * x; }), g, 1.0, -1.0);
    const double y = 2.0;
    const double want = 600.0 * y + std::log(-std::expm1(-600.0 * (y + 1))) - std::log(600.0);
    EXPECT_NEAR(v.back(), want, 1e-12 * want);
}

TEST(LogCellIntegral, MatchesClosedForm) {
    EXPECT_NEAR(log_cell_integral(0.0, 0.0, 0.5), std::log(0.5), 1e-15);
    const double a = 1.0, b = 3.0, h = 0.5;
    EXPECT_NEAR(log_cell_integral(a, b, h), std::log(h * (std::exp(b) - std::exp(a)) / (b - a)), 1e-14);
    EXPECT_NEAR(log_cell_integral(b, a, h), log_cell_integral(a, b, h), 1e-15);
}

TEST(LogAddExp, Basics) {
    EXPECT_NEAR(log_add_exp(0.0, 0.0), std::log(2.0), 1e-15);
    EXPECT_EQ(log_add_exp(-std::numeric_limits<double>::infinity(), 3.0), 3.0);
    EXPECT_NEAR(log_add_exp(1000.0, 1000.0), 1000.0 + std::log(2.0), 1e-12);
}
