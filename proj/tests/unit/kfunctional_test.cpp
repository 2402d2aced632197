/*
   Copyright 2026 The interspace Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "interspace/haar.hpp"
#include "interspace/kfunctional.hpp"
#include "interspace/paths.hpp"
#include "interspace/rng.hpp"

namespace interspace {
namespace {

DyadicPath random_path(int level, std::uint64_t seed)
{
    const std::size_t n = std::size_t{1} << level;
    const GaussianStream g({seed, 0, StreamPurpose::Auxiliary, 3});
    std::vector<double> v(n);
    g.fill(1, v);
    return synthesize(CoeffSeq(std::move(v)), level);
}

// Gauss-Seidel on the box-constrained quadratic; each update is the exact
// coordinate minimizer, so sweeps converge to the unique optimum.
std::vector<double> coordinate_descent(std::vector<double> lo, std::vector<double> hi, bool free_end, int sweeps)
{
    const std::size_t n = lo.size();
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i)
        b[i] = 0.5 * (lo[i] + hi[i]);
    for (int it = 0; it < sweeps; ++it) {
        for (std::size_t i = 1; i + 1 < n; ++i)
            b[i] = std::clamp(0.5 * (b[i - 1] + b[i + 1]), lo[i], hi[i]);
        if (free_end)
            b[n - 1] = std::clamp(b[n - 2], lo[n - 1], hi[n - 1]);
    }
    return b;
}

double energy(const std::vector<double>& b)
{
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        e += (b[i + 1] - b[i]) * (b[i + 1] - b[i]);
    return e;
}

double oracle_tube_h1(const DyadicPath& p, double s)
{
    const auto x = p.samples();
    std::vector<double> lo(x.size());
    std::vector<double> hi(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        lo[i] = x[i] - s;
        hi[i] = x[i] + s;
    }
    lo[0] = hi[0] = 0.0;
    const auto b = coordinate_descent(lo, hi, true, 40000);
    return std::sqrt(energy(b) * static_cast<double>(p.intervals()));
}

TEST(TautString, MatchesCoordinateDescent)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto p = random_path(5, seed);
        const auto x = p.samples();
        std::vector<double> lo(x.size());
        std::vector<double> hi(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            lo[i] = x[i] - 0.2;
            hi[i] = x[i] + 0.2;
        }
        lo.front() = hi.front() = 0.0;
        lo.back() = hi.back() = x.back();
        const auto b = taut_string(lo, hi);
        const auto ref = coordinate_descent(lo, hi, false, 40000);
        ASSERT_EQ(b.size(), ref.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            EXPECT_GE(b[i], lo[i] - 1e-12);
            EXPECT_LE(b[i], hi[i] + 1e-12);
        }
        EXPECT_NEAR(energy(b), energy(ref), 1e-9 * (1.0 + energy(ref)));
    }
}

TEST(TautString, StraightLineWhenUnconstrained)
{
    const std::vector<double> lo = {0.0, -10.0, -10.0, -10.0, 3.0};
    const std::vector<double> hi = {0.0, 10.0, 10.0, 10.0, 3.0};
    const auto b = taut_string(lo, hi);
    for (std::size_t i = 0; i < b.size(); ++i)
        EXPECT_NEAR(b[i], 0.75 * static_cast<double>(i), 1e-14);
    EXPECT_THROW(taut_string(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 0.5}), std::invalid_argument);
}

TEST(TubeH1, MatchesFreeEndOracle)
{
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto p = random_path(5, seed);
        const double sup = sup_norm(p);
        for (double frac : {0.0, 0.05, 0.2, 0.5, 0.9}) {
            const double s = frac * sup;
            const double ref = oracle_tube_h1(p, s);
            EXPECT_NEAR(tube_h1(p, s), ref, 1e-7 * (1.0 + ref)) << seed << " " << frac;
        }
        EXPECT_NEAR(tube_h1(p, 0.0), h1_seminorm(p), 1e-12);
        EXPECT_EQ(tube_h1(p, sup), 0.0);
        const auto b = tube_path(p, 0.3 * sup);
        EXPECT_EQ(b[0], 0.0);
        EXPECT_LE(sup_norm(p - b), 0.3 * sup * (1 + 1e-12));
        EXPECT_NEAR(h1_seminorm(b), tube_h1(p, 0.3 * sup), 1e-12);
    }
}

TEST(KFunctional, MatchesBruteForceOverTubeWidth)
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto p = random_path(4, seed);
        const double sup = sup_norm(p);
        for (double t : {0.01, 0.1, 1.0, 10.0}) {
            double brute = std::min(sup, t * h1_seminorm(p));
            for (int i = 0; i <= 400; ++i) {
                const double s = sup * i / 400.0;
                brute = std::min(brute, s + t * oracle_tube_h1(p, s));
            }
            const double k = k_functional(p, t);
            EXPECT_LE(k, brute + 1e-8);
            EXPECT_GE(k, brute - 2e-3 * sup) << seed << " " << t;
        }
    }
}

TEST(KFunctional, Properties)
{
    const auto grid = default_t_grid();
    ASSERT_EQ(grid.size(), 40u);
    EXPECT_DOUBLE_EQ(grid.front(), std::exp2(-20.0));
    EXPECT_DOUBLE_EQ(grid.back(), std::exp2(20.0));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto p = random_path(6, seed);
        const double sup = sup_norm(p);
        const double h1 = h1_seminorm(p);
        std::vector<double> k(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            k[i] = k_functional(p, grid[i]);
            ASSERT_LE(k[i], std::min(sup, grid[i] * h1));
            ASSERT_GE(k[i], 0.0);
            ASSERT_NEAR(k_functional(-2.5 * p, grid[i]), 2.5 * k[i], 1e-7 * (1.0 + k[i]));
        }
        for (std::size_t i = 1; i < grid.size(); ++i) {
            ASSERT_GE(k[i], k[i - 1] - 1e-9);
            ASSERT_LE(k[i] / grid[i], k[i - 1] / grid[i - 1] + 1e-9);
        }
        // Concave in t: an infimum of affine functions.
        for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
            const double w = (grid[i] - grid[i - 1]) / (grid[i + 1] - grid[i - 1]);
            ASSERT_GE(k[i], (1 - w) * k[i - 1] + w * k[i + 1] - 1e-8);
        }
        double theta_ref = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            theta_ref = std::max(theta_ref, std::pow(grid[i], -0.5) * k[i]);
        EXPECT_NEAR(theta_norm(p, 0.5, grid), theta_ref, 1e-8 * theta_ref);
    }
}

TEST(KFunctional, Examples)
{
    EXPECT_EQ(k_functional(DyadicPath::zero(5), 1.0), 0.0);
    const auto line = DyadicPath::identity(6);
    EXPECT_NEAR(k_functional(line, 1e-6), 1e-6, 1e-15);
    EXPECT_NEAR(k_functional(line, 1e6), 1.0, 1e-12);
    // Linear path a t: the best b is (a - s) t for s <= a, so K = min(a, t a).
    for (double t : {0.25, 0.5, 2.0})
        EXPECT_NEAR(k_functional(3.0 * line, t), 3.0 * std::min(1.0, t), 1e-8);
    EXPECT_THROW(k_functional(line, 0.0), std::invalid_argument);
    EXPECT_THROW(k_functional(line, -1.0), std::invalid_argument);
}

TEST(KFunctional, IterationBudget)
{
    KFunctionalOptions opt;
    opt.max_iterations = 2;
    opt.tol = 1e-14;
    EXPECT_THROW(k_functional(random_path(6, 3), 0.1, opt), SolverError);
}

} // namespace
} // namespace interspace
