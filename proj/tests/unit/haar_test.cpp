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

#include <cmath>
#include <sstream>
#include <vector>

#include "interspace/haar.hpp"
#include "interspace/paths.hpp"
#include "interspace/rng.hpp"

namespace interspace {
namespace {

CoeffSeq random_coeffs(std::size_t n, std::uint64_t seed)
{
    const GaussianStream g({seed, 0, StreamPurpose::Auxiliary, 1});
    std::vector<double> v(n);
    g.fill(1, v);
    return CoeffSeq(std::move(v));
}

// xi_n = int chi_n dp, summed interval by interval (chi_n is constant on each).
double stieltjes_coefficient(const DyadicPath& p, std::uint64_t n)
{
    const double h = 1.0 / static_cast<double>(p.intervals());
    double s = 0.0;
    for (std::size_t i = 0; i < p.intervals(); ++i)
        s += haar_eval(n, (i + 0.5) * h) * (p[i + 1] - p[i]);
    return s;
}

TEST(HaarEval, Examples)
{
    EXPECT_EQ(haar_eval(1, 0.3), 1.0);
    EXPECT_DOUBLE_EQ(haar_eval(3, 0.1), std::sqrt(2.0));
    EXPECT_EQ(haar_eval(3, 0.6), 0.0);
    EXPECT_DOUBLE_EQ(haar_eval(3, 0.3), -std::sqrt(2.0));
    // n = 2: +1 on [0, 1/2), -1 on [1/2, 1].
    EXPECT_EQ(haar_eval(2, 0.0), 1.0);
    EXPECT_EQ(haar_eval(2, 0.5), -1.0);
    EXPECT_EQ(haar_eval(2, 1.0), -1.0);
    EXPECT_THROW(haar_eval(0, 0.5), std::invalid_argument);
    EXPECT_THROW(haar_eval(2, 1.5), std::invalid_argument);
    EXPECT_THROW(haar_eval(2, -0.1), std::invalid_argument);
}

TEST(SchauderEval, Examples)
{
    EXPECT_DOUBLE_EQ(schauder_eval(1, 0.7), 0.7);
    for (int k = 0; k <= 8; ++k)
        for (std::uint64_t j : {std::uint64_t{1}, (std::uint64_t{1} << k)}) {
            const double mid = (2.0 * j - 1.0) / std::exp2(k + 1);
            EXPECT_NEAR(schauder_eval((std::uint64_t{1} << k) + j, mid), std::pow(2.0, -1.0 - k / 2.0), 1e-15);
        }
    EXPECT_EQ(schauder_eval(5, 0.5), 0.0);
    EXPECT_EQ(schauder_eval(5, 0.25), 0.0);
    EXPECT_THROW(schauder_eval(0, 0.5), std::invalid_argument);
}

TEST(SchauderEval, PrimitiveOfHaar)
{
    for (std::uint64_t n : {1ull, 2ull, 3ull, 4ull, 9ull, 22ull}) {
        const int m = 1 << 12;
        double integral = 0.0;
        for (int i = 0; i < m; ++i) {
            integral += haar_eval(n, (i + 0.5) / m) / m;
            ASSERT_NEAR(schauder_eval(n, (i + 1.0) / m), integral, 1e-12) << n << " " << i;
        }
    }
}

TEST(DyadicIndex, Decomposition)
{
    EXPECT_EQ(dyadic_index(1).level, -1);
    EXPECT_EQ(dyadic_index(2).level, 0);
    EXPECT_EQ(dyadic_index(2).j, 1u);
    EXPECT_EQ(dyadic_index(7).level, 2);
    EXPECT_EQ(dyadic_index(7).j, 3u);
    EXPECT_EQ(dyadic_index(8).j, 4u);
    EXPECT_EQ(dyadic_first(3), 9u);
    EXPECT_EQ(dyadic_last(3), 16u);
    EXPECT_EQ(schauder_min_level(1), 0);
    EXPECT_EQ(schauder_min_level(2), 1);
    EXPECT_EQ(schauder_min_level(9), 4);
    const auto big = dyadic_index((std::uint64_t{1} << 60) + 5);
    EXPECT_EQ(big.level, 60);
    EXPECT_EQ(big.j, 5u);
}

TEST(Analyze, Examples)
{
    const auto id = analyze(DyadicPath::identity(5));
    ASSERT_EQ(id.size(), 32u);
    EXPECT_DOUBLE_EQ(id[1], 1.0);
    for (std::uint64_t n = 2; n <= 32; ++n)
        EXPECT_NEAR(id[n], 0.0, 1e-15);

    CoeffSeq e3 = CoeffSeq::zeros(4);
    e3[3] = 1.0;
    const auto a = analyze(synthesize(e3, 4));
    for (std::uint64_t n = 1; n <= 16; ++n)
        EXPECT_NEAR(a[n], n == 3 ? 1.0 : 0.0, 1e-15);

    const auto zero_coeffs = analyze(DyadicPath::zero(4));
    for (double v : zero_coeffs.values())
        EXPECT_EQ(v, 0.0);
}

TEST(Analyze, MatchesStieltjesOracle)
{
    const auto p = synthesize(random_coeffs(64, 5), 7);
    const auto xi = analyze(p);
    for (std::uint64_t n = 1; n <= xi.size(); ++n)
        ASSERT_NEAR(xi[n], stieltjes_coefficient(p, n), 1e-12) << n;
}

TEST(Synthesize, Examples)
{
    const auto id = synthesize(CoeffSeq({1.0}), 3);
    for (std::size_t i = 0; i <= 8; ++i)
        EXPECT_DOUBLE_EQ(id[i], i / 8.0);
    const auto zero_path = synthesize(CoeffSeq::zeros(16), 4);
    for (double v : zero_path.samples())
        EXPECT_EQ(v, 0.0);
    EXPECT_THROW(synthesize(CoeffSeq::zeros(17), 4), std::invalid_argument);
}

TEST(Synthesize, MatchesPointwiseEvaluation)
{
    const auto xi = random_coeffs(32, 2);
    const auto p = synthesize(xi, 6);
    for (std::size_t i = 0; i <= 64; ++i) {
        const double t = i / 64.0;
        double s = 0.0;
        for (std::uint64_t n = 1; n <= 32; ++n)
            s += xi[n] * schauder_eval(n, t);
        ASSERT_NEAR(p[i], s, 1e-13);
    }
}

TEST(Transform, RoundTripsUpToLevel12)
{
    for (int L = 0; L <= 12; ++L) {
        const std::size_t n = std::size_t{1} << L;
        const auto xi = random_coeffs(n, 100 + L);
        const auto back = analyze(synthesize(xi, L));
        double scale = 0.0;
        for (double v : xi.values())
            scale = std::max(scale, std::abs(v));
        for (std::uint64_t m = 1; m <= n; ++m)
            ASSERT_LE(std::abs(back[m] - xi[m]), 1e-12 * scale) << L << " " << m;

        const auto p = synthesize(random_coeffs(n, 200 + L), L);
        const auto q = synthesize(analyze(p), L);
        const double sp = sup_norm(p);
        for (std::size_t i = 0; i <= n; ++i)
            ASSERT_LE(std::abs(q[i] - p[i]), 1e-12 * sp) << L << " " << i;
    }
}

TEST(Transform, ParsevalAtDyadicTimes)
{
    for (int k = 0; k <= 12; ++k) {
        const std::uint64_t N = std::uint64_t{1} << k;
        for (std::uint64_t m = 0; m <= N; m += std::max<std::uint64_t>(1, N / 64)) {
            const double t = static_cast<double>(m) / static_cast<double>(N);
            double s = 0.0;
            for (std::uint64_t n = 1; n <= N; ++n) {
                const double v = schauder_eval(n, t);
                s += v * v;
            }
            ASSERT_NEAR(s, t, 1e-12) << k << " " << t;
        }
    }
}

TEST(Transform, DisjointSupportsWithinLevel)
{
    for (int k = 0; k <= 9; ++k) {
        const std::uint64_t first = dyadic_first(k);
        const std::uint64_t last = dyadic_last(k);
        const auto g = random_coeffs(last, 300 + k);
        CoeffSeq xi = CoeffSeq::zeros(last);
        double m = 0.0;
        for (std::uint64_t n = first; n <= last; ++n) {
            xi[n] = g[n];
            m = std::max(m, std::abs(g[n]));
        }
        EXPECT_EQ(sup_norm(synthesize(xi, k + 1)), std::pow(2.0, -1.0 - k / 2.0) * m);
    }
}

TEST(Transform, H1EqualsL2)
{
    for (int L : {1, 4, 8, 12}) {
        const auto xi = random_coeffs(std::size_t{1} << L, 400 + L);
        double s = 0.0;
        for (double v : xi.values())
            s += v * v;
        EXPECT_NEAR(h1_seminorm(synthesize(xi, L)), std::sqrt(s), 1e-10 * std::sqrt(s));
    }
}

TEST(Accumulate, MatchesFullSynthesis)
{
    const auto xi = random_coeffs(128, 8);
    std::vector<double> samples(257, 0.0);
    accumulate_schauder(1, std::span<const double>(xi.values()).subspan(0, 50), 8, samples);
    accumulate_schauder(51, std::span<const double>(xi.values()).subspan(50), 8, samples);
    const auto p = synthesize(xi, 8);
    for (std::size_t i = 0; i < samples.size(); ++i)
        ASSERT_NEAR(samples[i], p[i], 1e-14);
}

TEST(Ciesielski, WeightExamples)
{
    for (int k = 0; k <= 20; ++k)
        EXPECT_NEAR(ciesielski_weight((std::uint64_t{1} << k) + 1, 0.5), std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(ciesielski_weight(3, 0.5), std::sqrt(2.0), 1e-15);
    for (double a : {0.1, 0.3, 0.9})
        EXPECT_EQ(ciesielski_weight(1025, a), ciesielski_weight(1031, a));
    EXPECT_EQ(ciesielski_weight(1, 0.3), 1.0);
    EXPECT_NEAR(ciesielski_weight(9, 0.3), std::exp2(3 * (0.3 - 0.5) + 0.7), 1e-15);
    EXPECT_THROW(ciesielski_weight(3, 0.0), std::invalid_argument);
    EXPECT_THROW(ciesielski_weight(3, 1.0), std::invalid_argument);
}

TEST(Ciesielski, SequenceNormExamples)
{
    EXPECT_EQ(ciesielski_seq_norm(CoeffSeq::zeros(16), 0.3).value, 0.0);
    for (int k : {0, 2, 5}) {
        CoeffSeq xi = CoeffSeq::zeros(std::size_t{1} << (k + 1));
        xi[(std::uint64_t{1} << k) + 1] = 1.0;
        EXPECT_NEAR(ciesielski_seq_norm(xi, 0.3).value, std::exp2(k * (0.3 - 0.5) + 0.7), 1e-15);
    }
    const auto xi = random_coeffs(64, 4);
    const auto a = ciesielski_seq_norm(xi, 0.4);
    EXPECT_NEAR(ciesielski_seq_norm(-3.0 * xi, 0.4).value, 3.0 * a.value, 1e-14);
    ASSERT_EQ(a.per_level.size(), 6u);
    double m = a.linear_term;
    for (double v : a.per_level)
        m = std::max(m, v);
    EXPECT_EQ(m, a.value);
}

TEST(CoeffIo, RoundTrip)
{
    const auto xi = random_coeffs(33, 6);
    std::stringstream ss;
    write_coeffs_csv(ss, xi);
    EXPECT_EQ(read_coeffs_csv(ss), xi);
    EXPECT_EQ(coeffs_from_json(coeffs_to_json(xi)), xi);
    EXPECT_EQ(xi.support_end(), 33u);
    EXPECT_EQ(CoeffSeq::zeros(5).support_end(), 0u);
}

} // namespace
} // namespace interspace
