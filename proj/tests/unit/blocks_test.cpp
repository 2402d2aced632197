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
#include <vector>

#include "interspace/blocks.hpp"
#include "interspace/haar.hpp"
#include "interspace/models.hpp"

namespace interspace {
namespace {

TEST(Thresholds, Formulas)
{
    for (std::size_t k = 1; k <= 6; ++k) {
        EXPECT_DOUBLE_EQ(schedule_threshold(Variant::Sum, 0.5, 0.1, k), std::exp2(-4.0 * k));
        EXPECT_DOUBLE_EQ(schedule_threshold(Variant::Sum, 0.3, 0.1, k), std::exp2(-3.6 * static_cast<double>(k)));
        EXPECT_DOUBLE_EQ(schedule_threshold(Variant::Sup, 0.3, 0.1, k), std::exp2(-2.0 * k * 0.4));
    }
    EXPECT_EQ(variant_from_string("sum"), Variant::Sum);
    EXPECT_EQ(variant_from_string("sup"), Variant::Sup);
    EXPECT_THROW(variant_from_string("max"), std::invalid_argument);
}

TEST(Schedule, FromCutsValidates)
{
    EXPECT_NO_THROW(BlockSchedule::from_cuts(0.3, Variant::Sum, 0.1, {0, 2, 5}));
    EXPECT_THROW(BlockSchedule::from_cuts(0.3, Variant::Sum, 0.1, {1, 2, 5}), std::invalid_argument);
    EXPECT_THROW(BlockSchedule::from_cuts(0.3, Variant::Sum, 0.1, {0, 3, 3}), std::invalid_argument);
    EXPECT_THROW(BlockSchedule::from_cuts(0.3, Variant::Sum, 0.1, {0}), std::invalid_argument);
    EXPECT_THROW(BlockSchedule::from_cuts(1.5, Variant::Sum, 0.1, {0, 1}), std::invalid_argument);
    EXPECT_THROW(BlockSchedule::from_cuts(0.3, Variant::Sup, 0.0, {0, 1}), std::invalid_argument);
    const auto d = BlockSchedule::dyadic(0.3, 4);
    EXPECT_EQ(d.cuts, (std::vector<std::uint64_t>{0, 2, 4, 8, 16}));
    EXPECT_EQ(d.block_first(0), 1u);
    EXPECT_EQ(d.block_last(0), 2u);
    EXPECT_EQ(d.block_first(3), 9u);
    EXPECT_DOUBLE_EQ(d.weight(3), std::exp2(0.9));
}

TEST(Schedule, JsonRoundTrip)
{
    TailParams tail;
    tail.level = 8;
    const auto s = build_schedule(BasisModel::schauder_bm(), 0.3, Variant::Sup, 0.1, 4, tail);
    const auto back = schedule_from_json(schedule_to_json(s));
    EXPECT_EQ(back.cuts, s.cuts);
    EXPECT_EQ(back.alpha, s.alpha);
    EXPECT_EQ(back.variant, s.variant);
    EXPECT_EQ(back.eta, s.eta);
    EXPECT_EQ(back.method, s.method);
    ASSERT_EQ(back.certified.size(), s.certified.size());
    for (std::size_t i = 0; i < s.certified.size(); ++i) {
        EXPECT_EQ(back.certified[i], s.certified[i]);
        EXPECT_EQ(std::isnan(back.certified_below[i]), std::isnan(s.certified_below[i]));
    }
    EXPECT_EQ(schedule_to_json(back), schedule_to_json(s));
    EXPECT_THROW(schedule_from_json(R"({"format": "interspace-schedule", "version": 99})"), std::invalid_argument);
}

TEST(BuildSchedule, ExhaustedModelStopsAtCapacity)
{
    TailParams tail;
    tail.level = 6;
    tail.use_hint = false;
    tail.replicates = 50;
    const auto s = build_schedule(BasisModel::schauder_bm(1), 0.3, Variant::Sum, 0.1, 1, tail);
    EXPECT_EQ(s.cuts, (std::vector<std::uint64_t>{0, 1}));
    EXPECT_THROW(build_schedule(BasisModel::schauder_bm(1), 0.3, Variant::Sum, 0.1, 2, tail), ScheduleError);
    const auto kl = build_schedule(BasisModel::kl_sine_bm(), 0.3, Variant::Sum, 0.1, 4, tail);
    EXPECT_EQ(kl.cuts.back(), 64u);
}

TEST(BuildSchedule, AnalyticCutsAreGreedyAndCertified)
{
    TailParams tail;
    for (Variant v : {Variant::Sum, Variant::Sup}) {
        const auto s = build_schedule(BasisModel::schauder_bm(), 0.3, v, 0.1, 7, tail);
        EXPECT_EQ(s.method, "analytic");
        const auto m = BasisModel::schauder_bm();
        for (std::size_t k = 1; k <= 7; ++k) {
            const double thr = s.threshold(k);
            EXPECT_LE(s.certified[k - 1], thr);
            EXPECT_LE(*m.tail_second_moment(s.cuts[k]), thr);
            if (s.cuts[k] - 1 > s.cuts[k - 1]) {
                EXPECT_GT(s.certified_below[k - 1], thr);
                EXPECT_GT(*m.tail_second_moment(s.cuts[k] - 1) * (1 + 1e-9), thr);
            }
        }
    }
}

TEST(BuildSchedule, SupVariantGrowsGeometrically)
{
    TailParams tail;
    const auto s = build_schedule(BasisModel::schauder_bm(), 0.3, Variant::Sup, 0.1, 8, tail);
    // E sup^2 of the tail beyond n ~ log(n) / n, so n_k grows like 2^(0.8 k).
    for (std::size_t k = 4; k <= 8; ++k) {
        const double ratio = static_cast<double>(s.cuts[k]) / static_cast<double>(s.cuts[k - 1]);
        EXPECT_GT(ratio, 1.2);
        EXPECT_LT(ratio, 2.5);
    }
}

TEST(BuildSchedule, SumVariantReference)
{
    TailParams tail;
    const auto s = build_schedule(BasisModel::schauder_bm(), 0.3, Variant::Sum, 0.1, 7, tail);
    EXPECT_EQ(s.cuts, (std::vector<std::uint64_t>{0, 31, 729, 13637, 210335, 2097049, 33545002, 536557355}));
}

TEST(BuildSchedule, MonteCarloGreedyMinimality)
{
    TailParams tail;
    tail.level = 8;
    tail.use_hint = false;
    tail.replicates = 1000;
    for (const auto& m : {BasisModel::schauder_bm(), BasisModel::kl_sine_bm()}) {
        const auto s = build_schedule(m, 0.3, Variant::Sup, 0.1, 4, tail);
        EXPECT_EQ(s.method, "monte-carlo");
        for (std::size_t k = 1; k <= 4; ++k) {
            EXPECT_LE(s.certified[k - 1], s.threshold(k)) << m.name();
            if (!std::isnan(s.certified_below[k - 1]))
                EXPECT_GT(s.certified_below[k - 1], s.threshold(k)) << m.name();
        }
    }
}

TEST(BuildSchedule, MonteCarloCertificationIsSound)
{
    // Re-estimate the tail at every cut with 100 independent seeds.
    TailParams tail;
    tail.level = 8;
    tail.use_hint = false;
    tail.replicates = 1000;
    const auto m = BasisModel::schauder_bm();
    const auto s = build_schedule(m, 0.3, Variant::Sup, 0.1, 4, tail);
    for (std::size_t k = 1; k <= 4; ++k) {
        int below = 0;
        for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
            TailParams re = tail;
            re.seed = seed;
            below += tail_variance(m, s.cuts[k], re).estimate <= s.threshold(k) ? 1 : 0;
        }
        EXPECT_GE(below, 99) << k;
    }
}

TEST(BuildSchedule, Errors)
{
    TailParams tail;
    tail.level = 6;
    tail.use_hint = false;
    tail.replicates = 100;
    EXPECT_THROW(build_schedule(BasisModel::kl_sine_bm(), 0.3, Variant::Sum, 0.1, 6, tail), ScheduleError);
    EXPECT_THROW(build_schedule(BasisModel::schauder_bm(), 0.0, Variant::Sum, 0.1, 3, tail), std::invalid_argument);
    EXPECT_THROW(build_schedule(BasisModel::schauder_bm(), 0.3, Variant::Sum, 0.1, 0, tail), std::invalid_argument);
    EXPECT_THROW(build_schedule(BasisModel::schauder_bm(), 0.3, Variant::Sup, -1.0, 3, tail), std::invalid_argument);
    TailParams tiny;
    tiny.j_max = 100;
    EXPECT_THROW(build_schedule(BasisModel::schauder_bm(), 0.3, Variant::Sum, 0.1, 4, tiny), ScheduleError);
}

TEST(BlockProject, PartitionAndPythagoras)
{
    const auto s = BlockSchedule::from_cuts(0.3, Variant::Sum, 0.1, {0, 3, 10, 20});
    std::vector<double> v(20);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = std::sin(1.0 + 3.0 * i);
    const CoeffSeq xi(v);
    CoeffSeq total = CoeffSeq::zeros(20);
    double sq = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto q = block_project(xi, s, k);
        ASSERT_EQ(q.size(), xi.size());
        for (std::uint64_t n = 1; n <= 20; ++n) {
            const bool inside = n >= s.block_first(k) && n <= s.block_last(k);
            EXPECT_EQ(q[n], inside ? xi[n] : 0.0);
            sq += q[n] * q[n];
        }
        total = total + q;
    }
    EXPECT_EQ(total, xi);
    double direct = 0.0;
    for (double x : v)
        direct += x * x;
    EXPECT_NEAR(sq, direct, 1e-12);

    CoeffSeq one = CoeffSeq::zeros(20);
    one[5] = 2.0;
    EXPECT_EQ(block_project(one, s, 1), one);
    EXPECT_EQ(block_project(one, s, 0), CoeffSeq::zeros(20));
    EXPECT_THROW(block_project(one, s, 3), std::out_of_range);
}

} // namespace
} // namespace interspace
