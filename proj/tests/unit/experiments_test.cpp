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
#include <string>
#include <vector>

#include "interspace/distributions.hpp"
#include "interspace/experiments.hpp"
#include "interspace/rng.hpp"

namespace interspace {
namespace {

const ReportItem& item(const ExperimentReport& rep, const std::string& prefix)
{
    for (const auto& it : rep.items)
        if (it.name.rfind(prefix, 0) == 0)
            return it;
    throw std::out_of_range("no report item starting with " + prefix);
}

BlockSchedule small_sum_schedule()
{
    return BlockSchedule::from_cuts(0.3, Variant::Sum, 0.1, {0, 2, 4, 8, 16, 32, 64});
}

TEST(KeyInequality, PinnedZeroNeverExceeds)
{
    RunParams run;
    run.replicates = 200;
    run.level = 8;
    run.pinned_zero = true;
    const auto rep = verify_key_inequality(BasisModel::schauder_bm(), small_sum_schedule(), run);
    EXPECT_TRUE(rep.passed());
    for (const auto& it : rep.items)
        if (it.relation == "<=")
            EXPECT_EQ(it.estimate, 0.0) << it.name;
}

TEST(KeyInequality, IdenticalAcrossWorkerCounts)
{
    RunParams run;
    run.replicates = 3000;
    run.level = 8;
    run.seed = 11;
    run.workers = 1;
    const auto a = verify_key_inequality(BasisModel::schauder_bm(), small_sum_schedule(), run).dump();
    run.workers = 4;
    const auto b = verify_key_inequality(BasisModel::schauder_bm(), small_sum_schedule(), run).dump();
    EXPECT_EQ(a, b);
    run.seed = 12;
    EXPECT_NE(a, verify_key_inequality(BasisModel::schauder_bm(), small_sum_schedule(), run).dump());
}

TEST(KeyInequality, Errors)
{
    RunParams run;
    run.replicates = 10;
    const auto sup = BlockSchedule::from_cuts(0.3, Variant::Sup, 0.1, {0, 2, 4, 8});
    EXPECT_THROW(verify_key_inequality(BasisModel::schauder_bm(), sup, run), std::invalid_argument);
    const auto one = BlockSchedule::from_cuts(0.3, Variant::Sum, 0.1, {0, 2});
    EXPECT_THROW(verify_key_inequality(BasisModel::schauder_bm(), one, run), std::invalid_argument);
}

TEST(Zn, MonotoneAndDeterministic)
{
    ZnParams p;
    p.run.replicates = 300;
    p.run.level = 8;
    p.run.workers = 1;
    const auto a = zn_convergence(BasisModel::schauder_bm(), small_sum_schedule(), p);
    EXPECT_EQ(item(a, "monotonicity violations of Z_n").estimate, 0.0);
    EXPECT_EQ(item(a, "fraction of replicates with finite Z_K").estimate, 1.0);
    p.run.workers = 3;
    EXPECT_EQ(a.dump(), zn_convergence(BasisModel::schauder_bm(), small_sum_schedule(), p).dump());
    p.quantiles = {1.5};
    EXPECT_THROW(zn_convergence(BasisModel::schauder_bm(), small_sum_schedule(), p), std::invalid_argument);
}

TEST(Fernique, SummaryOnKnownValues)
{
    const std::vector<double> rho{0.1, 0.3, 0.5};
    const auto flat = fernique_from_values(std::vector<double>(100, 2.0), rho, 0.02, true);
    ASSERT_TRUE(flat.best.has_value());
    EXPECT_EQ(*flat.best, 1u);
    EXPECT_FALSE(flat.stable[2]);
    EXPECT_NEAR(flat.c_full[0], std::exp(0.4), 1e-12);
    EXPECT_NEAR(flat.max_share[0], 0.01, 1e-12);

    // |g| for standard normal g: E exp(rho g^2) = (1 - 2 rho)^(-1/2).
    const int R = 200000;
    std::vector<double> v(R);
    const GaussianStream gs({5, 0, StreamPurpose::Auxiliary, 0});
    gs.fill(1, v);
    const auto s = fernique_from_values(v, {0.1, 0.2}, 0.02, true);
    EXPECT_NEAR(s.c_full[0], 1.0 / std::sqrt(0.8), 0.005);
    EXPECT_NEAR(s.c_full[1], 1.0 / std::sqrt(0.6), 0.02);
    EXPECT_THROW(fernique_from_values({1.0}, rho, 0.02, false), std::invalid_argument);
    EXPECT_THROW(fernique_from_values(v, {-0.1}, 0.02, false), std::invalid_argument);
}

TEST(Concentration, BoxMatchesProductFormula)
{
    ConcentrationParams p;
    p.run.replicates = 40000;
    p.dim = 2;
    p.subspace = {{1.0, 0.0}};
    p.body.kind = Body::Kind::Box;
    p.body.half_sides = {1.0, 1.0};
    const auto rep = concentration_check(p);
    EXPECT_TRUE(rep.passed());
    const double m = std::erf(1.0 / std::sqrt(2.0));
    const auto& nu = item(rep, "nu(B)");
    const auto& nup = item(rep, "nu'(F cap B)");
    EXPECT_NEAR(nu.estimate, m * m, 4.0 * nu.standard_error);
    EXPECT_NEAR(nup.estimate, m, 4.0 * nup.standard_error);
}

TEST(Concentration, FullSubspaceAndValidation)
{
    ConcentrationParams p;
    p.run.replicates = 2000;
    p.dim = 3;
    p.body.kind = Body::Kind::Ellipsoid;
    p.body.half_sides = {1.0, 2.0, 0.5};
    const auto rep = concentration_check(p);
    EXPECT_TRUE(item(rep, "F = R^d").pass);

    Body tilted;
    tilted.kind = Body::Kind::Polytope;
    tilted.normals = {{1.0, 0.0}, {-1.0, 0.0}};
    tilted.offsets = {1.0, 2.0};
    EXPECT_THROW(tilted.validate(2), std::invalid_argument);
    tilted.offsets = {1.0, 1.0};
    EXPECT_NO_THROW(tilted.validate(2));
    EXPECT_TRUE(tilted.contains({0.5, 100.0}));
    EXPECT_FALSE(tilted.contains({1.5, 0.0}));
    EXPECT_THROW(body_kind_from_string("sphere"), std::invalid_argument);
}

TEST(BlockVariance, PinnedZeroAndEnvelope)
{
    BlockVarianceParams p;
    p.run.replicates = 100;
    p.run.pinned_zero = true;
    const auto rep = block_variance_profile(p);
    ASSERT_EQ(rep.tables.front().name, "profile");
    ASSERT_EQ(rep.tables.front().columns[1], "e_w2");
    ASSERT_EQ(rep.tables.front().rows.size(), 6u);
    for (const auto& row : rep.tables.front().rows)
        EXPECT_EQ(row[1], 0.0);
    const auto onset = envelope_onset(0.9);
    ASSERT_TRUE(onset.has_value());
    auto holds = [](int k) { return std::exp2(-2.0 - k) * dist::expected_max_chi2(std::uint64_t{1} << k) <= std::exp2(-0.9 * k); };
    EXPECT_TRUE(holds(*onset));
    EXPECT_FALSE(holds(*onset - 1));
    EXPECT_FALSE(holds(5));
    p.k_min = 0;
    EXPECT_THROW(block_variance_profile(p), std::invalid_argument);
}

TEST(Ciesielski, PureBlockRatio)
{
    for (double alpha : {0.2, 0.3, 0.4}) {
        CoeffSeq xi = CoeffSeq::zeros(16);
        xi[9] = 0.5;
        xi[13] = -2.0;
        const auto rep = ciesielski_equivalence_check(xi, alpha, 6);
        EXPECT_TRUE(rep.passed());
        EXPECT_NEAR(item(rep, "pure block 3").estimate, std::pow(2.0, alpha - 2.0), 1e-10);
    }
    CiesielskiBatchParams p;
    p.count = 50;
    EXPECT_TRUE(ciesielski_random_check(p).passed());
    EXPECT_THROW(ciesielski_equivalence_check(CoeffSeq::zeros(4), 1.0, 4), std::invalid_argument);
}

TEST(KFunctionalExperiment, SmallRunPasses)
{
    KFunctionalExperimentParams p;
    p.run.replicates = 6;
    p.run.level = 5;
    const auto rep = kfunctional_experiment(BasisModel::schauder_bm(), p);
    EXPECT_TRUE(rep.passed());
    p.thetas = {1.0};
    EXPECT_THROW(kfunctional_experiment(BasisModel::schauder_bm(), p), std::invalid_argument);
}

TEST(Helpers, SlopeAndNames)
{
    EXPECT_NEAR(fit_slope({1.0, 2.0, 3.0, 4.0}, {3.0, 5.0, 7.0, 9.0}), 2.0, 1e-14);
    for (auto n : {NormSpec::Sup, NormSpec::SumBlock, NormSpec::SupBlock, NormSpec::RunningMax})
        EXPECT_EQ(norm_spec_from_string(to_string(n)), n);
    EXPECT_THROW(norm_spec_from_string("l2"), std::invalid_argument);
}

} // namespace
} // namespace interspace
