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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "interspace/blocks.hpp"
#include "interspace/haar.hpp"
#include "interspace/kfunctional.hpp"
#include "interspace/models.hpp"
#include "interspace/report.hpp"

namespace interspace {

/// Shared Monte Carlo settings. Results depend on (seed, replicate index)
/// only; `workers` changes wall time, never output.
struct RunParams {
    std::uint64_t replicates = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    int level = 10;
    bool pinned_zero = false; // test hook: every g_n = 0
};

/// Functional of a sampled path. RunningMax is the one-sided sup of X.
enum class NormSpec { Sup, SumBlock, SupBlock, RunningMax };
std::string to_string(NormSpec n);
NormSpec norm_spec_from_string(const std::string& name);

/// Block variables W_k for k >= 1 against 2^-k, sum-variant schedule.
ExperimentReport verify_key_inequality(const BasisModel& model, const BlockSchedule& schedule, const RunParams& run);

struct ZnParams {
    RunParams run;
    std::vector<double> quantiles{0.5, 0.25, 0.1, 0.05, 0.01};
    /// Relative bracket width for the Z values used to place the eps grid.
    double bracket_tol = 0.5;
    /// eps values for the per-block Markov / Borel-Cantelli check (sup variant).
    std::vector<double> bc_eps{0.5, 0.25};
};
ExperimentReport zn_convergence(const BasisModel& model, const BlockSchedule& schedule, const ZnParams& params);

struct FerniqueParams {
    RunParams run;
    NormSpec norm = NormSpec::Sup;
    std::vector<double> rho_grid{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
    double stability = 0.02;
    std::optional<BlockSchedule> schedule; // required for block norms
};
ExperimentReport estimate_fernique(const BasisModel& model, const FerniqueParams& params);

struct FerniqueSummary {
    std::vector<double> c_full;
    std::vector<double> c_half;
    std::vector<double> max_share;
    std::vector<bool> stable;
    std::optional<std::size_t> best; // index of the largest stable rho
};
/// Stability analysis of exp(rho N^2) averages over fixed functional values.
FerniqueSummary fernique_from_values(const std::vector<double>& values, const std::vector<double>& rho_grid,
                                     double stability, bool one_dimensional);

struct TightnessParams {
    RunParams run;
    NormSpec norm = NormSpec::Sup;
    double radius = 1.0;
    /// Empty selects eps = r / x for x = 3.0, 3.1, ..., 4.2.
    std::vector<double> eps_grid;
    std::uint64_t min_hits = 30;
    double slope_tol = 0.1;
    std::vector<double> rho_grid{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
    std::optional<BlockSchedule> schedule;
};
ExperimentReport tightness_experiment(const BasisModel& model, const TightnessParams& params);

/// Symmetric convex body in R^d.
struct Body {
    enum class Kind { Box, Ellipsoid, Polytope, Whole };
    Kind kind = Kind::Whole;
    std::vector<double> half_sides; // box half-sides or ellipsoid semi-axes
    std::vector<std::vector<double>> normals; // polytope: a_i . x <= b_i
    std::vector<double> offsets;
    bool contains(const std::vector<double>& x) const;
    /// Throws std::invalid_argument unless the body is centrally symmetric.
    void validate(int dim) const;
};
std::string to_string(Body::Kind k);
Body::Kind body_kind_from_string(const std::string& name);

struct ConcentrationParams {
    RunParams run;
    int dim = 2;
    /// Spanning vectors of F (orthonormalized internally); empty means F = R^d.
    std::vector<std::vector<double>> subspace;
    Body body;
};
ExperimentReport concentration_check(const ConcentrationParams& params);

struct BlockVarianceParams {
    RunParams run;
    int k_min = 3;
    int k_max = 8;
    double lambda = 0.9;
    int envelope_from = 4;
};
ExperimentReport block_variance_profile(const BlockVarianceParams& params);

/// Smallest k after which 2^(-2-k) E[max of 2^k chi^2_1] <= 2^(-lambda k)
/// holds for every k up to k_limit (quadrature); nullopt if none.
std::optional<int> envelope_onset(double lambda, int k_limit = 60);

/// Path-computed versus closed-form sup-block norm on the dyadic schedule.
double closed_form_dyadic_block(const CoeffSeq& xi, std::size_t k, double alpha);
ExperimentReport ciesielski_equivalence_check(const CoeffSeq& xi, double alpha, int level);

struct CiesielskiBatchParams {
    std::uint64_t count = 1000;
    int max_block = 6;
    std::vector<double> alphas{0.2, 0.3, 0.4};
    std::uint64_t seed = 1;
    double tol = 1e-10;
};
ExperimentReport ciesielski_random_check(const CiesielskiBatchParams& params);

struct KFunctionalExperimentParams {
    RunParams run;
    std::vector<double> thetas{0.25, 0.5, 0.75};
    std::vector<double> t_grid; // empty selects default_t_grid()
    double tol = 1e-6;
    int histogram_bins = 12;
};
ExperimentReport kfunctional_experiment(const BasisModel& model, const KFunctionalExperimentParams& params);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace interspace
