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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "interspace/haar.hpp"
#include "interspace/paths.hpp"
#include "interspace/rng.hpp"

namespace interspace {

enum class ModelKind { SchauderBm, KlSineBm, KlBridge, Custom };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

class Synthesizer;

/// A centered Gaussian measure X = sum_n g_n e_n, with (e_n) orthonormal in
/// the discrete H^1_0 inner product of the grid it is evaluated on.
///
/// Shipped kinds: the Schauder tents (Brownian motion), the Karhunen-Loeve
/// sine basis of Brownian motion and of the Brownian bridge. KL functions
/// are rescaled by (w h/2)/sin(w h/2) on a grid of step h so that they stay
/// exactly orthonormal there; at level L a KL model holds 2^L terms
/// (2^L - 1 for the bridge).
class BasisModel {
public:
    static BasisModel schauder_bm(std::optional<std::uint64_t> terms = std::nullopt);
    static BasisModel kl_sine_bm(std::optional<std::uint64_t> terms = std::nullopt);
    static BasisModel kl_bridge(std::optional<std::uint64_t> terms = std::nullopt);
    static BasisModel custom(int level, std::vector<std::vector<double>> basis);

    /// Custom basis file: {"format": "interspace-basis", "version": 1,
    /// "level": L, "basis": [[2^L + 1 samples], ...]}.
    static BasisModel custom_from_json(const std::string& text);
    static BasisModel load_custom(const std::string& path);

    ModelKind kind() const noexcept { return kind_; }
    std::string name() const { return to_string(kind_); }

    /// Number of series terms; nullopt for an infinite series.
    std::optional<std::uint64_t> terms() const noexcept { return terms_; }

    /// Largest index whose basis function is nonzero on the level grid.
    std::uint64_t capacity(int level) const;

    /// min(terms, capacity(level)).
    std::uint64_t effective_terms(int level) const;

    DyadicPath basis_path(std::uint64_t n, int level) const;

    Synthesizer synthesizer(int level, std::uint64_t max_index) const;

    /// Exact E||sum_{j>n} g_j e_j||^2 in the continuous-time sup norm when a
    /// closed form is available (Schauder: independent Brownian bridges
    /// between the nodes fixed by the first n tents).
    std::optional<double> tail_second_moment(std::uint64_t n) const;

    /// Upper bound on E||sum_{j>j_max} g_j e_j||^2 for the grid sup norm.
    double remainder_bound(std::uint64_t j_max, int level) const;

    /// Level of the custom basis file; 0 for built-in kinds.
    int native_level() const noexcept { return custom_level_; }

private:
    BasisModel(ModelKind kind, std::optional<std::uint64_t> terms) : kind_(kind), terms_(terms) {}

    double kl_value(std::uint64_t n, int level, std::size_t i) const;

    ModelKind kind_;
    std::optional<std::uint64_t> terms_;
    int custom_level_ = 0;
    std::shared_ptr<const std::vector<std::vector<double>>> custom_basis_;

    friend class Synthesizer;
};

/// Evaluates finite expansions of one model on one grid. Dense kinds keep a
/// table of basis paths, Schauder uses midpoint refinement.
class Synthesizer {
public:
    int level() const noexcept { return level_; }
    std::uint64_t max_index() const noexcept { return max_index_; }

    /// samples += sum_i coeffs[i] e_{first + i}
    void accumulate(std::uint64_t first, std::span<const double> coeffs, std::span<double> samples) const;

    /// samples += c e_n
    void add_term(std::uint64_t n, double c, std::span<double> samples) const;

    DyadicPath path(std::uint64_t first, std::span<const double> coeffs) const;

private:
    friend class BasisModel;
    Synthesizer(ModelKind kind, int level, std::uint64_t max_index, std::vector<double> table)
        : kind_(kind), level_(level), max_index_(max_index), table_(std::move(table)) {}

    ModelKind kind_;
    int level_;
    std::uint64_t max_index_;
    std::vector<double> table_; // row n-1 holds e_n; empty for Schauder
};

struct SampleDraw {
    DyadicPath path;
    CoeffSeq gaussians;
};

/// X_N = sum_{j<=N} g_j e_j with g_j = gaussians(j).
SampleDraw sample_partial_sum(const BasisModel& model, std::uint64_t truncation, int level,
                              const GaussianStream& gaussians);
SampleDraw sample_partial_sum(const BasisModel& model, std::uint64_t truncation, int level,
                              std::uint64_t seed);

struct TailParams {
    std::uint64_t replicates = 2000;
    /// Window end; defaults to the model's capacity at `level`.
    std::optional<std::uint64_t> j_max;
    int level = 10;
    std::uint64_t seed = 1;
    /// Prefer the model's closed-form tail when it has one.
    bool use_hint = true;
    double confidence = 0.99;
    unsigned workers = 0;
};

struct TailEstimate {
    double estimate = 0.0;
    double upper_conf = 0.0;
    double standard_error = 0.0;
    /// Bound on the part of the tail beyond the window, folded into upper_conf.
    double remainder = 0.0;
    bool analytic = false;
};

/// E||sum_{n<j<=J_max} g_j e_j||^2 with a one-sided upper confidence bound
/// for the whole tail beyond n.
TailEstimate tail_variance(const BasisModel& model, std::uint64_t n, const TailParams& params);

/// Folds a remainder bound r into a window bound w: E||A+B||^2 <= (sqrt w + sqrt r)^2.
double fold_remainder(double window_bound, double remainder) noexcept;

} // namespace interspace
