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

#include "interspace/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "interspace/distributions.hpp"
#include "interspace/parallel.hpp"

namespace interspace {

std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::SchauderBm:
        return "schauder-bm";
    case ModelKind::KlSineBm:
        return "kl-sine-bm";
    case ModelKind::KlBridge:
        return "kl-bridge";
    case ModelKind::Custom:
        return "custom";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& name)
{
    if (name == "schauder-bm")
        return ModelKind::SchauderBm;
    if (name == "kl-sine-bm")
        return ModelKind::KlSineBm;
    if (name == "kl-bridge")
        return ModelKind::KlBridge;
    if (name == "custom")
        return ModelKind::Custom;
    throw std::invalid_argument("unknown model kind '" + name + "'");
}

namespace {

void check_terms(std::optional<std::uint64_t> terms)
{
    if (terms && *terms == 0)
        throw std::invalid_argument("a model needs at least one term");
}

void check_level(int level)
{
    if (level < 0 || level > 30)
        throw std::invalid_argument("grid level out of range");
}

} // namespace

BasisModel BasisModel::schauder_bm(std::optional<std::uint64_t> terms)
{
    check_terms(terms);
    return BasisModel(ModelKind::SchauderBm, terms);
}

BasisModel BasisModel::kl_sine_bm(std::optional<std::uint64_t> terms)
{
    check_terms(terms);
    return BasisModel(ModelKind::KlSineBm, terms);
}

BasisModel BasisModel::kl_bridge(std::optional<std::uint64_t> terms)
{
    check_terms(terms);
    return BasisModel(ModelKind::KlBridge, terms);
}

BasisModel BasisModel::custom(int level, std::vector<std::vector<double>> basis)
{
    check_level(level);
    if (basis.empty())
        throw std::invalid_argument("custom basis is empty");
    const std::size_t size = (std::size_t{1} << level) + 1;
    for (const auto& row : basis) {
        if (row.size() != size)
            throw std::invalid_argument("custom basis path has wrong length for its level");
        if (row.front() != 0.0)
            throw std::invalid_argument("custom basis paths must start at 0");
    }
    BasisModel model(ModelKind::Custom, basis.size());
    model.custom_level_ = level;
    model.custom_basis_ = std::make_shared<const std::vector<std::vector<double>>>(std::move(basis));
    return model;
}

BasisModel BasisModel::custom_from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", std::string{}) != "interspace-basis")
        throw std::invalid_argument("custom basis file: missing format tag 'interspace-basis'");
    if (j.value("version", 0) != 1)
        throw std::invalid_argument("custom basis file: unsupported version");
    return custom(j.at("level").get<int>(), j.at("basis").get<std::vector<std::vector<double>>>());
}

BasisModel BasisModel::load_custom(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open custom basis file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return custom_from_json(ss.str());
}

std::uint64_t BasisModel::capacity(int level) const
{
    check_level(level);
    const std::uint64_t grid = std::uint64_t{1} << level;
    switch (kind_) {
    case ModelKind::SchauderBm:
    case ModelKind::KlSineBm:
        return grid;
    case ModelKind::KlBridge:
        return grid - 1;
    case ModelKind::Custom:
        if (level > custom_level_)
            throw std::invalid_argument("custom basis is only defined up to level "
                                        + std::to_string(custom_level_));
        return custom_basis_->size();
    }
    return 0;
}

std::uint64_t BasisModel::effective_terms(int level) const
{
    const auto cap = capacity(level);
    return terms_ ? std::min(*terms_, cap) : cap;
}

double BasisModel::kl_value(std::uint64_t n, int level, std::size_t i) const
{
    const double freq = kind_ == ModelKind::KlSineBm ? (static_cast<double>(n) - 0.5) * std::numbers::pi
                                                     : static_cast<double>(n) * std::numbers::pi;
    const double h = std::ldexp(1.0, -level);
    const double half = 0.5 * freq * h;
    const double norm = half / std::sin(half);
    const double t = static_cast<double>(i) * h;
    return norm * std::numbers::sqrt2 * std::sin(freq * t) / freq;
}

DyadicPath BasisModel::basis_path(std::uint64_t n, int level) const
{
    check_level(level);
    if (n < 1)
        throw std::invalid_argument("basis index must be >= 1");
    if (terms_ && n > *terms_)
        throw std::invalid_argument("basis index beyond the model's terms");
    std::vector<double> samples((std::size_t{1} << level) + 1, 0.0);
    switch (kind_) {
    case ModelKind::SchauderBm: {
        const double one = 1.0;
        accumulate_schauder(n, std::span<const double>(&one, 1), level, samples);
        break;
    }
    case ModelKind::KlSineBm:
    case ModelKind::KlBridge:
        if (n > capacity(level))
            throw std::invalid_argument("KL index " + std::to_string(n) + " not resolved at level "
                                        + std::to_string(level));
        for (std::size_t i = 1; i < samples.size(); ++i)
            samples[i] = kl_value(n, level, i);
        break;
    case ModelKind::Custom: {
        if (level > custom_level_)
            throw std::invalid_argument("custom basis is coarser than the requested grid");
        const auto& row = (*custom_basis_)[n - 1];
        const std::size_t stride = std::size_t{1} << (custom_level_ - level);
        for (std::size_t i = 0; i < samples.size(); ++i)
            samples[i] = row[i * stride];
        break;
    }
    }
    samples[0] = 0.0;
    return DyadicPath::from_samples(std::move(samples));
}

Synthesizer BasisModel::synthesizer(int level, std::uint64_t max_index) const
{
    check_level(level);
    if (kind_ == ModelKind::SchauderBm) {
        if (max_index > 0 && schauder_min_level(max_index) > level)
            throw std::invalid_argument("grid level " + std::to_string(level) + " too shallow for index "
                                        + std::to_string(max_index));
        return Synthesizer(kind_, level, max_index, {});
    }
    if (max_index > effective_terms(level))
        throw std::invalid_argument("index " + std::to_string(max_index) + " exceeds the model's "
                                    + std::to_string(effective_terms(level)) + " terms at level "
                                    + std::to_string(level));
    const std::size_t size = (std::size_t{1} << level) + 1;
    std::vector<double> table(static_cast<std::size_t>(max_index) * size, 0.0);
    for (std::uint64_t n = 1; n <= max_index; ++n) {
        const auto p = basis_path(n, level);
        std::copy(p.samples().begin(), p.samples().end(), table.begin() + static_cast<std::ptrdiff_t>((n - 1) * size));
    }
    return Synthesizer(kind_, level, max_index, std::move(table));
}

std::optional<double> BasisModel::tail_second_moment(std::uint64_t n) const
{
    if (terms_ && n >= *terms_)
        return 0.0;
    if (kind_ != ModelKind::SchauderBm || terms_)
        return std::nullopt;
    if (n == 0)
        return dist::expected_bm_sup_square();
    if (n == 1) {
        const dist::BridgeGroup whole{1.0, 1};
        return dist::expected_max_bridge_sup_square(std::span(&whole, 1));
    }
    // n = 2^m + i: the first n tents pin X at the level-m nodes plus the
    // midpoints of the first i level-m intervals.
    const auto [m, i] = dyadic_index(n);
    const std::uint64_t coarse = std::uint64_t{1} << m;
    const dist::BridgeGroup groups[2] = {{std::ldexp(1.0, -m - 1), 2 * i}, {std::ldexp(1.0, -m), coarse - i}};
    return dist::expected_max_bridge_sup_square(groups);
}

double BasisModel::remainder_bound(std::uint64_t j_max, int level) const
{
    if (kind_ == ModelKind::SchauderBm && !terms_)
        return *tail_second_moment(j_max);
    const std::uint64_t total = effective_terms(level);
    if (j_max >= total)
        return 0.0;
    // Gaussian vector on the grid with pointwise variance <= sigma2:
    // E max_i Y_i^2 <= 2 sigma2 (ln N + 1).
    const std::size_t size = (std::size_t{1} << level) + 1;
    std::vector<double> variance(size, 0.0);
    for (std::uint64_t n = j_max + 1; n <= total; ++n) {
        const auto p = basis_path(n, level);
        for (std::size_t i = 0; i < size; ++i)
            variance[i] += p[i] * p[i];
    }
    const double sigma2 = *std::max_element(variance.begin(), variance.end());
    return 2.0 * sigma2 * (std::log(static_cast<double>(size)) + 1.0);
}

void Synthesizer::accumulate(std::uint64_t first, std::span<const double> coeffs, std::span<double> samples) const
{
    if (coeffs.empty())
        return;
    const std::size_t size = (std::size_t{1} << level_) + 1;
    if (samples.size() != size)
        throw std::invalid_argument("sample buffer does not match grid level");
    const std::uint64_t last = first + coeffs.size() - 1;
    if (first < 1 || last > max_index_)
        throw std::invalid_argument("coefficient range outside the synthesizer's index range");
    if (kind_ == ModelKind::SchauderBm) {
        accumulate_schauder(first, coeffs, level_, samples);
        return;
    }
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double c = coeffs[k];
        if (c == 0.0)
            continue;
        const double* row = table_.data() + (first - 1 + k) * size;
        for (std::size_t i = 0; i < size; ++i)
            samples[i] += c * row[i];
    }
}

void Synthesizer::add_term(std::uint64_t n, double c, std::span<double> samples) const
{
    if (kind_ != ModelKind::SchauderBm) {
        accumulate(n, std::span<const double>(&c, 1), samples);
        return;
    }
    if (n < 1 || n > max_index_)
        throw std::invalid_argument("basis index outside the synthesizer's index range");
    // A single tent touches only its support.
    const auto [k, j] = dyadic_index(n);
    const std::size_t grid = std::size_t{1} << level_;
    if (k < 0) {
        for (std::size_t i = 0; i <= grid; ++i)
            samples[i] += c * static_cast<double>(i) / static_cast<double>(grid);
        return;
    }
    const std::size_t width = grid >> k;
    const std::size_t left = (j - 1) * width;
    const std::size_t half = width / 2;
    const double slope = c * std::pow(2.0, 0.5 * k) / static_cast<double>(grid);
    for (std::size_t s = 1; s < width; ++s) {
        const std::size_t d = s <= half ? s : width - s;
        samples[left + s] += slope * static_cast<double>(d);
    }
}

DyadicPath Synthesizer::path(std::uint64_t first, std::span<const double> coeffs) const
{
    std::vector<double> samples((std::size_t{1} << level_) + 1, 0.0);
    accumulate(first, coeffs, samples);
    samples[0] = 0.0;
    return DyadicPath::from_samples(std::move(samples));
}

SampleDraw sample_partial_sum(const BasisModel& model, std::uint64_t truncation, int level,
                              const GaussianStream& gaussians)
{
    if (truncation < 1)
        throw std::invalid_argument("truncation must be >= 1");
    const std::uint64_t used = model.terms() ? std::min(truncation, *model.terms()) : truncation;
    std::vector<double> g(used);
    gaussians.fill(1, g);
    const auto synth = model.synthesizer(level, used);
    auto path = synth.path(1, g);
    return {std::move(path), CoeffSeq(std::move(g))};
}

SampleDraw sample_partial_sum(const BasisModel& model, std::uint64_t truncation, int level, std::uint64_t seed)
{
    return sample_partial_sum(model, truncation, level,
                              GaussianStream({seed, 0, StreamPurpose::Coefficients, 0}));
}

double fold_remainder(double window_bound, double remainder) noexcept
{
    if (remainder <= 0.0)
        return window_bound;
    const double a = std::sqrt(std::max(window_bound, 0.0)) + std::sqrt(remainder);
    return a * a;
}

TailEstimate tail_variance(const BasisModel& model, std::uint64_t n, const TailParams& params)
{
    const std::uint64_t cap = model.effective_terms(params.level);
    const std::uint64_t j_max = params.j_max.value_or(model.capacity(params.level));
    if (j_max <= n)
        throw std::invalid_argument("tail window is empty: J_max must exceed the cut index");
    if (!(params.confidence > 0.5 && params.confidence < 1.0))
        throw std::invalid_argument("confidence must lie in (0.5, 1)");

    TailEstimate out;
    if (model.terms() && n >= *model.terms())
        return out;
    if (params.use_hint) {
        if (const auto exact = model.tail_second_moment(n)) {
            out.estimate = *exact;
            // Quadrature is accurate to ~1e-12 relative; certify with margin.
            out.upper_conf = *exact * (1.0 + 1e-9);
            out.analytic = true;
            return out;
        }
    }
    if (params.replicates < 2)
        throw std::invalid_argument("tail estimation needs at least two replicates");

    const std::uint64_t window_end = std::min(j_max, cap);
    std::vector<double> sq(params.replicates, 0.0);
    if (window_end > n) {
        const auto synth = model.synthesizer(params.level, window_end);
        const std::size_t size = (std::size_t{1} << params.level) + 1;
        parallel_for(params.replicates, params.workers, [&](std::uint64_t r) {
            const GaussianStream g({params.seed, r, StreamPurpose::TailEstimate, 0});
            std::vector<double> coeffs(window_end - n);
            g.fill(n + 1, coeffs);
            std::vector<double> samples(size, 0.0);
            synth.accumulate(n + 1, coeffs, samples);
            double m = 0.0;
            for (double v : samples)
                m = std::max(m, std::abs(v));
            sq[r] = m * m;
        });
    }
    double mean = 0.0;
    for (double v : sq)
        mean += v;
    mean /= static_cast<double>(sq.size());
    double var = 0.0;
    for (double v : sq)
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(sq.size() - 1);
    out.estimate = mean;
    out.standard_error = std::sqrt(var / static_cast<double>(sq.size()));
    const double z = dist::normal_quantile(params.confidence);
    out.remainder = j_max >= cap ? 0.0 : model.remainder_bound(j_max, params.level);
    out.upper_conf = fold_remainder(mean + z * out.standard_error, out.remainder);
    return out;
}

} // namespace interspace
