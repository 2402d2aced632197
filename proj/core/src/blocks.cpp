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

#include "interspace/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "interspace/distributions.hpp"
#include "interspace/parallel.hpp"

namespace interspace {

std::string to_string(Variant v)
{
    return v == Variant::Sum ? "sum" : "sup";
}

Variant variant_from_string(const std::string& name)
{
    if (name == "sum")
        return Variant::Sum;
    if (name == "sup")
        return Variant::Sup;
    throw std::invalid_argument("unknown schedule variant '" + name + "' (expected sum or sup)");
}

double schedule_threshold(Variant variant, double alpha, double eta, std::size_t k)
{
    const double kk = static_cast<double>(k);
    if (variant == Variant::Sum)
        return std::pow(2.0, -kk * (3.0 + 2.0 * alpha));
    return std::pow(2.0, -2.0 * kk * (alpha + eta));
}

double BlockSchedule::weight(std::size_t k) const
{
    return std::pow(2.0, static_cast<double>(k) * alpha);
}

namespace {

void validate_parameters(double alpha, Variant variant, double eta)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
    if (variant == Variant::Sup && !(eta > 0.0))
        throw std::invalid_argument("eta must be positive for the sup variant");
}

} // namespace

BlockSchedule BlockSchedule::from_cuts(double alpha, Variant variant, double eta, std::vector<std::uint64_t> cuts)
{
    validate_parameters(alpha, variant, eta);
    if (cuts.size() < 2 || cuts.front() != 0)
        throw std::invalid_argument("a schedule needs n_0 = 0 and at least one block");
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (cuts[i] <= cuts[i - 1])
            throw std::invalid_argument("schedule cuts must be strictly increasing");
    BlockSchedule s;
    s.alpha = alpha;
    s.variant = variant;
    s.eta = eta;
    s.cuts = std::move(cuts);
    return s;
}

BlockSchedule BlockSchedule::dyadic(double alpha, std::size_t blocks, Variant variant, double eta)
{
    if (blocks < 1 || blocks > 60)
        throw std::invalid_argument("dyadic schedule needs 1..60 blocks");
    std::vector<std::uint64_t> cuts{0};
    for (std::size_t k = 1; k <= blocks; ++k)
        cuts.push_back(std::uint64_t{1} << k);
    auto s = from_cuts(alpha, variant, eta, std::move(cuts));
    s.method = "dyadic";
    return s;
}

std::string schedule_to_json(const BlockSchedule& s)
{
    auto nullable = [](const std::vector<double>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (double x : v)
            arr.push_back(std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x));
        return arr;
    };
    nlohmann::json thresholds = nlohmann::json::array();
    for (std::size_t k = 1; k <= s.block_count(); ++k)
        thresholds.push_back(s.threshold(k));
    nlohmann::json j{
        {"format", "interspace-schedule"},
        {"version", 1},
        {"alpha", s.alpha},
        {"variant", to_string(s.variant)},
        {"eta", s.eta},
        {"cuts", s.cuts},
        {"thresholds", thresholds},
        {"certified", nullable(s.certified)},
        {"certified_below", nullable(s.certified_below)},
        {"method", s.method},
        {"seed", s.seed},
    };
    return j.dump(2);
}

BlockSchedule schedule_from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", std::string{}) != "interspace-schedule" || j.value("version", 0) != 1)
        throw std::invalid_argument("not an interspace schedule (format/version mismatch)");
    auto s = BlockSchedule::from_cuts(j.at("alpha").get<double>(), variant_from_string(j.at("variant")),
                                      j.at("eta").get<double>(), j.at("cuts").get<std::vector<std::uint64_t>>());
    auto read = [](const nlohmann::json& arr) {
        std::vector<double> v;
        for (const auto& x : arr)
            v.push_back(x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>());
        return v;
    };
    s.certified = read(j.value("certified", nlohmann::json::array()));
    s.certified_below = read(j.value("certified_below", nlohmann::json::array()));
    s.method = j.value("method", std::string("fixed"));
    s.seed = j.value("seed", std::uint64_t{0});
    return s;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Replicate window paths sum_{n<j<=W} g_j e_j, advanced one index at a time.
class TailScan {
public:
    TailScan(const BasisModel& model, const TailParams& params)
        : params_(params),
          window_end_(std::min(params.j_max.value_or(model.capacity(params.level)), model.effective_terms(params.level))),
          synth_(model.synthesizer(params.level, window_end_)),
          size_((std::size_t{1} << params.level) + 1),
          paths_(params.replicates * size_, 0.0),
          sq_(params.replicates, 0.0)
    {
        const std::uint64_t j_max = params.j_max.value_or(model.capacity(params.level));
        remainder_ = j_max >= model.effective_terms(params.level) ? 0.0 : model.remainder_bound(j_max, params.level);
        z_ = dist::normal_quantile(params.confidence);
        parallel_for(params.replicates, params.workers, [&](std::uint64_t r) {
            std::vector<double> g(window_end_);
            stream(r).fill(1, g);
            synth_.accumulate(1, g, row(r));
        });
    }

    std::uint64_t position() const noexcept { return n_; }

    void advance()
    {
        ++n_;
        if (n_ > window_end_)
            return;
        parallel_for(params_.replicates, params_.workers,
                     [&](std::uint64_t r) { synth_.add_term(n_, -stream(r)(n_), row(r)); });
    }

    double upper_bound()
    {
        if (n_ >= window_end_)
            return remainder_;
        parallel_for(params_.replicates, params_.workers, [&](std::uint64_t r) {
            double m = 0.0;
            for (double v : row(r))
                m = std::max(m, std::abs(v));
            sq_[r] = m * m;
        });
        double mean = 0.0;
        for (double v : sq_)
            mean += v;
        mean /= static_cast<double>(sq_.size());
        double var = 0.0;
        for (double v : sq_)
            var += (v - mean) * (v - mean);
        var /= static_cast<double>(sq_.size() - 1);
        return fold_remainder(mean + z_ * std::sqrt(var / static_cast<double>(sq_.size())), remainder_);
    }

private:
    GaussianStream stream(std::uint64_t r) const
    {
        return GaussianStream({params_.seed, r, StreamPurpose::TailEstimate, 0});
    }
    std::span<double> row(std::uint64_t r) { return std::span<double>(paths_).subspan(r * size_, size_); }

    TailParams params_;
    std::uint64_t window_end_;
    Synthesizer synth_;
    std::size_t size_;
    std::vector<double> paths_;
    std::vector<double> sq_;
    std::uint64_t n_ = 0;
    double remainder_ = 0.0;
    double z_ = 0.0;
};

BlockSchedule build_analytic(const BasisModel& model, BlockSchedule s, std::size_t blocks, const TailParams& tail)
{
    const std::uint64_t limit = tail.j_max.value_or(std::uint64_t{1} << 48);
    auto bound = [&](std::uint64_t n) { return *model.tail_second_moment(n) * (1.0 + 1e-9); };
    for (std::size_t k = 1; k <= blocks; ++k) {
        const double thr = s.threshold(k);
        const std::uint64_t prev = s.cuts.back();
        std::uint64_t lo = prev + 1;
        if (lo >= limit)
            throw ScheduleError("J_max exhausted before block " + std::to_string(k));
        std::uint64_t hit;
        if (bound(lo) <= thr) {
            hit = lo;
        } else {
            // Gallop to a passing index, then bisect; the exact tail is monotone.
            std::uint64_t fail = lo;
            std::uint64_t step = 1;
            std::uint64_t probe = lo + step;
            while (true) {
                if (probe >= limit)
                    throw ScheduleError("threshold 2^" + std::to_string(std::log2(thr)) + " for block "
                                        + std::to_string(k) + " unreachable below J_max = " + std::to_string(limit));
                if (bound(probe) <= thr)
                    break;
                fail = probe;
                step *= 2;
                probe = lo + step;
            }
            std::uint64_t pass = probe;
            while (pass - fail > 1) {
                const std::uint64_t mid = fail + (pass - fail) / 2;
                (bound(mid) <= thr ? pass : fail) = mid;
            }
            hit = pass;
        }
        s.cuts.push_back(hit);
        s.certified.push_back(bound(hit));
        s.certified_below.push_back(hit - 1 > prev ? bound(hit - 1) : kNaN);
    }
    s.method = "analytic";
    return s;
}

BlockSchedule build_monte_carlo(const BasisModel& model, BlockSchedule s, std::size_t blocks, const TailParams& tail)
{
    const std::uint64_t j_max = tail.j_max.value_or(model.capacity(tail.level));
    const std::uint64_t cap = model.effective_terms(tail.level);
    TailScan scan(model, tail);
    double running_min = scan.upper_bound(); // n = 0
    double below = kNaN;
    for (std::size_t k = 1; k <= blocks; ++k) {
        const double thr = s.threshold(k);
        const std::uint64_t prev = s.cuts.back();
        below = kNaN;
        if (prev >= cap)
            throw ScheduleError("all " + std::to_string(cap) + " terms at level " + std::to_string(tail.level)
                                + " used before block " + std::to_string(k) + "; deepen the truncation or reduce K");
        while (true) {
            const double before = scan.position() > prev ? running_min : kNaN;
            scan.advance();
            const std::uint64_t n = scan.position();
            if (n >= j_max && n < cap)
                throw ScheduleError("J_max = " + std::to_string(j_max) + " exhausted before block " + std::to_string(k)
                                    + "; deepen the truncation or reduce K");
            running_min = std::min(running_min, scan.upper_bound());
            if (running_min <= thr) {
                below = before;
                break;
            }
        }
        s.cuts.push_back(scan.position());
        s.certified.push_back(running_min);
        s.certified_below.push_back(below);
    }
    s.method = "monte-carlo";
    return s;
}

} // namespace

BlockSchedule build_schedule(const BasisModel& model, double alpha, Variant variant, double eta, std::size_t blocks,
                             const TailParams& tail)
{
    validate_parameters(alpha, variant, eta);
    if (blocks < 1)
        throw std::invalid_argument("a schedule needs at least one block");
    BlockSchedule s;
    s.alpha = alpha;
    s.variant = variant;
    s.eta = eta;
    s.seed = tail.seed;
    if (tail.use_hint && model.tail_second_moment(1).has_value())
        return build_analytic(model, std::move(s), blocks, tail);
    if (tail.replicates < 2)
        throw std::invalid_argument("Monte Carlo certification needs at least two replicates");
    return build_monte_carlo(model, std::move(s), blocks, tail);
}

CoeffSeq block_project(const CoeffSeq& xi, const BlockSchedule& schedule, std::size_t k)
{
    if (k >= schedule.block_count())
        throw std::out_of_range("block index " + std::to_string(k) + " out of range");
    auto out = CoeffSeq::zeros(xi.size());
    const std::uint64_t last = std::min<std::uint64_t>(schedule.block_last(k), xi.size());
    for (std::uint64_t n = schedule.block_first(k); n <= last; ++n)
        out[n] = xi[n];
    return out;
}

} // namespace interspace
