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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "interspace/haar.hpp"
#include "interspace/models.hpp"

namespace interspace {

/// sum: tails at n_k bounded by 2^(-k(3 + 2 alpha)), blocks weighted and summed.
/// sup: tails bounded by 2^(-2k(alpha + eta)), blocks weighted and maximized.
enum class Variant { Sum, Sup };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

/// Threshold the certified tail bound at n_k must meet, k >= 1.
double schedule_threshold(Variant variant, double alpha, double eta, std::size_t k);

/// Cut indices 0 = n_0 < n_1 < ... < n_K; block k holds indices (n_k, n_{k+1}].
struct BlockSchedule {
    double alpha = 0.3;
    Variant variant = Variant::Sum;
    double eta = 0.1;
    std::vector<std::uint64_t> cuts{0};
    /// certified[k - 1]: certified tail bound at n_k (k = 1..K).
    std::vector<double> certified;
    /// certified_below[k - 1]: certified bound at n_k - 1, NaN when n_k - 1 = n_{k-1}.
    std::vector<double> certified_below;
    std::uint64_t seed = 0;
    /// "analytic", "monte-carlo" or "fixed".
    std::string method = "fixed";

    std::size_t block_count() const noexcept { return cuts.size() - 1; }
    std::uint64_t block_first(std::size_t k) const { return cuts.at(k) + 1; }
    std::uint64_t block_last(std::size_t k) const { return cuts.at(k + 1); }
    std::uint64_t covered() const noexcept { return cuts.back(); }
    double threshold(std::size_t k) const { return schedule_threshold(variant, alpha, eta, k); }
    double weight(std::size_t k) const;

    /// Validates alpha, eta and cut monotonicity; certificates stay empty.
    static BlockSchedule from_cuts(double alpha, Variant variant, double eta, std::vector<std::uint64_t> cuts);

    /// The Schauder-level schedule n_0 = 0, n_k = 2^k (k = 1..K): block 0 is
    /// {1, 2}, block k >= 1 is the k-th dyadic level 2^k < n <= 2^(k+1).
    static BlockSchedule dyadic(double alpha, std::size_t blocks, Variant variant = Variant::Sup, double eta = 0.1);
};

std::string schedule_to_json(const BlockSchedule& s);
BlockSchedule schedule_from_json(const std::string& text);

/// Greedy minimal cuts: n_k is the least n > n_{k-1} whose certified tail
/// bound meets threshold(k). Certification uses the model's closed-form tail
/// when tail.use_hint and one exists, otherwise the 99% upper confidence
/// bound of a Monte Carlo scan (running minimum over n, common random
/// numbers across n). Throws ScheduleError when J_max runs out.
BlockSchedule build_schedule(const BasisModel& model, double alpha, Variant variant, double eta,
                             std::size_t blocks, const TailParams& tail);

class ScheduleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// xi restricted to block k, zero elsewhere (same length as xi).
CoeffSeq block_project(const CoeffSeq& xi, const BlockSchedule& schedule, std::size_t k);

} // namespace interspace
