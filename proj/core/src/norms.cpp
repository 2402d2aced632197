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

#include "interspace/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace interspace {

std::vector<double> block_sup_norms(const CoeffSeq& xi, const BlockSchedule& schedule, const BasisModel& model, int level)
{
    if (xi.support_end() > schedule.covered())
        throw std::invalid_argument("coefficient at index " + std::to_string(xi.support_end())
                                    + " lies beyond the schedule's last cut " + std::to_string(schedule.covered()));
    const std::uint64_t used = std::min<std::uint64_t>(xi.size(), schedule.covered());
    const auto synth = model.synthesizer(level, std::max<std::uint64_t>(used, 1));
    const auto all = xi.values();
    std::vector<double> out(schedule.block_count(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::uint64_t first = schedule.block_first(k);
        const std::uint64_t last = std::min(schedule.block_last(k), used);
        if (first > last)
            continue;
        out[k] = sup_norm(synth.path(first, all.subspan(first - 1, last - first + 1)));
    }
    return out;
}

double sum_block_from(std::span<const double> block_norms, double alpha)
{
    double s = 0.0;
    for (std::size_t k = 0; k < block_norms.size(); ++k)
        s += std::pow(2.0, static_cast<double>(k) * alpha) * block_norms[k];
    return s;
}

double sup_block_from(std::span<const double> block_norms, double alpha)
{
    double s = 0.0;
    for (std::size_t k = 0; k < block_norms.size(); ++k)
        s = std::max(s, std::pow(2.0, static_cast<double>(k) * alpha) * block_norms[k]);
    return s;
}

double sum_block_norm(const CoeffSeq& xi, const BlockSchedule& schedule, const BasisModel& model, int level)
{
    return sum_block_from(block_sup_norms(xi, schedule, model, level), schedule.alpha);
}

double sup_block_norm(const CoeffSeq& xi, const BlockSchedule& schedule, const BasisModel& model, int level)
{
    return sup_block_from(block_sup_norms(xi, schedule, model, level), schedule.alpha);
}

double rkhs_norm(const CoeffSeq& xi) noexcept
{
    double s = 0.0;
    for (double v : xi.values())
        s += v * v;
    return std::sqrt(s);
}

TailBound block_tail_bound_from(std::span<const double> block_norms, double alpha, std::size_t k0)
{
    if (k0 >= block_norms.size())
        throw std::out_of_range("k0 must be below the block count");
    TailBound r;
    for (std::size_t k = k0 + 1; k < block_norms.size(); ++k)
        r.tail += block_norms[k];
    r.bound = std::pow(2.0, -alpha * static_cast<double>(k0)) * sum_block_from(block_norms, alpha);
    return r;
}

TailBound block_tail_bound(const CoeffSeq& xi, const BlockSchedule& schedule, std::size_t k0, const BasisModel& model,
                           int level)
{
    return block_tail_bound_from(block_sup_norms(xi, schedule, model, level), schedule.alpha, k0);
}

} // namespace interspace
