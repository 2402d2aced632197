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
#include <vector>

#include "interspace/blocks.hpp"
#include "interspace/haar.hpp"
#include "interspace/models.hpp"

namespace interspace {

/// sup_norm of each block path Q_k xi synthesized at level L, k = 0..K-1.
/// Throws std::invalid_argument when xi carries a nonzero coefficient beyond n_K.
std::vector<double> block_sup_norms(const CoeffSeq& xi, const BlockSchedule& schedule, const BasisModel& model, int level);

double sum_block_norm(const CoeffSeq& xi, const BlockSchedule& schedule, const BasisModel& model, int level);
double sup_block_norm(const CoeffSeq& xi, const BlockSchedule& schedule, const BasisModel& model, int level);

/// Weighted combinations of precomputed block sup norms.
double sum_block_from(std::span<const double> block_norms, double alpha);
double sup_block_from(std::span<const double> block_norms, double alpha);

double rkhs_norm(const CoeffSeq& xi) noexcept;

struct TailBound {
    double tail = 0.0;
    double bound = 0.0;
};

/// tail = sum_{k > k0} sup_norm(Q_k xi), bound = 2^(-alpha k0) * sum_block_norm.
TailBound block_tail_bound(const CoeffSeq& xi, const BlockSchedule& schedule, std::size_t k0, const BasisModel& model,
                           int level);
TailBound block_tail_bound_from(std::span<const double> block_norms, double alpha, std::size_t k0);

} // namespace interspace
