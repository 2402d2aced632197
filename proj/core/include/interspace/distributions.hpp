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
#include <span>

namespace interspace::dist {

double normal_cdf(double x) noexcept;
double normal_sf(double x) noexcept;
double normal_quantile(double p);

/// P(|g| > x) for g ~ N(0,1).
double half_normal_sf(double x) noexcept;
/// Inverse of half_normal_sf; accurate for tiny q.
double half_normal_isf(double q);

/// log P(sup_{[0,1]} |b| <= y) for a standard Brownian bridge b
/// (Kolmogorov distribution).
double kolmogorov_log_cdf(double y) noexcept;

/// log P(sup_{[0,1]} |B| <= y) for standard Brownian motion B.
double bm_abs_sup_log_cdf(double y) noexcept;

/// `count` independent bridges, each on an interval of length `length`.
struct BridgeGroup {
    double length = 1.0;
    std::uint64_t count = 0;
};

/// E[ max over all bridges of sup|bridge|^2 ].
double expected_max_bridge_sup_square(std::span<const BridgeGroup> groups);

/// E[ sup_{[0,1]} |B|^2 ].
double expected_bm_sup_square();

/// E[ max of n iid g_i^2 ], g_i ~ N(0,1).
double expected_max_chi2(std::uint64_t n);

} // namespace interspace::dist
