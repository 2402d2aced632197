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
#include <limits>
#include <unordered_set>
#include <utility>
#include <vector>

#include "interspace/rng.hpp"

namespace interspace {

/// Sup norm of W = sum_{first <= n <= last} g_n phi_n (Schauder functions,
/// iid standard normal g_n) sampled lazily. Within each dyadic level the
/// order statistics of |g| are revealed from the top down, each with a
/// uniformly random free position and a random sign, so the revealed
/// partial sum S and the bound m_l on every unrevealed |g| of level l are
/// an exact draw from the joint law. Since tents of one level have disjoint
/// supports, |W - S| <= B = sum_l peak_l * m_l, which brackets the sup.
/// Index ranges up to 2^61 are supported.
class LazyBlockSup {
public:
    LazyBlockSup(std::uint64_t first, std::uint64_t last, StreamId stream);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    double width() const noexcept { return upper_ - lower_; }
    bool exact() const noexcept { return bound_ == 0.0; }
    std::uint64_t revealed() const noexcept { return revealed_; }

    /// Reveal more of the level with the largest unrevealed bound.
    void refine();
    /// Decide sup|W| > c; the answer has the exact law of the event.
    bool exceeds(double c);
    /// Refine until width <= max(abs_tol, rel_tol * lower).
    void refine_to(double rel_tol, double abs_tol = 0.0);

private:
    struct Level {
        int level = 0;
        std::uint64_t j_first = 1; // tents j_first .. j_first + count - 1
        std::uint64_t count = 0;
        std::uint64_t revealed = 0;
        double q_bound = 0.0; // P(|g| > m) for the smallest revealed |g|; 0 before any
        double m_bound = 0.0;
        std::unordered_set<std::uint64_t> taken;
        double peak() const noexcept;
    };
    struct Term {
        int level;
        std::uint64_t j;
        double g;
    };

    void reveal_top(Level& lv, std::uint64_t how_many);
    void reveal_rest(Level& lv);
    void update();

    std::vector<Level> levels_;
    std::vector<Term> terms_;
    std::vector<std::pair<std::uint64_t, double>> events_; // sorted by position
    std::size_t merged_ = 0;
    UniformCursor cursor_;
    std::uint64_t revealed_ = 0;
    double lower_ = 0.0;
    double upper_ = std::numeric_limits<double>::infinity();
    double bound_ = 0.0;
};

} // namespace interspace
