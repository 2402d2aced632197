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

#include "interspace/lazy_block.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "interspace/distributions.hpp"
#include "interspace/haar.hpp"

namespace interspace {

namespace {

constexpr int kGridBits = 62;
constexpr std::uint64_t kWholeLevel = 32;

} // namespace

double LazyBlockSup::Level::peak() const noexcept
{
    return level < 0 ? 1.0 : schauder_peak(level);
}

LazyBlockSup::LazyBlockSup(std::uint64_t first, std::uint64_t last, StreamId stream) : cursor_(stream)
{
    if (first < 1 || last < first)
        throw std::invalid_argument("lazy block needs 1 <= first <= last");
    if (last > (std::uint64_t{1} << (kGridBits - 1)))
        throw std::invalid_argument("lazy block index beyond 2^61");
    const int top = dyadic_index(last).level;
    for (int l = dyadic_index(first).level; l <= top; ++l) {
        const std::uint64_t lo = std::max(first, dyadic_first(l));
        const std::uint64_t hi = std::min(last, dyadic_last(l));
        if (lo > hi)
            continue;
        Level lv;
        lv.level = l;
        lv.j_first = l < 0 ? 1 : lo - (std::uint64_t{1} << l);
        lv.count = hi - lo + 1;
        levels_.push_back(std::move(lv));
    }
    update();
}

void LazyBlockSup::reveal_top(Level& lv, std::uint64_t how_many)
{
    for (std::uint64_t i = 0; i < how_many; ++i) {
        const std::uint64_t remaining = lv.count - lv.revealed;
        const double u = cursor_.next();
        const double s = -std::expm1(std::log(u) / static_cast<double>(remaining));
        const double q = lv.q_bound + (1.0 - lv.q_bound) * s;
        const double x = dist::half_normal_isf(q);
        std::uint64_t pos;
        do {
            pos = std::min(lv.count - 1, static_cast<std::uint64_t>(cursor_.next() * static_cast<double>(lv.count)));
        } while (lv.taken.count(pos) != 0);
        lv.taken.insert(pos);
        const double sign = cursor_.next() < 0.5 ? -1.0 : 1.0;
        terms_.push_back({lv.level, lv.j_first + pos, sign * x});
        lv.q_bound = q;
        lv.m_bound = x;
        ++lv.revealed;
        ++revealed_;
    }
}

void LazyBlockSup::reveal_rest(Level& lv)
{
    // The unrevealed values are iid |g| conditioned on |g| <= m_bound.
    const bool fresh = lv.revealed == 0;
    for (std::uint64_t pos = 0; pos < lv.count; ++pos) {
        if (!fresh && lv.taken.count(pos) != 0)
            continue;
        double g;
        if (fresh) {
            g = cursor_.normal();
        } else {
            const double q = lv.q_bound + (1.0 - lv.q_bound) * cursor_.next();
            g = dist::half_normal_isf(q) * (cursor_.next() < 0.5 ? -1.0 : 1.0);
        }
        terms_.push_back({lv.level, lv.j_first + pos, g});
        ++revealed_;
    }
    lv.revealed = lv.count;
    lv.m_bound = 0.0;
    lv.q_bound = 1.0;
    lv.taken.clear();
}

void LazyBlockSup::update()
{
    bound_ = 0.0;
    for (const auto& lv : levels_) {
        if (lv.revealed == lv.count)
            continue;
        if (lv.revealed == 0) {
            bound_ = std::numeric_limits<double>::infinity();
            break;
        }
        bound_ += lv.peak() * lv.m_bound;
    }
    // Within one level the tents are disjoint and every unrevealed |g| is below
    // the revealed ones, so the sup is already attained by a revealed tent.
    if (levels_.size() == 1 && levels_.front().revealed > 0)
        bound_ = 0.0;

    // Merge the slope changes of newly revealed tents into the sorted event
    // list, then sweep; positions are exact numerators over 2^62.
    const std::size_t old_size = events_.size();
    for (std::size_t t = merged_; t < terms_.size(); ++t) {
        const auto& term = terms_[t];
        if (term.level < 0) {
            events_.emplace_back(0, term.g);
            continue;
        }
        const double slope = term.g * std::sqrt(std::ldexp(1.0, term.level));
        const std::uint64_t width = std::uint64_t{1} << (kGridBits - term.level);
        const std::uint64_t left = (term.j - 1) * width;
        events_.emplace_back(left, slope);
        events_.emplace_back(left + width / 2, -2.0 * slope);
        events_.emplace_back(left + width, slope);
    }
    merged_ = terms_.size();
    auto by_position = [](const auto& a, const auto& b) { return a.first < b.first; };
    std::sort(events_.begin() + static_cast<std::ptrdiff_t>(old_size), events_.end(), by_position);
    std::inplace_merge(events_.begin(), events_.begin() + static_cast<std::ptrdiff_t>(old_size), events_.end(),
                       by_position);
    const double unit = std::ldexp(1.0, -kGridBits);
    double value = 0.0;
    double slope = 0.0;
    double best = 0.0;
    std::uint64_t at = 0;
    for (const auto& [pos, ds] : events_) {
        value += slope * static_cast<double>(pos - at) * unit;
        at = pos;
        best = std::max(best, std::abs(value));
        slope += ds;
    }
    const std::uint64_t end = std::uint64_t{1} << kGridBits;
    value += slope * static_cast<double>(end - at) * unit;
    best = std::max(best, std::abs(value));

    // Every bracket holds for the same realization, so intersect with the last one.
    lower_ = std::max({lower_, 0.0, best - bound_});
    upper_ = std::min(upper_, best + bound_);
}

void LazyBlockSup::refine()
{
    if (exact())
        return;
    Level* pick = nullptr;
    double widest = -1.0;
    for (auto& lv : levels_) {
        if (lv.revealed == lv.count)
            continue;
        const double w = lv.revealed == 0 ? std::numeric_limits<double>::max() * lv.peak() : lv.peak() * lv.m_bound;
        if (w > widest) {
            widest = w;
            pick = &lv;
        }
    }
    if (pick->count <= kWholeLevel || 2 * pick->revealed >= pick->count)
        reveal_rest(*pick);
    else
        reveal_top(*pick, std::min(std::max<std::uint64_t>(1, pick->revealed), pick->count - pick->revealed));
    update();
}

bool LazyBlockSup::exceeds(double c)
{
    while (true) {
        if (lower_ > c)
            return true;
        if (upper_ <= c)
            return false;
        if (exact())
            return lower_ > c;
        refine();
    }
}

void LazyBlockSup::refine_to(double rel_tol, double abs_tol)
{
    while (!exact() && width() > std::max(abs_tol, rel_tol * lower_))
        refine();
}

} // namespace interspace
