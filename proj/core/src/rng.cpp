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

#include "interspace/rng.hpp"

#include <cmath>
#include <numbers>

namespace interspace {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept
{
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

// 53-bit uniform strictly inside (0, 1).
inline double to_open_unit(std::uint64_t bits) noexcept
{
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace

Philox4x32::Counter Philox4x32::encrypt(Counter ctr, Key key) noexcept
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

UniformStream::UniformStream(StreamId id) noexcept
    : id_(id),
      key_{static_cast<std::uint32_t>(id.seed), static_cast<std::uint32_t>(id.seed >> 32)}
{
}

std::array<double, 2> UniformStream::pair(std::uint64_t block) const noexcept
{
    // Counter words: block index (64 bit), replicate (low 32), purpose/lane.
    const std::uint32_t lane_word = (static_cast<std::uint32_t>(id_.purpose) << 24) ^ id_.lane
                                    ^ static_cast<std::uint32_t>(id_.replicate >> 32) * 0x9E3779B1u;
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block),
                                  static_cast<std::uint32_t>(block >> 32),
                                  static_cast<std::uint32_t>(id_.replicate), lane_word};
    const auto out = Philox4x32::encrypt(ctr, key_);
    const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    return {to_open_unit(a), to_open_unit(b)};
}

double UniformStream::operator()(std::uint64_t index) const noexcept
{
    return pair(index >> 1)[index & 1u];
}

GaussianStream::GaussianStream(StreamId id) noexcept : uniforms_(id) {}

GaussianStream::GaussianStream() noexcept : uniforms_(StreamId{}), zero_(true) {}

GaussianStream GaussianStream::pinned_zero() noexcept
{
    return GaussianStream();
}

std::array<double, 2> GaussianStream::pair(std::uint64_t block) const noexcept
{
    const auto u = uniforms_.pair(block);
    const double radius = std::sqrt(-2.0 * std::log(u[0]));
    const double angle = 2.0 * std::numbers::pi * u[1];
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

double GaussianStream::operator()(std::uint64_t index) const noexcept
{
    if (zero_)
        return 0.0;
    return pair(index >> 1)[index & 1u];
}

void GaussianStream::fill(std::uint64_t first, std::span<double> out) const noexcept
{
    if (zero_) {
        for (auto& v : out)
            v = 0.0;
        return;
    }
    std::size_t i = 0;
    std::uint64_t index = first;
    if ((index & 1u) && i < out.size()) {
        out[i++] = pair(index >> 1)[1];
        ++index;
    }
    for (; i + 1 < out.size(); i += 2, index += 2) {
        const auto g = pair(index >> 1);
        out[i] = g[0];
        out[i + 1] = g[1];
    }
    if (i < out.size())
        out[i] = pair(index >> 1)[0];
}

double UniformCursor::normal() noexcept
{
    const double u0 = next();
    const double u1 = next();
    return std::sqrt(-2.0 * std::log(u0)) * std::cos(2.0 * std::numbers::pi * u1);
}

} // namespace interspace
