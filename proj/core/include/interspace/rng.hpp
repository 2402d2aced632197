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

#include <array>
#include <cstdint>
#include <span>

namespace interspace {

/// Philox4x32-10 block cipher (Salmon et al., SC'11). Stateless: the output
/// is a pure function of (counter, key), which is what makes replicate
/// results independent of scheduling.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter encrypt(Counter ctr, Key key) noexcept;
};

/// Stream identifiers. Each purpose gets its own counter lane so that,
/// e.g., re-certifying a schedule never reuses the draws of an experiment.
enum class StreamPurpose : std::uint32_t {
    Coefficients = 0,
    TailEstimate = 1,
    LazyBlock = 2,
    Auxiliary = 3,
    Body = 4,
};

/// Addresses one independent random stream: (seed, replicate, purpose, lane).
struct StreamId {
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
    StreamPurpose purpose = StreamPurpose::Coefficients;
    std::uint32_t lane = 0;
};

/// Uniform doubles in (0, 1) addressed by a 64-bit draw index.
class UniformStream {
public:
    explicit UniformStream(StreamId id) noexcept;

    /// Two uniforms for draw indices 2*block and 2*block + 1.
    std::array<double, 2> pair(std::uint64_t block) const noexcept;

    double operator()(std::uint64_t index) const noexcept;

    const StreamId& id() const noexcept { return id_; }

private:
    StreamId id_;
    Philox4x32::Key key_;
};

/// Standard normal variates g_i addressed by coefficient index i (Box-Muller
/// on a Philox block, two normals per block). A pinned-zero stream returns 0
/// everywhere; it exists as a test hook for degenerate-input checks.
class GaussianStream {
public:
    explicit GaussianStream(StreamId id) noexcept;

    static GaussianStream pinned_zero() noexcept;

    double operator()(std::uint64_t index) const noexcept;

    /// out[i] = g_{first + i}; equivalent to calling operator() per index.
    void fill(std::uint64_t first, std::span<double> out) const noexcept;

    bool is_pinned_zero() const noexcept { return zero_; }
    const StreamId& id() const noexcept { return uniforms_.id(); }

private:
    GaussianStream() noexcept;
    std::array<double, 2> pair(std::uint64_t block) const noexcept;

    UniformStream uniforms_;
    bool zero_ = false;
};

/// Sequential cursor over a UniformStream; convenient where a procedure
/// consumes a data-dependent number of draws.
class UniformCursor {
public:
    explicit UniformCursor(StreamId id) noexcept : stream_(id) {}

    double next() noexcept { return stream_(position_++); }
    double normal() noexcept;
    std::uint64_t position() const noexcept { return position_; }

private:
    UniformStream stream_;
    std::uint64_t position_ = 0;
};

} // namespace interspace
