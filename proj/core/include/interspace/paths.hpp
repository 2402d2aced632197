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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace interspace {

/// A continuous path on [0,1] starting at 0, stored by its values on the
/// dyadic grid t_i = i 2^-L and linearly interpolated in between.
class DyadicPath {
public:
    /// Validates that samples.size() == 2^L + 1 and samples[0] == 0.
    /// Throws std::invalid_argument otherwise.
    static DyadicPath from_samples(std::vector<double> samples);

    static DyadicPath zero(int level);
    static DyadicPath identity(int level);

    int level() const noexcept { return level_; }
    std::size_t intervals() const noexcept { return samples_.size() - 1; }
    std::span<const double> samples() const noexcept { return samples_; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

    /// Value at arbitrary t in [0,1] (linear interpolation).
    double at(double t) const;

private:
    DyadicPath(int level, std::vector<double> samples) : level_(level), samples_(std::move(samples)) {}

    int level_ = 0;
    std::vector<double> samples_;
};

/// Returns L if n == 2^L + 1, otherwise -1.
int level_for_sample_count(std::size_t n) noexcept;

DyadicPath make_path(std::vector<double> samples);

double sup_norm(const DyadicPath& p) noexcept;

/// omega(delta) = max |p(t) - p(s)| over |t - s| <= delta. delta must be a
/// positive multiple of the grid step 2^-L (and at most 1).
double modulus_of_continuity(const DyadicPath& p, double delta);

/// Same, with delta given as a number of grid steps.
double modulus_of_continuity_steps(const DyadicPath& p, std::size_t steps);

struct HolderProfile {
    double value = 0.0;
    /// profile[l - 1] = omega(2^-l) / 2^(-l alpha), l = 1..L.
    std::vector<double> profile;
};

HolderProfile holder_quotient(const DyadicPath& p, double alpha);

/// H^1_0 seminorm of the piecewise-linear interpolant.
double h1_seminorm(const DyadicPath& p) noexcept;

/// <p, q> in H^1_0; both paths must share a level.
double h1_inner(const DyadicPath& p, const DyadicPath& q);

DyadicPath operator+(const DyadicPath& a, const DyadicPath& b);
DyadicPath operator-(const DyadicPath& a, const DyadicPath& b);
DyadicPath operator*(double c, const DyadicPath& p);

// Serialization. CSV: header "t,x" then one row per grid point. JSON: a
// bare array of the 2^L + 1 sample values.
void write_path_csv(std::ostream& os, const DyadicPath& p);
DyadicPath read_path_csv(std::istream& is);
std::string path_to_json(const DyadicPath& p);
DyadicPath path_from_json(const std::string& text);

} // namespace interspace
