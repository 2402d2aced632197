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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "interspace/paths.hpp"

namespace interspace {

/// Coefficients xi_1..xi_N of a path in the Schauder (or any orthonormal)
/// basis. Indexing is 1-based and dense.
class CoeffSeq {
public:
    CoeffSeq() = default;
    explicit CoeffSeq(std::vector<double> values);
    static CoeffSeq zeros(std::size_t count) { return CoeffSeq(std::vector<double>(count, 0.0)); }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    /// xi_n, n >= 1.
    double operator[](std::uint64_t n) const { return values_.at(n - 1); }
    double& operator[](std::uint64_t n) { return values_.at(n - 1); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Index of the last nonzero coefficient, 0 when all vanish.
    std::uint64_t support_end() const noexcept;

    friend bool operator==(const CoeffSeq&, const CoeffSeq&) = default;

private:
    std::vector<double> values_;
};

CoeffSeq operator+(const CoeffSeq& a, const CoeffSeq& b);
CoeffSeq operator*(double c, const CoeffSeq& a);

/// Position of index n in the dyadic hierarchy: n = 2^level + j with
/// 1 <= j <= 2^level. Index 1 (the linear function) has level -1, j = 1.
struct DyadicIndex {
    int level = -1;
    std::uint64_t j = 1;
};

DyadicIndex dyadic_index(std::uint64_t n);
std::uint64_t dyadic_first(int level) noexcept; // 2^level + 1, or 1 for level -1
std::uint64_t dyadic_last(int level) noexcept;  // 2^(level+1), or 1 for level -1

/// Height of the Schauder tent at a level: 2^(-1-level/2); 1 for level -1.
double schauder_peak(int level) noexcept;

/// Smallest grid level on which phi_n is represented exactly.
int schauder_min_level(std::uint64_t n);

double haar_eval(std::uint64_t n, double t);
double schauder_eval(std::uint64_t n, double t);

/// Coefficients xi_n = int chi_n dx for n = 1..2^L (exact for dyadic paths).
CoeffSeq analyze(const DyadicPath& p);

/// Sum_m xi_m phi_m on the level-L grid. Throws if L is too shallow.
DyadicPath synthesize(const CoeffSeq& xi, int level);

/// Adds sum_i coeffs[i] * phi_{first + i} into samples (size 2^L + 1).
/// Linear in 2^L via level-by-level midpoint refinement.
void accumulate_schauder(std::uint64_t first, std::span<const double> coeffs, int level,
                         std::span<double> samples);

/// w_n(alpha) = 2^(k(alpha - 1/2) + (1 - alpha)) for n = 2^k + j; w_1 = 1.
double ciesielski_weight(std::uint64_t n, double alpha);

struct CiesielskiNorm {
    double value = 0.0;
    /// w_1 |xi_1|.
    double linear_term = 0.0;
    /// per_level[k] = max_j w_{2^k+j} |xi_{2^k+j}|.
    std::vector<double> per_level;
};

CiesielskiNorm ciesielski_seq_norm(const CoeffSeq& xi, double alpha);

// Serialization. CSV: header "n,xi"; JSON: bare array xi_1..xi_N.
void write_coeffs_csv(std::ostream& os, const CoeffSeq& xi);
CoeffSeq read_coeffs_csv(std::istream& is);
std::string coeffs_to_json(const CoeffSeq& xi);
CoeffSeq coeffs_from_json(const std::string& text);

} // namespace interspace
