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

#include "interspace/haar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace interspace {

CoeffSeq::CoeffSeq(std::vector<double> values) : values_(std::move(values)) {}

std::uint64_t CoeffSeq::support_end() const noexcept
{
    for (std::size_t i = values_.size(); i > 0; --i)
        if (values_[i - 1] != 0.0)
            return i;
    return 0;
}

CoeffSeq operator+(const CoeffSeq& a, const CoeffSeq& b)
{
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] += a.values()[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        out[i] += b.values()[i];
    return CoeffSeq(std::move(out));
}

CoeffSeq operator*(double c, const CoeffSeq& a)
{
    std::vector<double> out(a.values().begin(), a.values().end());
    for (auto& v : out)
        v *= c;
    return CoeffSeq(std::move(out));
}

DyadicIndex dyadic_index(std::uint64_t n)
{
    if (n < 1)
        throw std::invalid_argument("basis index must be >= 1");
    if (n == 1)
        return {};
    const int level = static_cast<int>(std::bit_width(n - 1)) - 1;
    return {level, n - (std::uint64_t{1} << level)};
}

std::uint64_t dyadic_first(int level) noexcept
{
    return level < 0 ? 1 : (std::uint64_t{1} << level) + 1;
}

std::uint64_t dyadic_last(int level) noexcept
{
    return level < 0 ? 1 : std::uint64_t{1} << (level + 1);
}

double schauder_peak(int level) noexcept
{
    return level < 0 ? 1.0 : std::pow(2.0, -1.0 - 0.5 * level);
}

int schauder_min_level(std::uint64_t n)
{
    const auto idx = dyadic_index(n);
    return idx.level + 1;
}

namespace {

void check_unit(double t)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("t outside [0,1]");
}

} // namespace

double haar_eval(std::uint64_t n, double t)
{
    check_unit(t);
    const auto [k, j] = dyadic_index(n);
    if (k < 0)
        return 1.0;
    const double scale = std::ldexp(1.0, k + 1);
    const double left = static_cast<double>(2 * j - 2) / scale;
    const double mid = static_cast<double>(2 * j - 1) / scale;
    const double right = static_cast<double>(2 * j) / scale;
    const double height = std::sqrt(std::ldexp(1.0, k));
    if (t >= left && t < mid)
        return height;
    // Intervals are half-open except the last one, which is closed at 1.
    if (t >= mid && (t < right || (t == 1.0 && right == 1.0)))
        return -height;
    return 0.0;
}

double schauder_eval(std::uint64_t n, double t)
{
    check_unit(t);
    const auto [k, j] = dyadic_index(n);
    if (k < 0)
        return t;
    const double s = std::ldexp(t, k) - static_cast<double>(j - 1);
    if (s <= 0.0 || s >= 1.0)
        return 0.0;
    return std::pow(2.0, -0.5 * k) * std::min(s, 1.0 - s);
}

CoeffSeq analyze(const DyadicPath& p)
{
    const int level = p.level();
    const auto x = p.samples();
    const std::size_t n_grid = p.intervals();
    std::vector<double> xi(n_grid, 0.0);
    xi[0] = x[n_grid];
    for (int k = 0; k < level; ++k) {
        const std::size_t stride = n_grid >> k;
        const std::size_t half = stride / 2;
        const double scale = std::sqrt(std::ldexp(1.0, k));
        const std::size_t base = std::size_t{1} << k;
        for (std::size_t j = 1; j <= base; ++j) {
            const std::size_t left = (j - 1) * stride;
            xi[base + j - 1] = scale * (2.0 * x[left + half] - x[left] - x[left + stride]);
        }
    }
    return CoeffSeq(std::move(xi));
}

void accumulate_schauder(std::uint64_t first, std::span<const double> coeffs, int level,
                         std::span<double> samples)
{
    const std::size_t n_grid = std::size_t{1} << level;
    if (samples.size() != n_grid + 1)
        throw std::invalid_argument("sample buffer does not match grid level");
    if (coeffs.empty())
        return;
    if (first < 1)
        throw std::invalid_argument("basis index must be >= 1");
    const std::uint64_t last = first + coeffs.size() - 1;
    if (schauder_min_level(last) > level)
        throw std::invalid_argument("grid level " + std::to_string(level)
                                    + " too shallow for basis index " + std::to_string(last));
    auto coeff = [&](std::uint64_t n) { return n >= first && n <= last ? coeffs[n - first] : 0.0; };

    // Build the contribution on a scratch grid, coarse to fine, then add.
    std::vector<double> y(n_grid + 1, 0.0);
    y[n_grid] = coeff(1);
    const int deepest = dyadic_index(last).level;
    for (int k = 0; k < level; ++k) {
        const std::size_t stride = n_grid >> k;
        const std::size_t half = stride / 2;
        const std::size_t base = std::size_t{1} << k;
        const double peak = schauder_peak(k);
        const bool has_coeffs = k <= deepest && last >= base + 1 && first <= 2 * base;
        for (std::size_t j = 1; j <= base; ++j) {
            const std::size_t left = (j - 1) * stride;
            double v = 0.5 * (y[left] + y[left + stride]);
            if (has_coeffs)
                v += coeff(base + j) * peak;
            y[left + half] = v;
        }
    }
    for (std::size_t i = 0; i <= n_grid; ++i)
        samples[i] += y[i];
}

DyadicPath synthesize(const CoeffSeq& xi, int level)
{
    if (level < 0 || level > 30)
        throw std::invalid_argument("grid level out of range");
    std::vector<double> samples((std::size_t{1} << level) + 1, 0.0);
    accumulate_schauder(1, xi.values(), level, samples);
    samples[0] = 0.0;
    return DyadicPath::from_samples(std::move(samples));
}

double ciesielski_weight(std::uint64_t n, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("Holder exponent must lie in (0,1)");
    const auto idx = dyadic_index(n);
    if (idx.level < 0)
        return 1.0;
    return std::pow(2.0, idx.level * (alpha - 0.5) + (1.0 - alpha));
}

CiesielskiNorm ciesielski_seq_norm(const CoeffSeq& xi, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("Holder exponent must lie in (0,1)");
    CiesielskiNorm out;
    if (xi.empty())
        return out;
    out.linear_term = std::abs(xi[1]);
    out.value = out.linear_term;
    for (std::uint64_t n = 2; n <= xi.size(); ++n) {
        const auto idx = dyadic_index(n);
        if (static_cast<std::size_t>(idx.level) >= out.per_level.size())
            out.per_level.resize(static_cast<std::size_t>(idx.level) + 1, 0.0);
        const double v = ciesielski_weight(n, alpha) * std::abs(xi[n]);
        auto& slot = out.per_level[static_cast<std::size_t>(idx.level)];
        slot = std::max(slot, v);
        out.value = std::max(out.value, v);
    }
    return out;
}

void write_coeffs_csv(std::ostream& os, const CoeffSeq& xi)
{
    os << "n,xi\n";
    os.precision(17);
    for (std::uint64_t n = 1; n <= xi.size(); ++n)
        os << n << ',' << xi[n] << '\n';
}

CoeffSeq read_coeffs_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("empty coefficient CSV");
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("malformed coefficient CSV row: " + line);
        const auto n = std::stoull(line.substr(0, comma));
        if (n != values.size() + 1)
            throw std::invalid_argument("coefficient CSV indices must be dense and start at 1");
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    return CoeffSeq(std::move(values));
}

std::string coeffs_to_json(const CoeffSeq& xi)
{
    return nlohmann::json(std::vector<double>(xi.values().begin(), xi.values().end())).dump();
}

CoeffSeq coeffs_from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    if (!j.is_array())
        throw std::invalid_argument("coefficient JSON must be an array");
    return CoeffSeq(j.get<std::vector<double>>());
}

} // namespace interspace
