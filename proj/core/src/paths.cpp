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

#include "interspace/paths.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace interspace {

int level_for_sample_count(std::size_t n) noexcept
{
    if (n < 2)
        return -1;
    const std::size_t m = n - 1;
    if ((m & (m - 1)) != 0)
        return -1;
    int level = 0;
    while ((std::size_t{1} << level) < m)
        ++level;
    return level;
}

DyadicPath DyadicPath::from_samples(std::vector<double> samples)
{
    const int level = level_for_sample_count(samples.size());
    if (level < 0)
        throw std::invalid_argument("path length " + std::to_string(samples.size())
                                    + " is not of the form 2^L + 1");
    if (samples.front() != 0.0)
        throw std::invalid_argument("path must start at 0");
    for (double v : samples)
        if (!std::isfinite(v))
            throw std::invalid_argument("path samples must be finite");
    return DyadicPath(level, std::move(samples));
}

DyadicPath DyadicPath::zero(int level)
{
    if (level < 0 || level > 30)
        throw std::invalid_argument("grid level out of range");
    return DyadicPath(level, std::vector<double>((std::size_t{1} << level) + 1, 0.0));
}

DyadicPath DyadicPath::identity(int level)
{
    auto p = zero(level);
    const double step = std::ldexp(1.0, -level);
    for (std::size_t i = 0; i < p.samples_.size(); ++i)
        p.samples_[i] = static_cast<double>(i) * step;
    return p;
}

double DyadicPath::at(double t) const
{
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("t outside [0,1]");
    const double x = std::ldexp(t, level_);
    const auto i = std::min(static_cast<std::size_t>(x), intervals() - 1);
    const double frac = x - static_cast<double>(i);
    return samples_[i] + frac * (samples_[i + 1] - samples_[i]);
}

DyadicPath make_path(std::vector<double> samples)
{
    return DyadicPath::from_samples(std::move(samples));
}

double sup_norm(const DyadicPath& p) noexcept
{
    double m = 0.0;
    for (double v : p.samples())
        m = std::max(m, std::abs(v));
    return m;
}

double modulus_of_continuity_steps(const DyadicPath& p, std::size_t steps)
{
    if (steps < 1 || steps > p.intervals())
        throw std::invalid_argument("modulus step must be in [1, 2^L]");
    // Sliding window of width steps + 1: omega = max over windows of (max - min).
    const auto x = p.samples();
    std::deque<std::size_t> hi, lo;
    double omega = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        while (!hi.empty() && x[hi.back()] <= x[i])
            hi.pop_back();
        while (!lo.empty() && x[lo.back()] >= x[i])
            lo.pop_back();
        hi.push_back(i);
        lo.push_back(i);
        if (hi.front() + steps < i)
            hi.pop_front();
        if (lo.front() + steps < i)
            lo.pop_front();
        omega = std::max(omega, x[hi.front()] - x[lo.front()]);
    }
    return omega;
}

double modulus_of_continuity(const DyadicPath& p, double delta)
{
    const double scaled = std::ldexp(delta, p.level());
    const double rounded = std::round(scaled);
    if (!(delta > 0.0) || std::abs(scaled - rounded) > 1e-9 * std::max(1.0, scaled) || rounded < 1.0
        || rounded > static_cast<double>(p.intervals()))
        throw std::invalid_argument("delta must be a positive multiple of the grid step, at most 1");
    return modulus_of_continuity_steps(p, static_cast<std::size_t>(rounded));
}

HolderProfile holder_quotient(const DyadicPath& p, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("Holder exponent must lie in (0,1)");
    HolderProfile out;
    out.profile.reserve(static_cast<std::size_t>(p.level()));
    for (int l = 1; l <= p.level(); ++l) {
        const double omega = modulus_of_continuity_steps(p, std::size_t{1} << (p.level() - l));
        out.profile.push_back(omega / std::pow(2.0, -l * alpha));
        out.value = std::max(out.value, out.profile.back());
    }
    return out;
}

double h1_seminorm(const DyadicPath& p) noexcept
{
    const auto x = p.samples();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double d = x[i + 1] - x[i];
        s += d * d;
    }
    return std::sqrt(std::ldexp(s, p.level()));
}

double h1_inner(const DyadicPath& p, const DyadicPath& q)
{
    if (p.level() != q.level())
        throw std::invalid_argument("paths live on different grids");
    const auto x = p.samples();
    const auto y = q.samples();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += (x[i + 1] - x[i]) * (y[i + 1] - y[i]);
    return std::ldexp(s, p.level());
}

namespace {

template <class Op>
DyadicPath combine(const DyadicPath& a, const DyadicPath& b, Op op)
{
    if (a.level() != b.level())
        throw std::invalid_argument("paths live on different grids");
    std::vector<double> out(a.samples().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = op(a[i], b[i]);
    return DyadicPath::from_samples(std::move(out));
}

} // namespace

DyadicPath operator+(const DyadicPath& a, const DyadicPath& b)
{
    return combine(a, b, [](double x, double y) { return x + y; });
}

DyadicPath operator-(const DyadicPath& a, const DyadicPath& b)
{
    return combine(a, b, [](double x, double y) { return x - y; });
}

DyadicPath operator*(double c, const DyadicPath& p)
{
    std::vector<double> out(p.samples().begin(), p.samples().end());
    for (auto& v : out)
        v *= c;
    out[0] = 0.0;
    return DyadicPath::from_samples(std::move(out));
}

void write_path_csv(std::ostream& os, const DyadicPath& p)
{
    os << "t,x\n";
    const double step = std::ldexp(1.0, -p.level());
    os.precision(17);
    for (std::size_t i = 0; i < p.samples().size(); ++i)
        os << static_cast<double>(i) * step << ',' << p[i] << '\n';
}

DyadicPath read_path_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("empty path CSV");
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("malformed path CSV row: " + line);
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    return DyadicPath::from_samples(std::move(values));
}

std::string path_to_json(const DyadicPath& p)
{
    return nlohmann::json(std::vector<double>(p.samples().begin(), p.samples().end())).dump();
}

DyadicPath path_from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    if (!j.is_array())
        throw std::invalid_argument("path JSON must be an array of samples");
    return DyadicPath::from_samples(j.get<std::vector<double>>());
}

} // namespace interspace
