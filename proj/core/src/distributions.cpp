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

#include "interspace/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace interspace::dist {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

// E[M^2] = int_0^inf 2x P(M > x) dx, given log P(M <= x).
// E[M^2] = int_0^inf 2x P(M > x) dx for log_cdf(x) = log P(M <= x). Below
// x_lo (log_cdf < -40) the integrand equals 2x to double precision and
// above x_hi (log_cdf > -1e-25) it is negligible; only the transition is
// integrated numerically.
double second_moment(const std::function<double(double)>& log_cdf, double upper)
{
    auto locate = [&](double level) {
        double lo = 0.0;
        double hi = upper;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (log_cdf(mid) < level ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double x_lo = locate(-40.0);
    const double x_hi = std::max(x_lo, locate(-1e-25));
    auto integrand = [&](double x) { return -2.0 * x * std::expm1(log_cdf(x)); };
    double total = x_lo * x_lo;
    const int pieces = 48;
    for (int i = 0; i < pieces; ++i) {
        const double a = x_lo + (x_hi - x_lo) * i / pieces;
        const double b = x_lo + (x_hi - x_lo) * (i + 1) / pieces;
        total += boost::math::quadrature::gauss<double, 30>::integrate(integrand, a, b);
    }
    return total;
}

} // namespace

double normal_cdf(double x) noexcept
{
    return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_sf(double x) noexcept
{
    return 0.5 * std::erfc(x / kSqrt2);
}

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal quantile requires p in (0,1)");
    return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
}

double half_normal_sf(double x) noexcept
{
    return x <= 0.0 ? 1.0 : std::erfc(x / kSqrt2);
}

double half_normal_isf(double q)
{
    if (!(q > 0.0 && q <= 1.0))
        throw std::domain_error("half-normal tail probability must be in (0,1]");
    if (q == 1.0)
        return 0.0;
    return kSqrt2 * boost::math::erfc_inv(q);
}

double kolmogorov_log_cdf(double y) noexcept
{
    if (y <= 0.0)
        return -INFINITY;
    if (y >= 1.0) {
        // 1 - 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 y^2)
        double s = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double term = std::exp(-2.0 * k * k * y * y);
            s += (k % 2 == 1) ? term : -term;
            if (term < 1e-300)
                break;
        }
        return std::log1p(-2.0 * s);
    }
    // sqrt(2 pi)/y sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 y^2)), factored at k = 1.
    const double lead = kPi2 / (8.0 * y * y);
    double s = 1.0;
    for (int k = 2; k <= 20; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double term = std::exp(-(odd * odd - 1.0) * lead);
        s += term;
        if (term < 1e-18)
            break;
    }
    return 0.5 * std::log(2.0 * std::numbers::pi) - std::log(y) - lead + std::log(s);
}

double bm_abs_sup_log_cdf(double y) noexcept
{
    if (y <= 0.0)
        return -INFINITY;
    if (y >= 1.0) {
        // Reflection: P(sup|B| > y) = 4 sum_{k>=1} (-1)^(k-1) Phibar((2k-1) y).
        double tail = 0.0;
        for (int k = 1; k <= 40; ++k) {
            const double term = 4.0 * normal_sf((2.0 * k - 1.0) * y);
            tail += (k % 2 == 1) ? term : -term;
            if (term < 1e-300)
                break;
        }
        return std::log1p(-tail);
    }
    // (4/pi) sum_{k>=0} (-1)^k/(2k+1) exp(-(2k+1)^2 pi^2/(8y^2)), factored at k = 0.
    const double lead = kPi2 / (8.0 * y * y);
    double s = 1.0;
    for (int k = 1; k <= 40; ++k) {
        const double odd = 2.0 * k + 1.0;
        const double term = std::exp(-(odd * odd - 1.0) * lead) / odd;
        s += (k % 2 == 1) ? -term : term;
        if (term < 1e-18)
            break;
    }
    return std::log(4.0 / std::numbers::pi) - lead + std::log(s);
}

double expected_max_bridge_sup_square(std::span<const BridgeGroup> groups)
{
    double total_count = 0.0;
    double max_length = 0.0;
    for (const auto& g : groups) {
        if (g.count == 0)
            continue;
        if (!(g.length > 0.0))
            throw std::invalid_argument("bridge interval length must be positive");
        total_count += static_cast<double>(g.count);
        max_length = std::max(max_length, g.length);
    }
    if (total_count == 0.0)
        return 0.0;
    // P(max > x) <= total * 2 exp(-2 x^2 / max_length); cut where this is < 1e-40.
    const double upper = std::sqrt(max_length * (std::log(2.0 * total_count) + 95.0) / 2.0);
    auto log_cdf = [&](double x) {
        double s = 0.0;
        for (const auto& g : groups)
            if (g.count > 0)
                s += static_cast<double>(g.count) * kolmogorov_log_cdf(x / std::sqrt(g.length));
        return s;
    };
    return second_moment(log_cdf, upper);
}

double expected_bm_sup_square()
{
    const double upper = std::sqrt(2.0 * (std::log(4.0) + 95.0));
    return second_moment([](double x) { return bm_abs_sup_log_cdf(x); }, upper);
}

double expected_max_chi2(std::uint64_t n)
{
    if (n == 0)
        return 0.0;
    const double count = static_cast<double>(n);
    const double upper = std::sqrt(2.0 * (std::log(count) + 95.0));
    auto log_cdf = [&](double x) { return count * std::log1p(-half_normal_sf(x)); };
    return second_moment(log_cdf, upper);
}

} // namespace interspace::dist
