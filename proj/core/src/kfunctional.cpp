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

#include "interspace/kfunctional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace interspace {

std::vector<double> taut_string(std::span<const double> lo, std::span<const double> hi)
{
    const std::size_t n = lo.size();
    if (hi.size() != n || n == 0)
        throw std::invalid_argument("taut_string: gate arrays must be nonempty and of equal length");
    for (std::size_t i = 0; i < n; ++i)
        if (!(lo[i] <= hi[i]))
            throw std::invalid_argument("taut_string: empty gate");
    std::vector<double> b(n);

    if (lo[0] != hi[0] || lo[n - 1] != hi[n - 1])
        throw std::invalid_argument("taut_string: first and last gates must be points");
    std::size_t a = 0;
    double ya = lo[0];
    b[0] = ya;
    while (a + 1 < n) {
        double smin = -std::numeric_limits<double>::infinity();
        double smax = std::numeric_limits<double>::infinity();
        std::size_t imin = a;
        std::size_t imax = a;
        std::size_t bend = n;
        double bend_value = 0.0;
        double bend_slope = 0.0;
        for (std::size_t i = a + 1; i < n; ++i) {
            const double d = static_cast<double>(i - a);
            const double cl = (lo[i] - ya) / d;
            const double ch = (hi[i] - ya) / d;
            if (cl > smax) {
                bend = imax;
                bend_value = hi[imax];
                bend_slope = smax;
                break;
            }
            if (ch < smin) {
                bend = imin;
                bend_value = lo[imin];
                bend_slope = smin;
                break;
            }
            if (cl >= smin) {
                smin = cl;
                imin = i;
            }
            if (ch <= smax) {
                smax = ch;
                imax = i;
            }
        }
        if (bend == n) {
            // The last gate is a point, so smin == smax here.
            const double s = 0.5 * (smin + smax);
            for (std::size_t i = a + 1; i < n; ++i)
                b[i] = ya + s * static_cast<double>(i - a);
            break;
        }
        for (std::size_t i = a + 1; i < bend; ++i)
            b[i] = ya + bend_slope * static_cast<double>(i - a);
        b[bend] = bend_value;
        a = bend;
        ya = bend_value;
    }
    return b;
}

namespace {

// Mirrored tube on [0, 2]: symmetric problem with both ends pinned at 0.
std::vector<double> mirrored_string(const DyadicPath& p, double s)
{
    const std::size_t n = p.intervals();
    const auto x = p.samples();
    std::vector<double> lo(2 * n + 1);
    std::vector<double> hi(2 * n + 1);
    for (std::size_t i = 0; i <= 2 * n; ++i) {
        const double v = x[i <= n ? i : 2 * n - i];
        lo[i] = v - s;
        hi[i] = v + s;
    }
    lo[0] = hi[0] = 0.0;
    lo[2 * n] = hi[2 * n] = 0.0;
    return taut_string(lo, hi);
}

} // namespace

DyadicPath tube_path(const DyadicPath& p, double s)
{
    if (!(s >= 0.0))
        throw std::invalid_argument("tube half-width must be nonnegative");
    auto b = mirrored_string(p, s);
    b.resize(p.intervals() + 1);
    b[0] = 0.0;
    return DyadicPath::from_samples(std::move(b));
}

double tube_h1(const DyadicPath& p, double s)
{
    if (!(s >= 0.0))
        throw std::invalid_argument("tube half-width must be nonnegative");
    if (s == 0.0)
        return h1_seminorm(p);
    if (s >= sup_norm(p))
        return 0.0;
    const auto b = mirrored_string(p, s);
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        e += (b[i + 1] - b[i]) * (b[i + 1] - b[i]);
    return std::sqrt(0.5 * e * static_cast<double>(p.intervals()));
}

double k_functional(const DyadicPath& p, double t, const KFunctionalOptions& opt)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("t must be positive and finite");
    const double sup = sup_norm(p);
    const double h1 = h1_seminorm(p);
    const double cap = std::min(sup, t * h1);
    if (sup == 0.0)
        return 0.0;
    auto f = [&](double s) { return s + t * tube_h1(p, s); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = sup;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    double f_lo = t * h1;
    double f_hi = sup;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        const double spread = std::max(f_lo, f_hi) - std::min(f1, f2);
        if (spread <= opt.tol || hi - lo <= 1e-15 * sup)
            break;
        if (f1 <= f2) {
            hi = x2;
            f_hi = f2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            f_lo = f1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    const double best = std::min({f1, f2, f_lo, f_hi, cap});
    if (it == opt.max_iterations && std::max(f_lo, f_hi) - best > opt.tol)
        throw SolverError("K-functional: tolerance " + std::to_string(opt.tol) + " not reached in "
                          + std::to_string(opt.max_iterations) + " iterations");
    return best;
}

std::vector<double> default_t_grid()
{
    std::vector<double> g(40);
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = std::exp2(-20.0 + 40.0 * static_cast<double>(i) / static_cast<double>(g.size() - 1));
    return g;
}

double theta_norm(const DyadicPath& p, double theta, std::span<const double> t_grid, const KFunctionalOptions& opt)
{
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("theta must lie in (0,1)");
    double best = 0.0;
    for (double t : t_grid)
        best = std::max(best, std::pow(t, -theta) * k_functional(p, t, opt));
    return best;
}

} // namespace interspace
