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

#include <span>
#include <stdexcept>
#include <vector>

#include "interspace/paths.hpp"

namespace interspace {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest path through the gates lo[i] <= b[i] <= hi[i], i = 0..n-1, at
/// unit spacing (funnel / string pulling). Minimizes sum f(b[i+1] - b[i])
/// for every convex f simultaneously. Requires lo <= hi everywhere and
/// point gates (lo == hi) at both ends.
std::vector<double> taut_string(std::span<const double> lo, std::span<const double> hi);

/// Least H^1 seminorm over level-L paths b with b(0) = 0 and |b - p| <= s at
/// every grid node; b(1) is free.
double tube_h1(const DyadicPath& p, double s);

/// Minimizer of tube_h1 (the free-end taut string), as a path.
DyadicPath tube_path(const DyadicPath& p, double s);

struct KFunctionalOptions {
    double tol = 1e-9;
    int max_iterations = 200;
};

/// K(t, p) = min_b sup|p - b| + t |b|_H over level-L paths b. Computed as
/// min over s in [0, sup|p|] of s + t tube_h1(p, s) (convex in s) by golden
/// section; never exceeds min(sup|p|, t |p|_H). Throws SolverError when the
/// bracket spread stays above tol after max_iterations.
double k_functional(const DyadicPath& p, double t, const KFunctionalOptions& opt = {});

/// 40 log-spaced points on [2^-20, 2^20].
std::vector<double> default_t_grid();

/// max over the grid of t^(-theta) K(t, p).
double theta_norm(const DyadicPath& p, double theta, std::span<const double> t_grid,
                  const KFunctionalOptions& opt = {});

} // namespace interspace
