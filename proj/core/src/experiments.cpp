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

#include "interspace/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "interspace/distributions.hpp"
#include "interspace/lazy_block.hpp"
#include "interspace/norms.hpp"
#include "interspace/parallel.hpp"

namespace interspace {

std::string to_string(NormSpec n)
{
    switch (n) {
    case NormSpec::Sup:
        return "sup";
    case NormSpec::SumBlock:
        return "sum-block";
    case NormSpec::SupBlock:
        return "sup-block";
    case NormSpec::RunningMax:
        return "running-max";
    }
    return "?";
}

NormSpec norm_spec_from_string(const std::string& name)
{
    for (auto n : {NormSpec::Sup, NormSpec::SumBlock, NormSpec::SupBlock, NormSpec::RunningMax})
        if (to_string(n) == name)
            return n;
    throw std::invalid_argument("unknown norm '" + name + "' (expected sup, sum-block, sup-block or running-max)");
}

std::string to_string(Body::Kind k)
{
    switch (k) {
    case Body::Kind::Box:
        return "box";
    case Body::Kind::Ellipsoid:
        return "ellipsoid";
    case Body::Kind::Polytope:
        return "polytope";
    case Body::Kind::Whole:
        return "whole";
    }
    return "?";
}

Body::Kind body_kind_from_string(const std::string& name)
{
    for (auto k : {Body::Kind::Box, Body::Kind::Ellipsoid, Body::Kind::Polytope, Body::Kind::Whole})
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown body '" + name + "' (expected box, ellipsoid, polytope or whole)");
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("slope fit needs at least two points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(std::span<const double> v)
{
    MeanSe out;
    if (v.empty())
        return out;
    for (double x : v)
        out.mean += x;
    out.mean /= static_cast<double>(v.size());
    if (v.size() < 2)
        return out;
    double var = 0.0;
    for (double x : v)
        var += (x - out.mean) * (x - out.mean);
    var /= static_cast<double>(v.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(v.size()));
    return out;
}

double binomial_se(double p, std::uint64_t n)
{
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

std::string fmt(const char* pattern, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

nlohmann::json run_json(const RunParams& r)
{
    return {{"replicates", r.replicates}, {"seed", r.seed}, {"level", r.level}, {"pinned_zero", r.pinned_zero}};
}

nlohmann::json model_json(const BasisModel& m)
{
    return {{"kind", m.name()}, {"terms", m.terms() ? nlohmann::json(*m.terms()) : nlohmann::json(nullptr)}};
}

nlohmann::json schedule_json(const BlockSchedule& s)
{
    return nlohmann::json::parse(schedule_to_json(s));
}

void check_run(const RunParams& r)
{
    if (r.replicates < 2)
        throw std::invalid_argument("at least two replicates are required");
    if (r.level < 1 || r.level > 20)
        throw std::invalid_argument("grid level must lie in 1..20");
}

bool uses_lazy(const BasisModel& m)
{
    return m.kind() == ModelKind::SchauderBm && !m.terms();
}

// Brackets on sup|W_k| for one replicate, blocks k_first..k_last. The
// infinite Schauder model is sampled lazily and exactly; every other model
// is synthesized on the level-L grid (blocks clipped to its index range).
class BlockDraw {
public:
    BlockDraw(const BlockSchedule& s, const RunParams& run, const Synthesizer* synth, std::uint64_t r,
              std::size_t k_first, std::size_t k_last)
        : k_first_(k_first)
    {
        const std::size_t count = k_last - k_first + 1;
        if (run.pinned_zero) {
            value_.assign(count, 0.0);
            return;
        }
        if (synth == nullptr) {
            lazy_.reserve(count);
            for (std::size_t k = k_first; k <= k_last; ++k)
                lazy_.emplace_back(s.block_first(k), s.block_last(k),
                                   StreamId{run.seed, r, StreamPurpose::LazyBlock, static_cast<std::uint32_t>(k)});
            return;
        }
        const GaussianStream gs({run.seed, r, StreamPurpose::Coefficients, 0});
        value_.assign(count, 0.0);
        std::vector<double> samples((std::size_t{1} << synth->level()) + 1);
        std::vector<double> g;
        for (std::size_t k = k_first; k <= k_last; ++k) {
            const std::uint64_t first = s.block_first(k);
            const std::uint64_t last = std::min(s.block_last(k), synth->max_index());
            if (first > last)
                continue;
            g.resize(last - first + 1);
            gs.fill(first, g);
            std::fill(samples.begin(), samples.end(), 0.0);
            synth->accumulate(first, g, samples);
            double m = 0.0;
            for (double v : samples)
                m = std::max(m, std::abs(v));
            value_[k - k_first] = m;
        }
    }

    double lower(std::size_t k) const { return lazy_.empty() ? value_[k - k_first_] : lazy_[k - k_first_].lower(); }
    double upper(std::size_t k) const { return lazy_.empty() ? value_[k - k_first_] : lazy_[k - k_first_].upper(); }
    bool exact(std::size_t k) const { return lazy_.empty() || lazy_[k - k_first_].exact(); }
    void refine(std::size_t k)
    {
        if (!lazy_.empty())
            lazy_[k - k_first_].refine();
    }

    struct Bracket {
        double lo;
        double hi;
    };

    // Combined bracket of sum or max of w_k sup|W_k| over k = a..b.
    Bracket combined(std::size_t a, std::size_t b, const std::vector<double>& w, bool sum) const
    {
        Bracket out{0.0, 0.0};
        for (std::size_t k = a; k <= b; ++k) {
            const double lo = w[k] * lower(k);
            const double hi = w[k] * upper(k);
            if (sum) {
                out.lo += lo;
                out.hi += hi;
            } else {
                out.lo = std::max(out.lo, lo);
                out.hi = std::max(out.hi, hi);
            }
        }
        return out;
    }

    // Refine the block with the widest weighted bracket; false if all exact.
    bool refine_widest(std::size_t a, std::size_t b, const std::vector<double>& w)
    {
        std::size_t pick = b + 1;
        double widest = -1.0;
        for (std::size_t k = a; k <= b; ++k) {
            if (exact(k))
                continue;
            const double width = std::isinf(upper(k)) ? std::numeric_limits<double>::max() : w[k] * (upper(k) - lower(k));
            if (width > widest) {
                widest = width;
                pick = k;
            }
        }
        if (pick > b)
            return false;
        refine(pick);
        return true;
    }

    // Exact-in-law decision of {combined > c}.
    bool exceeds(std::size_t a, std::size_t b, const std::vector<double>& w, double c, bool sum)
    {
        while (true) {
            const auto br = combined(a, b, w, sum);
            if (br.lo > c)
                return true;
            if (br.hi <= c)
                return false;
            if (!refine_widest(a, b, w))
                return br.lo > c;
        }
    }

    Bracket refine_to(std::size_t a, std::size_t b, const std::vector<double>& w, bool sum, double rel_tol)
    {
        while (true) {
            const auto br = combined(a, b, w, sum);
            if (br.hi - br.lo <= rel_tol * br.lo || !refine_widest(a, b, w))
                return br;
        }
    }

private:
    std::size_t k_first_;
    std::vector<LazyBlockSup> lazy_;
    std::vector<double> value_;
};

std::optional<Synthesizer> block_synthesizer(const BasisModel& model, const BlockSchedule& s, const RunParams& run,
                                             nlohmann::json& extra)
{
    if (uses_lazy(model)) {
        extra["block_sampler"] = "lazy-exact";
        return std::nullopt;
    }
    const std::uint64_t cap = model.effective_terms(run.level);
    extra["block_sampler"] = "grid";
    if (s.covered() > cap)
        extra["blocks_truncated_at"] = cap;
    return model.synthesizer(run.level, std::max<std::uint64_t>(1, std::min(s.covered(), cap)));
}

std::vector<double> block_weights(const BlockSchedule& s)
{
    std::vector<double> w(s.block_count());
    for (std::size_t k = 0; k < w.size(); ++k)
        w[k] = s.weight(k);
    return w;
}

} // namespace

ExperimentReport verify_key_inequality(const BasisModel& model, const BlockSchedule& schedule, const RunParams& run)
{
    check_run(run);
    if (schedule.variant != Variant::Sum)
        throw std::invalid_argument("the key inequality uses a sum-variant schedule");
    const std::size_t K = schedule.block_count();
    if (K < 2)
        throw std::invalid_argument("the key inequality needs at least two blocks");

    ExperimentReport rep;
    rep.name = "verify-key-inequality";
    rep.seed = run.seed;
    rep.replicates = run.replicates;
    rep.config = {{"model", model_json(model)}, {"schedule", schedule_json(schedule)}, {"run", run_json(run)}};
    const auto synth = block_synthesizer(model, schedule, run, rep.extra);
    const Synthesizer* sp = synth ? &*synth : nullptr;

    const std::size_t last = K - 1;
    std::vector<std::uint8_t> hits(run.replicates * last, 0);
    const std::vector<double> unit(K, 1.0);
    parallel_for(run.replicates, run.workers, [&](std::uint64_t r) {
        BlockDraw d(schedule, run, sp, r, 1, last);
        for (std::size_t k = 1; k <= last; ++k) {
            const double c = std::exp2(-static_cast<double>(k)) / schedule.weight(k);
            hits[r * last + (k - 1)] = d.exceeds(k, k, unit, c, true) ? 1 : 0;
        }
    });

    ReportTable table{"frequencies", {"k", "n_k", "n_k1", "frequency", "standard_error", "bound"}, {}};
    std::size_t below_envelope = 0;
    for (std::size_t k = 1; k <= last; ++k) {
        std::uint64_t count = 0;
        for (std::uint64_t r = 0; r < run.replicates; ++r)
            count += hits[r * last + (k - 1)];
        const double p = static_cast<double>(count) / static_cast<double>(run.replicates);
        const double se = binomial_se(p, run.replicates);
        const double bound = std::exp2(-static_cast<double>(k));
        rep.check("k=" + std::to_string(k) + " P(2^(k alpha)|W_k| >= 2^-k)", p, "<=", bound, 3.0 * se, se);
        if (p <= bound)
            ++below_envelope;
        table.rows.push_back({static_cast<double>(k), static_cast<double>(schedule.cuts[k]),
                              static_cast<double>(schedule.cuts[k + 1]), p, se, bound});
    }
    rep.info("blocks at or below the 2^-k envelope", static_cast<double>(below_envelope));
    rep.tables.push_back(std::move(table));
    return rep;
}

ExperimentReport zn_convergence(const BasisModel& model, const BlockSchedule& schedule, const ZnParams& params)
{
    const auto& run = params.run;
    check_run(run);
    const std::size_t K = schedule.block_count();
    if (K < 2)
        throw std::invalid_argument("Z_n needs at least two blocks");
    const bool sum = schedule.variant == Variant::Sum;
    const std::size_t F = K - 1;

    ExperimentReport rep;
    rep.name = "zn-convergence";
    rep.seed = run.seed;
    rep.replicates = run.replicates;
    rep.config = {{"model", model_json(model)},
                  {"schedule", schedule_json(schedule)},
                  {"run", run_json(run)},
                  {"quantiles", params.quantiles},
                  {"bracket_tol", params.bracket_tol},
                  {"bc_eps", params.bc_eps}};
    const auto synth = block_synthesizer(model, schedule, run, rep.extra);
    const Synthesizer* sp = synth ? &*synth : nullptr;
    const auto w = block_weights(schedule);
    const std::uint64_t R = run.replicates;

    std::vector<std::uint8_t> jumps(R * F, 0);
    const std::size_t E = params.bc_eps.size();
    std::vector<std::uint8_t> bc(sum ? 0 : R * E * F, 0);
    std::vector<std::uint8_t> tail_sup(sum ? 0 : R * E * F, 0);
    std::vector<double> z_lo(R * F);
    std::vector<double> z_hi(R * F);

    parallel_for(R, run.workers, [&](std::uint64_t r) {
        BlockDraw d(schedule, run, sp, r, 1, F);
        if (sum) {
            for (std::size_t n = 1; n < F; ++n)
                jumps[r * F + n] = d.exceeds(n + 1, F, w, 2.0 * std::exp2(-static_cast<double>(n)), true) ? 1 : 0;
        } else {
            for (std::size_t e = 0; e < E; ++e)
                for (std::size_t k = 1; k <= F; ++k) {
                    bc[(r * E + e) * F + (k - 1)] = d.exceeds(k, k, w, params.bc_eps[e], false) ? 1 : 0;
                    tail_sup[(r * E + e) * F + (k - 1)] = d.exceeds(k, F, w, params.bc_eps[e], false) ? 1 : 0;
                }
        }
        d.refine_to(1, F, w, sum, params.bracket_tol);
        for (std::size_t n = 1; n <= F; ++n) {
            const auto br = d.combined(1, n, w, sum);
            z_lo[r * F + (n - 1)] = br.lo;
            z_hi[r * F + (n - 1)] = br.hi;
        }
    });

    // (i) monotone trajectories, finiteness of Z_K.
    std::uint64_t violations = 0;
    std::uint64_t finite = 0;
    ReportTable traj{"trajectory", {"n", "mean_lower", "mean_upper"}, {}};
    for (std::size_t n = 1; n <= F; ++n) {
        double lo = 0.0;
        double hi = 0.0;
        for (std::uint64_t r = 0; r < R; ++r) {
            lo += z_lo[r * F + (n - 1)];
            hi += z_hi[r * F + (n - 1)];
            if (n > 1 && z_hi[r * F + (n - 1)] < z_lo[r * F + (n - 2)])
                ++violations;
        }
        traj.rows.push_back({static_cast<double>(n), lo / static_cast<double>(R), hi / static_cast<double>(R)});
    }
    for (std::uint64_t r = 0; r < R; ++r)
        if (std::isfinite(z_hi[r * F + (F - 1)]))
            ++finite;
    rep.check("monotonicity violations of Z_n", static_cast<double>(violations), "==", 0.0);
    rep.check("fraction of replicates with finite Z_K", static_cast<double>(finite) / static_cast<double>(R), "==", 1.0);

    // (ii) sum: tail jumps; sup: Markov / Borel-Cantelli per block.
    if (sum) {
        ReportTable t{"tail_jumps", {"n", "frequency", "standard_error", "bound"}, {}};
        for (std::size_t n = 1; n < F; ++n) {
            std::uint64_t c = 0;
            for (std::uint64_t r = 0; r < R; ++r)
                c += jumps[r * F + n];
            const double p = static_cast<double>(c) / static_cast<double>(R);
            const double se = binomial_se(p, R);
            const double bound = std::exp2(-static_cast<double>(n));
            rep.check("n=" + std::to_string(n) + " P(Z_K - Z_n > 2*2^-n)", p, "<=", bound, 3.0 * se, se);
            t.rows.push_back({static_cast<double>(n), p, se, bound});
        }
        rep.tables.push_back(std::move(t));
    } else {
        ReportTable t{"block_exceedance", {"eps", "k", "frequency", "standard_error", "markov_bound", "tail_sup_frequency"}, {}};
        for (std::size_t e = 0; e < E; ++e) {
            const double eps = params.bc_eps[e];
            double series = 0.0;
            for (std::size_t k = 1; k <= F; ++k) {
                std::uint64_t c = 0;
                std::uint64_t ct = 0;
                for (std::uint64_t r = 0; r < R; ++r) {
                    c += bc[(r * E + e) * F + (k - 1)];
                    ct += tail_sup[(r * E + e) * F + (k - 1)];
                }
                const double p = static_cast<double>(c) / static_cast<double>(R);
                const double pt = static_cast<double>(ct) / static_cast<double>(R);
                const double se = binomial_se(p, R);
                const double bound = std::exp2(-2.0 * static_cast<double>(k) * schedule.eta) / (eps * eps);
                series += p;
                rep.check("eps=" + fmt("%g", eps) + " k=" + std::to_string(k) + " P(2^(k alpha)|W_k| > eps)", p, "<=",
                          bound, 3.0 * se, se);
                t.rows.push_back({eps, static_cast<double>(k), p, se, bound, pt});
            }
            rep.info("eps=" + fmt("%g", eps) + " partial sum of exceedance frequencies", series);
        }
        rep.tables.push_back(std::move(t));
    }

    // (iii) P(Z < eps) > 0. Z_K <= hi, so the q-quantile of the upper brackets
    // bounds the q-quantile of Z from above and the lower brackets bound it from
    // below. At eps = quantile_q(hi) at least qR replicates are certified below
    // eps without further refinement.
    std::vector<double> his(R);
    std::vector<double> los(R);
    for (std::uint64_t r = 0; r < R; ++r) {
        his[r] = z_hi[r * F + (F - 1)];
        los[r] = z_lo[r * F + (F - 1)];
    }
    std::sort(his.begin(), his.end());
    std::sort(los.begin(), los.end());
    ReportTable small{"small_ball", {"quantile", "z_quantile_lower", "eps", "certified_frequency", "upper_frequency"}, {}};
    for (double q : params.quantiles) {
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("small-ball quantiles must lie in (0,1)");
        const auto idx = std::min<std::size_t>(R - 1, static_cast<std::size_t>(std::floor(q * static_cast<double>(R))));
        const double eps = his[idx];
        std::uint64_t certain = 0;
        std::uint64_t possible = 0;
        for (std::uint64_t r = 0; r < R; ++r) {
            certain += z_hi[r * F + (F - 1)] <= eps ? 1 : 0;
            possible += z_lo[r * F + (F - 1)] < eps ? 1 : 0;
        }
        const double p = static_cast<double>(certain) / static_cast<double>(R);
        const double pu = static_cast<double>(possible) / static_cast<double>(R);
        rep.check("P(Z <= " + fmt("%.6g", eps) + ") (quantile " + fmt("%g", q) + ")", p, ">", 0.0, 0.0, binomial_se(p, R),
                  "Z quantile in [" + fmt("%.6g", los[idx]) + ", " + fmt("%.6g", eps) + "]; bracket upper frequency "
                      + fmt("%.6g", pu));
        small.rows.push_back({q, los[idx], eps, p, pu});
    }
    rep.tables.push_back(std::move(traj));
    rep.tables.push_back(std::move(small));
    return rep;
}

namespace {

struct Functional {
    const BasisModel& model;
    NormSpec norm;
    const BlockSchedule* schedule;
    RunParams run;
};

// Functional values of X_N, N = min(terms, 2^L) (block norms: N <= n_K).
std::vector<double> functional_values(const Functional& f, nlohmann::json& extra)
{
    const auto& run = f.run;
    std::uint64_t terms = f.model.effective_terms(run.level);
    const bool block = f.norm == NormSpec::SumBlock || f.norm == NormSpec::SupBlock;
    if (block) {
        if (f.schedule == nullptr)
            throw std::invalid_argument("block norms need a schedule");
        if (terms > f.schedule->covered()) {
            terms = f.schedule->covered();
            extra["truncated_to_schedule"] = terms;
        }
    }
    extra["terms_used"] = terms;
    const auto synth = f.model.synthesizer(run.level, terms);
    const std::size_t size = (std::size_t{1} << run.level) + 1;
    std::vector<double> out(run.replicates, 0.0);
    if (run.pinned_zero)
        return out;
    parallel_for(run.replicates, run.workers, [&](std::uint64_t r) {
        const GaussianStream gs({run.seed, r, StreamPurpose::Coefficients, 0});
        std::vector<double> g(terms);
        gs.fill(1, g);
        std::vector<double> samples(size, 0.0);
        if (!block) {
            synth.accumulate(1, g, samples);
            double m = 0.0;
            if (f.norm == NormSpec::Sup)
                for (double v : samples)
                    m = std::max(m, std::abs(v));
            else
                for (double v : samples)
                    m = std::max(m, v);
            out[r] = m;
            return;
        }
        const auto& s = *f.schedule;
        std::vector<double> b(s.block_count(), 0.0);
        for (std::size_t k = 0; k < b.size(); ++k) {
            const std::uint64_t first = s.block_first(k);
            const std::uint64_t last = std::min(s.block_last(k), terms);
            if (first > last)
                break;
            std::fill(samples.begin(), samples.end(), 0.0);
            synth.accumulate(first, std::span<const double>(g).subspan(first - 1, last - first + 1), samples);
            for (double v : samples)
                b[k] = std::max(b[k], std::abs(v));
        }
        out[r] = f.norm == NormSpec::SumBlock ? sum_block_from(b, s.alpha) : sup_block_from(b, s.alpha);
    });
    return out;
}

// sup_t |e_1(t)| when the model has a single basis function.
std::optional<double> one_dimensional_scale(const BasisModel& model, int level)
{
    if (model.effective_terms(level) != 1)
        return std::nullopt;
    return sup_norm(model.basis_path(1, level));
}

} // namespace

FerniqueSummary fernique_from_values(const std::vector<double>& values, const std::vector<double>& rho_grid,
                                     double stability, bool one_dimensional)
{
    if (values.size() < 2)
        throw std::invalid_argument("Fernique estimate needs at least two values");
    FerniqueSummary s;
    const std::size_t half = values.size() / 2;
    for (std::size_t i = 0; i < rho_grid.size(); ++i) {
        const double rho = rho_grid[i];
        if (!(rho > 0.0))
            throw std::invalid_argument("rho grid entries must be positive");
        double full = 0.0;
        double first = 0.0;
        double largest = 0.0;
        for (std::size_t r = 0; r < values.size(); ++r) {
            const double e = std::exp(rho * values[r] * values[r]);
            full += e;
            if (r < half)
                first += e;
            largest = std::max(largest, e);
        }
        const double c_full = full / static_cast<double>(values.size());
        const double c_half = first / static_cast<double>(half);
        s.c_full.push_back(c_full);
        s.c_half.push_back(c_half);
        s.max_share.push_back(largest / full);
        const bool divergent = one_dimensional && rho >= 0.5;
        const bool ok = std::isfinite(c_full) && !divergent && std::abs(c_half / c_full - 1.0) < stability;
        s.stable.push_back(ok);
        if (ok && (!s.best || rho > rho_grid[*s.best]))
            s.best = i;
    }
    return s;
}

ExperimentReport estimate_fernique(const BasisModel& model, const FerniqueParams& params)
{
    const auto& run = params.run;
    check_run(run);
    ExperimentReport rep;
    rep.name = "fernique";
    rep.seed = run.seed;
    rep.replicates = run.replicates;
    rep.config = {{"model", model_json(model)},
                  {"norm", to_string(params.norm)},
                  {"rho_grid", params.rho_grid},
                  {"stability", params.stability},
                  {"run", run_json(run)}};
    if (params.schedule)
        rep.config["schedule"] = schedule_json(*params.schedule);
    const auto values = functional_values({model, params.norm, params.schedule ? &*params.schedule : nullptr, run}, rep.extra);

    // One basis function and the sup norm: N = s|g|, C_rho = (1 - 2 rho s^2)^(-1/2).
    std::optional<double> scale;
    if (params.norm == NormSpec::Sup)
        scale = one_dimensional_scale(model, run.level);
    const auto s = fernique_from_values(values, params.rho_grid, params.stability, false);

    ReportTable t{"fernique", {"rho", "c_full", "c_half", "relative_change", "max_term_share", "stable", "oracle"}, {}};
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < params.rho_grid.size(); ++i) {
        const double rho = params.rho_grid[i];
        double oracle = std::numeric_limits<double>::quiet_NaN();
        bool divergent = false;
        if (scale) {
            const double a = 1.0 - 2.0 * rho * *scale * *scale;
            divergent = a <= 0.0;
            if (!divergent)
                oracle = 1.0 / std::sqrt(a);
        }
        const bool stable = s.stable[i] && !divergent;
        if (stable && (!best || rho > params.rho_grid[*best]))
            best = i;
        const std::string tag = "rho=" + fmt("%g", rho);
        if (divergent)
            rep.info(tag + " C_rho", s.c_full[i], 0.0, "divergent: integral is infinite for this rho");
        else if (stable && scale)
            rep.check(tag + " C_rho vs 1-D oracle", s.c_full[i], "==", oracle, 0.05 * oracle, 0.0, "relative tolerance 5%");
        else
            rep.info(tag + " C_rho", s.c_full[i], 0.0, stable ? "stable" : "unstable");
        t.rows.push_back({rho, s.c_full[i], s.c_half[i], s.c_half[i] / s.c_full[i] - 1.0, s.max_share[i],
                          stable ? 1.0 : 0.0, oracle});
    }
    rep.tables.push_back(std::move(t));
    if (!best)
        throw std::runtime_error("Fernique: no grid rho passed the stability test (all too large)");
    rep.check("largest stable rho", params.rho_grid[*best], ">", 0.0);
    rep.info("C_rho at the largest stable rho", s.c_full[*best]);
    rep.extra["rho_hat"] = params.rho_grid[*best];
    return rep;
}

ExperimentReport tightness_experiment(const BasisModel& model, const TightnessParams& params)
{
    const auto& run = params.run;
    check_run(run);
    if (!(params.radius > 0.0))
        throw std::invalid_argument("radius must be positive");
    ExperimentReport rep;
    rep.name = "tightness";
    rep.seed = run.seed;
    rep.replicates = run.replicates;
    std::vector<double> eps = params.eps_grid;
    if (eps.empty())
        for (int i = 0; i <= 12; ++i)
            eps.push_back(params.radius / (3.0 + 0.1 * i));
    std::sort(eps.begin(), eps.end(), std::greater<>());
    rep.config = {{"model", model_json(model)},
                  {"norm", to_string(params.norm)},
                  {"radius", params.radius},
                  {"eps_grid", eps},
                  {"min_hits", params.min_hits},
                  {"slope_tol", params.slope_tol},
                  {"rho_grid", params.rho_grid},
                  {"run", run_json(run)}};
    if (params.schedule)
        rep.config["schedule"] = schedule_json(*params.schedule);
    const auto values = functional_values({model, params.norm, params.schedule ? &*params.schedule : nullptr, run}, rep.extra);
    const double r2 = params.radius * params.radius;

    // Gaussian tail rate: log P(N > x) ~ -x^2 / (2 sigma^2), sigma^2 = max_t Var X(t).
    std::optional<double> oracle_slope;
    std::optional<double> scale = one_dimensional_scale(model, run.level);
    const bool bm = (model.kind() == ModelKind::SchauderBm || model.kind() == ModelKind::KlSineBm)
                    && model.effective_terms(run.level) > 1;
    if (params.norm == NormSpec::Sup || params.norm == NormSpec::RunningMax) {
        const std::uint64_t terms = model.effective_terms(run.level);
        const auto synth = model.synthesizer(run.level, terms);
        std::vector<double> var((std::size_t{1} << run.level) + 1, 0.0);
        std::vector<double> e(var.size());
        for (std::uint64_t n = 1; n <= terms; ++n) {
            std::fill(e.begin(), e.end(), 0.0);
            synth.add_term(n, 1.0, e);
            for (std::size_t i = 0; i < e.size(); ++i)
                var[i] += e[i] * e[i];
        }
        const double sigma2 = *std::max_element(var.begin(), var.end());
        oracle_slope = -r2 / (2.0 * sigma2);
        rep.extra["sigma2_max"] = sigma2;
    }
    // Exact finite-x tail probabilities where known.
    auto exact_tail = [&](double x) {
        if (scale && params.norm == NormSpec::Sup)
            return 2.0 * dist::normal_sf(x / *scale);
        if (scale && params.norm == NormSpec::RunningMax)
            return dist::normal_sf(x / *scale);
        if (bm && params.norm == NormSpec::RunningMax)
            return 2.0 * dist::normal_sf(x); // reflection principle, continuous time
        return std::numeric_limits<double>::quiet_NaN();
    };

    ReportTable t{"tail", {"eps", "x", "hits", "p_hat", "eps2_log_p", "exact_p", "kept"}, {}};
    std::vector<double> u;
    std::vector<double> y;
    std::uint64_t prev_hits = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t monotone_violations = 0;
    for (double e : eps) {
        if (!(e > 0.0))
            throw std::invalid_argument("eps grid entries must be positive");
        const double x = params.radius / e;
        std::uint64_t hits = 0;
        for (double v : values)
            hits += v > x ? 1 : 0;
        if (hits > prev_hits)
            ++monotone_violations;
        prev_hits = hits;
        const double p = static_cast<double>(hits) / static_cast<double>(run.replicates);
        const bool kept = hits >= params.min_hits;
        if (kept) {
            u.push_back(1.0 / (e * e));
            y.push_back(std::log(p));
        }
        t.rows.push_back({e, x, static_cast<double>(hits), p, hits ? e * e * std::log(p) : -std::numeric_limits<double>::infinity(),
                          exact_tail(x), kept ? 1.0 : 0.0});
    }
    rep.tables.push_back(std::move(t));
    rep.check("p_hat monotone in eps", static_cast<double>(monotone_violations), "==", 0.0);
    if (u.size() < 2)
        throw std::runtime_error("tightness: fewer than two eps values keep " + std::to_string(params.min_hits)
                                 + " hits; all p_hat below resolution");
    const double slope = fit_slope(u, y);
    rep.extra["slope"] = slope;
    rep.extra["points_kept"] = u.size();
    if (oracle_slope)
        rep.check("slope of log p_hat against eps^-2 vs -r^2/(2 sigma^2)", slope, "==", *oracle_slope,
                  params.slope_tol * std::abs(*oracle_slope), 0.0, "relative tolerance");
    else
        rep.info("slope of log p_hat against eps^-2", slope);

    const auto fs = fernique_from_values(values, params.rho_grid, 0.02, false);
    if (fs.best) {
        const double rho_hat = params.rho_grid[*fs.best];
        rep.extra["rho_hat"] = rho_hat;
        rep.check("slope <= -rho_hat r^2", slope, "<=", -rho_hat * r2, params.slope_tol * rho_hat * r2);
    } else {
        rep.info("no stable Fernique rho on the grid", 0.0);
    }
    return rep;
}

bool Body::contains(const std::vector<double>& x) const
{
    switch (kind) {
    case Kind::Whole:
        return true;
    case Kind::Box:
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::abs(x[i]) > half_sides[i])
                return false;
        return true;
    case Kind::Ellipsoid: {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += (x[i] / half_sides[i]) * (x[i] / half_sides[i]);
        return s <= 1.0;
    }
    case Kind::Polytope:
        for (std::size_t h = 0; h < normals.size(); ++h) {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                dot += normals[h][i] * x[i];
            if (dot > offsets[h])
                return false;
        }
        return true;
    }
    return false;
}

void Body::validate(int dim) const
{
    const auto d = static_cast<std::size_t>(dim);
    switch (kind) {
    case Kind::Whole:
        return;
    case Kind::Box:
    case Kind::Ellipsoid:
        if (half_sides.size() != d)
            throw std::invalid_argument("body needs one half-side per dimension");
        for (double h : half_sides)
            if (!(h > 0.0) || (kind == Kind::Ellipsoid && std::isinf(h)))
                throw std::invalid_argument("body half-sides must be positive");
        return;
    case Kind::Polytope:
        if (normals.empty() || normals.size() != offsets.size())
            throw std::invalid_argument("polytope needs matching normals and offsets");
        for (std::size_t h = 0; h < normals.size(); ++h) {
            if (normals[h].size() != d)
                throw std::invalid_argument("polytope normal has the wrong dimension");
            if (!(offsets[h] >= 0.0))
                throw std::invalid_argument("polytope must contain the origin");
            bool mirrored = false;
            for (std::size_t g = 0; g < normals.size() && !mirrored; ++g) {
                if (std::abs(offsets[g] - offsets[h]) > 1e-12)
                    continue;
                bool same = true;
                for (std::size_t i = 0; i < d; ++i)
                    same = same && std::abs(normals[g][i] + normals[h][i]) <= 1e-12;
                mirrored = same;
            }
            if (!mirrored)
                throw std::invalid_argument("polytope is not centrally symmetric: halfspace "
                                            + std::to_string(h) + " has no mirror image");
        }
        return;
    }
}

ExperimentReport concentration_check(const ConcentrationParams& params)
{
    const auto& run = params.run;
    if (run.replicates < 2)
        throw std::invalid_argument("at least two replicates are required");
    if (params.dim < 2 || params.dim > 4)
        throw std::invalid_argument("dimension must lie in 2..4");
    const auto d = static_cast<std::size_t>(params.dim);
    params.body.validate(params.dim);

    // Orthonormal basis of F by Gram-Schmidt.
    std::vector<std::vector<double>> q;
    if (params.subspace.empty()) {
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<double> e(d, 0.0);
            e[i] = 1.0;
            q.push_back(e);
        }
    } else {
        for (auto v : params.subspace) {
            if (v.size() != d)
                throw std::invalid_argument("subspace vector has the wrong dimension");
            for (const auto& b : q) {
                double dot = 0.0;
                for (std::size_t i = 0; i < d; ++i)
                    dot += v[i] * b[i];
                for (std::size_t i = 0; i < d; ++i)
                    v[i] -= dot * b[i];
            }
            double norm = 0.0;
            for (double x : v)
                norm += x * x;
            norm = std::sqrt(norm);
            if (norm < 1e-12)
                throw std::invalid_argument("subspace vectors are linearly dependent");
            for (double& x : v)
                x /= norm;
            q.push_back(v);
        }
    }
    const std::size_t m = q.size();

    ExperimentReport rep;
    rep.name = "concentration";
    rep.seed = run.seed;
    rep.replicates = run.replicates;
    nlohmann::json body{{"kind", to_string(params.body.kind)}};
    if (!params.body.half_sides.empty()) {
        auto hs = nlohmann::json::array();
        for (double h : params.body.half_sides)
            hs.push_back(std::isinf(h) ? nlohmann::json("inf") : nlohmann::json(h));
        body["half_sides"] = hs;
    }
    if (!params.body.normals.empty()) {
        body["normals"] = params.body.normals;
        body["offsets"] = params.body.offsets;
    }
    rep.config = {{"dim", params.dim}, {"subspace", params.subspace}, {"body", body}, {"run", run_json(run)}};

    std::vector<std::uint8_t> in_full(run.replicates);
    std::vector<std::uint8_t> in_sub(run.replicates);
    parallel_for(run.replicates, run.workers, [&](std::uint64_t r) {
        const GaussianStream full({run.seed, r, StreamPurpose::Body, 0});
        const GaussianStream sub({run.seed, r, StreamPurpose::Body, 1});
        std::vector<double> x(d);
        full.fill(1, x);
        in_full[r] = params.body.contains(x) ? 1 : 0;
        std::vector<double> y(m);
        sub.fill(1, y);
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < d; ++i)
                x[i] += y[j] * q[j][i];
        in_sub[r] = params.body.contains(x) ? 1 : 0;
    });
    const double R = static_cast<double>(run.replicates);
    const double nu = std::accumulate(in_full.begin(), in_full.end(), 0.0) / R;
    const double nup = std::accumulate(in_sub.begin(), in_sub.end(), 0.0) / R;
    const double se1 = binomial_se(nu, run.replicates);
    const double se2 = binomial_se(nup, run.replicates);
    const double se = std::sqrt(se1 * se1 + se2 * se2);
    rep.info("nu(B)", nu, se1);
    rep.info("nu'(F cap B)", nup, se2);
    rep.check("nu(B) <= nu'(F cap B)", nu, "<=", nup, 3.0 * se, se);
    if (m == d)
        rep.check("F = R^d: nu(B) == nu'(F cap B)", nu, "==", nup, 3.0 * se, se);

    // Box with F spanned by coordinate axes: both masses are products.
    if (params.body.kind == Body::Kind::Box || params.body.kind == Body::Kind::Whole) {
        std::vector<int> axis;
        for (const auto& b : q) {
            int hit = -1;
            int nonzero = 0;
            for (std::size_t i = 0; i < d; ++i)
                if (std::abs(b[i]) > 1e-12) {
                    ++nonzero;
                    hit = static_cast<int>(i);
                }
            axis.push_back(nonzero == 1 ? hit : -1);
        }
        if (std::find(axis.begin(), axis.end(), -1) == axis.end()) {
            auto mass = [&](std::size_t i) {
                if (params.body.kind == Body::Kind::Whole || std::isinf(params.body.half_sides[i]))
                    return 1.0;
                return 2.0 * dist::normal_cdf(params.body.half_sides[i]) - 1.0;
            };
            double exact_nu = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                exact_nu *= mass(i);
            double exact_nup = 1.0;
            for (int i : axis)
                exact_nup *= mass(static_cast<std::size_t>(i));
            rep.check("nu(B) vs product formula", nu, "==", exact_nu, 3.0 * se1, se1);
            rep.check("nu'(F cap B) vs product formula", nup, "==", exact_nup, 3.0 * se2, se2);
            rep.check("product formula: nu(B) <= nu'(F cap B)", exact_nu, "<=", exact_nup);
        }
    }
    return rep;
}

std::optional<int> envelope_onset(double lambda, int k_limit)
{
    std::optional<int> onset;
    for (int k = k_limit; k >= 0; --k) {
        const double v = std::exp2(-2.0 - k) * dist::expected_max_chi2(std::uint64_t{1} << k);
        if (v > std::exp2(-lambda * k))
            break;
        onset = k;
    }
    return onset;
}

ExperimentReport block_variance_profile(const BlockVarianceParams& params)
{
    const auto& run = params.run;
    if (run.replicates < 2)
        throw std::invalid_argument("at least two replicates are required");
    if (params.k_min < 1 || params.k_max < params.k_min || params.k_max > 16)
        throw std::invalid_argument("block range must satisfy 1 <= k_min <= k_max <= 16");
    ExperimentReport rep;
    rep.name = "block-variance";
    rep.seed = run.seed;
    rep.replicates = run.replicates;
    rep.config = {{"k_min", params.k_min},
                  {"k_max", params.k_max},
                  {"lambda", params.lambda},
                  {"envelope_from", params.envelope_from},
                  {"run", run_json(run)}};
    const auto model = BasisModel::schauder_bm();
    const std::uint64_t R = run.replicates;

    // Preliminary block {1, 2}, outside the 2^k + j pattern.
    {
        const auto synth = model.synthesizer(1, 2);
        std::vector<double> sq(R, 0.0);
        if (!run.pinned_zero)
            parallel_for(R, run.workers, [&](std::uint64_t r) {
                const GaussianStream gs({run.seed, r, StreamPurpose::Coefficients, 0});
                std::vector<double> g(2);
                gs.fill(1, g);
                const auto p = synth.path(1, g);
                sq[r] = sup_norm(p) * sup_norm(p);
            });
        const auto ms = mean_se(sq);
        rep.info("k=0 preliminary block E|W_0|^2", ms.mean, ms.se, "excluded from the envelope");
    }

    ReportTable t{"profile",
                  {"k", "e_w2", "se", "ratio", "ratio_se", "aux_max_chi2", "aux_se", "quadrature", "envelope"},
                  {}};
    for (int k = params.k_min; k <= params.k_max; ++k) {
        const std::uint64_t first = (std::uint64_t{1} << k) + 1;
        const std::uint64_t count = std::uint64_t{1} << k;
        const auto synth = model.synthesizer(k + 1, first + count - 1);
        std::vector<double> sq(R, 0.0);
        std::vector<double> aux(R, 0.0);
        if (!run.pinned_zero)
            parallel_for(R, run.workers, [&](std::uint64_t r) {
                const GaussianStream gs({run.seed, r, StreamPurpose::Coefficients, 0});
                std::vector<double> g(count);
                gs.fill(first, g);
                const auto p = synth.path(first, g);
                sq[r] = sup_norm(p) * sup_norm(p);
                const GaussianStream ind({run.seed, r, StreamPurpose::Auxiliary, static_cast<std::uint32_t>(k)});
                ind.fill(1, g);
                double m = 0.0;
                for (double v : g)
                    m = std::max(m, v * v);
                aux[r] = m;
            });
        const auto w2 = mean_se(sq);
        const auto ax = mean_se(aux);
        const double scale = std::exp2(-2.0 - k);
        const double ratio = w2.mean / scale;
        const double ratio_se = w2.se / scale;
        const double quad = dist::expected_max_chi2(count);
        const double envelope = std::exp2(-params.lambda * k);
        const std::string tag = "k=" + std::to_string(k);
        const double comb = std::sqrt(ratio_se * ratio_se + ax.se * ax.se);
        rep.check(tag + " E|W_k|^2 / 2^(-2-k) vs E max chi2 (independent draws)", ratio, "==", ax.mean, 3.0 * comb, comb);
        rep.check(tag + " E|W_k|^2 / 2^(-2-k) vs quadrature", ratio, "==", quad, 3.0 * ratio_se, ratio_se);
        if (k >= params.envelope_from)
            rep.check(tag + " E|W_k|^2 <= 2^(-lambda k)", w2.mean, "<=", envelope, 3.0 * w2.se, w2.se);
        t.rows.push_back({static_cast<double>(k), w2.mean, w2.se, ratio, ratio_se, ax.mean, ax.se, quad, envelope});
    }
    rep.tables.push_back(std::move(t));
    const auto onset = envelope_onset(params.lambda);
    rep.info("quadrature: first k from which the envelope holds", onset ? *onset : std::nan(""));
    rep.extra["envelope_onset"] = onset ? nlohmann::json(*onset) : nlohmann::json(nullptr);
    return rep;
}

double closed_form_dyadic_block(const CoeffSeq& xi, std::size_t k, double alpha)
{
    auto at = [&](std::uint64_t n) { return n <= xi.size() ? xi[n] : 0.0; };
    if (k == 0)
        return std::max(std::abs(at(1)), 0.5 * std::abs(at(1) + at(2)));
    double m = 0.0;
    const std::uint64_t last = std::min<std::uint64_t>(std::uint64_t{1} << (k + 1), xi.size());
    for (std::uint64_t n = (std::uint64_t{1} << k) + 1; n <= last; ++n)
        m = std::max(m, std::abs(xi[n]));
    return std::pow(2.0, static_cast<double>(k) * alpha) * schauder_peak(static_cast<int>(k)) * m;
}

namespace {

std::size_t dyadic_blocks_for(const CoeffSeq& xi)
{
    std::size_t K = 1;
    while ((std::uint64_t{1} << K) < xi.size())
        ++K;
    return K;
}

struct CiesielskiValues {
    double path_norm;
    double closed_norm;
    double sequence_norm;
    std::optional<std::size_t> pure_block;
};

CiesielskiValues ciesielski_values(const CoeffSeq& xi, double alpha, int level)
{
    const std::size_t K = dyadic_blocks_for(xi);
    if (static_cast<std::size_t>(level) < K)
        throw std::invalid_argument("level " + std::to_string(level) + " too shallow for " + std::to_string(xi.size())
                                    + " coefficients");
    const auto schedule = BlockSchedule::dyadic(alpha, K);
    const auto model = BasisModel::schauder_bm();
    const auto blocks = block_sup_norms(xi, schedule, model, level);
    CiesielskiValues v{sup_block_from(blocks, alpha), 0.0, ciesielski_seq_norm(xi, alpha).value, std::nullopt};
    std::size_t occupied = 0;
    for (std::size_t k = 0; k < K; ++k) {
        v.closed_norm = std::max(v.closed_norm, closed_form_dyadic_block(xi, k, alpha));
        bool any = false;
        for (std::uint64_t n = schedule.block_first(k); n <= std::min<std::uint64_t>(schedule.block_last(k), xi.size()); ++n)
            any = any || xi[n] != 0.0;
        if (any) {
            ++occupied;
            v.pure_block = k;
        }
    }
    if (occupied != 1 || v.pure_block == std::size_t{0})
        v.pure_block.reset();
    return v;
}

} // namespace

ExperimentReport ciesielski_equivalence_check(const CoeffSeq& xi, double alpha, int level)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
    if (xi.empty())
        throw std::invalid_argument("coefficient sequence is empty");
    ExperimentReport rep;
    rep.name = "ciesielski";
    rep.config = {{"alpha", alpha}, {"level", level}, {"coefficients", xi.size()}};
    const auto v = ciesielski_values(xi, alpha, level);
    const double tol = 1e-10 * std::max(1.0, v.closed_norm);
    rep.check("sup-block norm: path vs closed form", v.path_norm, "==", v.closed_norm, tol);
    rep.info("Ciesielski sequence norm", v.sequence_norm);
    if (v.pure_block)
        rep.check("pure block " + std::to_string(*v.pure_block) + ": ratio to sequence norm vs 2^(alpha-2)",
                  v.path_norm / v.sequence_norm, "==", std::pow(2.0, alpha - 2.0), 1e-10);
    else if (v.sequence_norm > 0.0)
        rep.info("ratio to sequence norm", v.path_norm / v.sequence_norm);
    return rep;
}

ExperimentReport ciesielski_random_check(const CiesielskiBatchParams& params)
{
    if (params.max_block < 1 || params.max_block > 14)
        throw std::invalid_argument("max_block must lie in 1..14");
    ExperimentReport rep;
    rep.name = "ciesielski";
    rep.seed = params.seed;
    rep.replicates = params.count;
    rep.config = {{"count", params.count},
                  {"max_block", params.max_block},
                  {"alphas", params.alphas},
                  {"seed", params.seed},
                  {"tol", params.tol}};
    const int level = params.max_block + 1;
    const std::uint64_t size = std::uint64_t{1} << (params.max_block + 1);
    ReportTable t{"deviations", {"alpha", "max_abs_diff_closed_vs_path", "max_abs_diff_pure_ratio"}, {}};
    for (std::size_t a = 0; a < params.alphas.size(); ++a) {
        const double alpha = params.alphas[a];
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("alpha must lie in (0,1)");
        double worst = 0.0;
        for (std::uint64_t i = 0; i < params.count; ++i) {
            const GaussianStream gs({params.seed, i, StreamPurpose::Coefficients, static_cast<std::uint32_t>(a)});
            std::vector<double> g(size, 0.0);
            gs.fill(3, std::span<double>(g).subspan(2));
            const auto v = ciesielski_values(CoeffSeq(std::move(g)), alpha, level);
            worst = std::max(worst, std::abs(v.path_norm - v.closed_norm) / std::max(1.0, v.closed_norm));
        }
        double worst_ratio = 0.0;
        const double target = std::pow(2.0, alpha - 2.0);
        for (int k = 1; k <= params.max_block; ++k)
            for (std::uint64_t i = 0; i < 10; ++i) {
                const GaussianStream gs({params.seed, i, StreamPurpose::Auxiliary,
                                         static_cast<std::uint32_t>(a * 64 + static_cast<std::size_t>(k))});
                std::vector<double> g(std::uint64_t{1} << (k + 1), 0.0);
                gs.fill((std::uint64_t{1} << k) + 1, std::span<double>(g).subspan(std::uint64_t{1} << k));
                const auto v = ciesielski_values(CoeffSeq(std::move(g)), alpha, level);
                worst_ratio = std::max(worst_ratio, std::abs(v.path_norm / v.sequence_norm - target));
            }
        const std::string tag = "alpha=" + fmt("%g", alpha);
        rep.check(tag + " max relative |closed form - path| over random vectors", worst, "<=", params.tol);
        rep.check(tag + " max |pure-block ratio - 2^(alpha-2)|", worst_ratio, "<=", params.tol);
        t.rows.push_back({alpha, worst, worst_ratio});
    }
    rep.tables.push_back(std::move(t));
    return rep;
}

ExperimentReport kfunctional_experiment(const BasisModel& model, const KFunctionalExperimentParams& params)
{
    const auto& run = params.run;
    check_run(run);
    for (double th : params.thetas)
        if (!(th > 0.0 && th < 1.0))
            throw std::invalid_argument("theta must lie in (0,1)");
    const auto grid = params.t_grid.empty() ? default_t_grid() : params.t_grid;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!(grid[i] > 0.0) || (i > 0 && grid[i] <= grid[i - 1]))
            throw std::invalid_argument("t grid must be positive and increasing");

    ExperimentReport rep;
    rep.name = "kfunctional";
    rep.seed = run.seed;
    rep.replicates = run.replicates;
    rep.config = {{"model", model_json(model)},
                  {"thetas", params.thetas},
                  {"t_grid", grid},
                  {"tol", params.tol},
                  {"histogram_bins", params.histogram_bins},
                  {"run", run_json(run)}};

    const std::uint64_t terms = model.effective_terms(run.level);
    const auto synth = model.synthesizer(run.level, terms);
    const std::uint64_t R = run.replicates;
    const std::size_t T = grid.size();
    const std::size_t H = params.thetas.size();
    std::vector<double> kvals(R * T, 0.0);
    std::vector<double> theta_vals(R * H, 0.0);
    std::vector<std::uint64_t> bound_viol(R, 0);
    std::vector<std::uint64_t> mono_viol(R, 0);
    std::vector<std::uint64_t> concave_viol(R, 0);
    std::vector<std::uint8_t> failed(R, 0);
    const KFunctionalOptions opt{params.tol * 1e-3, 400};

    parallel_for(R, run.workers, [&](std::uint64_t r) {
        std::vector<double> g(terms, 0.0);
        if (!run.pinned_zero)
            GaussianStream({run.seed, r, StreamPurpose::Coefficients, 0}).fill(1, g);
        const auto p = synth.path(1, g);
        const double sup = sup_norm(p);
        const double h1 = h1_seminorm(p);
        double* k = &kvals[r * T];
        try {
            for (std::size_t i = 0; i < T; ++i)
                k[i] = k_functional(p, grid[i], opt);
        } catch (const SolverError&) {
            failed[r] = 1;
            return;
        }
        for (std::size_t i = 0; i < T; ++i) {
            if (k[i] > std::min(sup, grid[i] * h1))
                ++bound_viol[r];
            if (i > 0 && k[i] < k[i - 1] - params.tol)
                ++mono_viol[r];
            if (i > 0 && i + 1 < T) {
                const double lam = (grid[i] - grid[i - 1]) / (grid[i + 1] - grid[i - 1]);
                if (k[i] < (1.0 - lam) * k[i - 1] + lam * k[i + 1] - params.tol)
                    ++concave_viol[r];
            }
        }
        for (std::size_t h = 0; h < H; ++h) {
            double best = 0.0;
            for (std::size_t i = 0; i < T; ++i)
                best = std::max(best, std::pow(grid[i], -params.thetas[h]) * k[i]);
            theta_vals[r * H + h] = best;
        }
    });

    auto total = [](const std::vector<std::uint64_t>& v) {
        return static_cast<double>(std::accumulate(v.begin(), v.end(), std::uint64_t{0}));
    };
    rep.check("solver failures", static_cast<double>(std::accumulate(failed.begin(), failed.end(), 0)), "==", 0.0);
    rep.check("K above min(sup, t |p|_H)", total(bound_viol), "==", 0.0);
    rep.check("monotonicity violations beyond tol", total(mono_viol), "==", 0.0);
    rep.check("concavity violations beyond tol", total(concave_viol), "==", 0.0);

    ReportTable curve{"k_mean", {"t", "mean_k"}, {}};
    for (std::size_t i = 0; i < T; ++i) {
        double s = 0.0;
        for (std::uint64_t r = 0; r < R; ++r)
            s += kvals[r * T + i];
        curve.rows.push_back({grid[i], s / static_cast<double>(R)});
    }
    ReportTable hist{"theta_histogram", {"theta", "log10_lo", "log10_hi", "count"}, {}};
    for (std::size_t h = 0; h < H; ++h) {
        std::vector<double> v;
        std::uint64_t finite = 0;
        for (std::uint64_t r = 0; r < R; ++r) {
            const double x = theta_vals[r * H + h];
            if (std::isfinite(x) && x > 0.0) {
                ++finite;
                v.push_back(std::log10(x));
            }
        }
        rep.info("theta=" + fmt("%g", params.thetas[h]) + " fraction finite on the t grid",
                 static_cast<double>(finite) / static_cast<double>(R));
        if (v.empty())
            continue;
        const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
        const double lo = *lo_it;
        const double width = std::max(*hi_it - lo, 1e-12) / params.histogram_bins;
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(params.histogram_bins), 0);
        for (double x : v)
            ++counts[std::min<std::size_t>(counts.size() - 1, static_cast<std::size_t>((x - lo) / width))];
        for (std::size_t b = 0; b < counts.size(); ++b)
            hist.rows.push_back({params.thetas[h], lo + width * static_cast<double>(b),
                                 lo + width * static_cast<double>(b + 1), static_cast<double>(counts[b])});
    }
    rep.tables.push_back(std::move(curve));
    rep.tables.push_back(std::move(hist));
    return rep;
}

} // namespace interspace
