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

#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "interspace/experiments.hpp"
#include "interspace/haar.hpp"
#include "interspace/norms.hpp"
#include "interspace/paths.hpp"

namespace interspace::cli {

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream is(p, std::ios::binary);
    if (!is)
        throw ConfigError("cannot read " + p.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunParams run_params(const RunConfig& cfg, const Context& ctx, std::uint64_t default_replicates, int default_level = 10)
{
    RunParams r;
    r.replicates = cfg.get_u64("run", "replicates", default_replicates);
    r.seed = cfg.get_u64("run", "seed", 1);
    r.level = static_cast<int>(cfg.get_int("run", "level", default_level));
    r.pinned_zero = cfg.get_bool("run", "pinned_zero", false);
    r.workers = ctx.workers.value_or(static_cast<unsigned>(cfg.get_u64("run", "workers", 0)));
    return r;
}

unsigned workers_of(const Context& ctx)
{
    return ctx.workers.value_or(static_cast<unsigned>(ctx.config.get_u64("run", "workers", 0)));
}

int finish(ExperimentReport rep, const Context& ctx, const std::string& stem, std::ostream& out)
{
    rep.config["run_config"] = ctx.config.to_json();
    const auto files = rep.write(ctx.out_dir, stem);
    if (!ctx.quiet) {
        for (const auto& it : rep.items)
            out << (it.pass ? "PASS  " : "FAIL  ") << it.name << ": " << it.estimate
                << (it.relation == "info" ? std::string() : " " + it.relation + " " + std::to_string(it.bound)) << "\n";
        for (const auto& f : files)
            out << "wrote " << f.string() << "\n";
    }
    out << rep.name << ": " << (rep.passed() ? "PASS" : "FAIL") << "\n";
    return rep.passed() ? kPass : kFail;
}

template <class F>
ExperimentReport timed(F&& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    auto rep = f();
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

bool is_json(const std::filesystem::path& p)
{
    return p.extension() == ".json";
}

DyadicPath read_path(const std::filesystem::path& p)
{
    if (is_json(p))
        return path_from_json(slurp(p));
    std::ifstream is(p);
    if (!is)
        throw ConfigError("cannot read " + p.string());
    return read_path_csv(is);
}

CoeffSeq read_coeffs(const std::filesystem::path& p)
{
    if (is_json(p))
        return coeffs_from_json(slurp(p));
    std::ifstream is(p);
    if (!is)
        throw ConfigError("cannot read " + p.string());
    return read_coeffs_csv(is);
}

// Coefficients of a grid path in the model's basis: <p, e_n>_H.
CoeffSeq coefficients_of(const DyadicPath& p, const BasisModel& model)
{
    if (model.kind() == ModelKind::SchauderBm)
        return analyze(p);
    const std::uint64_t n = model.effective_terms(p.level());
    std::vector<double> xi(n);
    for (std::uint64_t i = 1; i <= n; ++i)
        xi[i - 1] = h1_inner(p, model.basis_path(i, p.level()));
    return CoeffSeq(std::move(xi));
}

int cmd_sample(const Context& ctx, std::ostream& out)
{
    const auto& cfg = ctx.config;
    const auto model = model_from(cfg);
    const auto run = run_params(cfg, ctx, 1);
    const std::uint64_t truncation = cfg.get_u64("sample", "truncation", model.effective_terms(run.level));
    const std::string format = cfg.get_string("sample", "format", "csv");
    if (format != "csv" && format != "json")
        throw ConfigError("sample.format must be csv or json");
    std::filesystem::create_directories(ctx.out_dir);
    const auto gs = run.pinned_zero ? GaussianStream::pinned_zero()
                                    : GaussianStream({run.seed, 0, StreamPurpose::Coefficients, 0});
    const auto draw = sample_partial_sum(model, truncation, run.level, gs);
    const auto path_file = ctx.out_dir / ("sample.path." + format);
    const auto coeff_file = ctx.out_dir / ("sample.coeffs." + format);
    std::ofstream ps(path_file);
    std::ofstream cs(coeff_file);
    if (format == "csv") {
        write_path_csv(ps, draw.path);
        write_coeffs_csv(cs, draw.gaussians);
    } else {
        ps << path_to_json(draw.path) << "\n";
        cs << coeffs_to_json(draw.gaussians) << "\n";
    }
    if (!ctx.quiet)
        out << "wrote " << path_file.string() << "\nwrote " << coeff_file.string() << "\n";
    out << "sample: sup " << sup_norm(draw.path) << ", N = " << draw.gaussians.size() << "\n";
    return kPass;
}

int cmd_blocks(const Context& ctx, std::ostream& out)
{
    const auto model = model_from(ctx.config);
    const auto s = schedule_from(ctx.config, model, workers_of(ctx));
    std::filesystem::create_directories(ctx.out_dir);
    const auto file = ctx.out_dir / "schedule.json";
    std::ofstream(file) << schedule_to_json(s) << "\n";
    out << "cuts:";
    for (auto c : s.cuts)
        out << " " << c;
    out << "\n";
    if (!ctx.quiet)
        out << "wrote " << file.string() << "\n";
    return kPass;
}

int cmd_norms(const Context& ctx, std::ostream& out)
{
    const auto& cfg = ctx.config;
    const auto model = model_from(cfg);
    const std::string input = cfg.get_string("norms", "input", "");
    if (input.empty())
        throw ConfigError("norms.input is required (a path or coefficient file)");
    const std::string kind = cfg.get_string("norms", "input_kind", "path");
    const int level = static_cast<int>(cfg.get_int("run", "level", 10));
    CoeffSeq xi;
    std::optional<DyadicPath> path;
    if (kind == "path") {
        path = read_path(input);
        xi = coefficients_of(*path, model);
    } else if (kind == "coeffs") {
        xi = read_coeffs(input);
        path = model.synthesizer(level, xi.size()).path(1, xi.values());
    } else {
        throw ConfigError("norms.input_kind must be path or coeffs");
    }
    const auto schedule = schedule_from(cfg, model, workers_of(ctx));
    const double holder_alpha = cfg.get_double("norms", "holder_alpha", schedule.alpha);
    const int synth_level = path->level();
    const auto blocks = block_sup_norms(xi, schedule, model, synth_level);
    nlohmann::json j{
        {"format", "interspace-norms"},
        {"version", 1},
        {"model", model.name()},
        {"level", synth_level},
        {"sup", sup_norm(*path)},
        {"h1", h1_seminorm(*path)},
        {"rkhs_l2", rkhs_norm(xi)},
        {"holder", {{"alpha", holder_alpha}, {"value", holder_quotient(*path, holder_alpha).value}}},
        {"sum_block", sum_block_from(blocks, schedule.alpha)},
        {"sup_block", sup_block_from(blocks, schedule.alpha)},
        {"block_sup_norms", blocks},
        {"schedule_cuts", schedule.cuts},
    };
    std::filesystem::create_directories(ctx.out_dir);
    std::ofstream(ctx.out_dir / "norms.json") << j.dump(2) << "\n";
    out << j.dump(2) << "\n";
    return kPass;
}

} // namespace

std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag, const RunConfig& cfg)
{
    if (flag)
        return *flag;
    if (cfg.has("run", "output_dir"))
        return cfg.get_string("run", "output_dir", "");
    if (const char* env = std::getenv("INTERSPACE_OUT_DIR"); env != nullptr && *env != '\0')
        return env;
    return "interspace-out";
}

BasisModel model_from(const RunConfig& cfg)
{
    const auto kind = model_kind_from_string(cfg.get_string("model", "kind", "schauder-bm"));
    std::optional<std::uint64_t> terms;
    if (cfg.has("model", "terms"))
        terms = cfg.get_u64("model", "terms", 0);
    if (terms && *terms == 0)
        throw ConfigError("model.terms must be positive");
    switch (kind) {
    case ModelKind::SchauderBm:
        return BasisModel::schauder_bm(terms);
    case ModelKind::KlSineBm:
        return BasisModel::kl_sine_bm(terms);
    case ModelKind::KlBridge:
        return BasisModel::kl_bridge(terms);
    case ModelKind::Custom: {
        const std::string file = cfg.get_string("model", "file", "");
        if (file.empty())
            throw ConfigError("model.file is required for custom models");
        return BasisModel::load_custom(file);
    }
    }
    throw ConfigError("unsupported model kind");
}

BlockSchedule schedule_from(const RunConfig& cfg, const BasisModel& model, unsigned workers)
{
    if (cfg.has("schedule", "file"))
        return schedule_from_json(slurp(cfg.get_string("schedule", "file", "")));
    const double alpha = cfg.get_double("schedule", "alpha", 0.3);
    const auto variant = variant_from_string(cfg.get_string("schedule", "variant", "sum"));
    const double eta = cfg.get_double("schedule", "eta", 0.1);
    const auto blocks = cfg.get_u64("schedule", "blocks", 8);
    TailParams tail;
    tail.replicates = cfg.get_u64("schedule", "tail_replicates", 2000);
    tail.level = static_cast<int>(cfg.get_int("schedule", "tail_level", cfg.get_int("run", "level", 10)));
    if (cfg.has("schedule", "j_max"))
        tail.j_max = cfg.get_u64("schedule", "j_max", 0);
    tail.seed = cfg.get_u64("run", "seed", 1);
    tail.use_hint = cfg.get_bool("schedule", "use_hint", true);
    tail.confidence = cfg.get_double("schedule", "confidence", 0.99);
    tail.workers = workers;
    return build_schedule(model, alpha, variant, eta, blocks, tail);
}

int run_command(const std::string& name, const Context& ctx, std::ostream& out)
{
    const auto& cfg = ctx.config;
    if (name == "sample")
        return cmd_sample(ctx, out);
    if (name == "blocks")
        return cmd_blocks(ctx, out);
    if (name == "norms")
        return cmd_norms(ctx, out);

    if (name == "verify-key-inequality") {
        const auto model = model_from(cfg);
        const auto schedule = schedule_from(cfg, model, workers_of(ctx));
        const auto run = run_params(cfg, ctx, 20000);
        return finish(timed([&] { return verify_key_inequality(model, schedule, run); }), ctx, name, out);
    }
    if (name == "zn-convergence") {
        const auto model = model_from(cfg);
        const auto schedule = schedule_from(cfg, model, workers_of(ctx));
        ZnParams p;
        p.run = run_params(cfg, ctx, 10000);
        p.quantiles = cfg.get_list(name, "quantiles", p.quantiles);
        p.bracket_tol = cfg.get_double(name, "bracket_tol", p.bracket_tol);
        p.bc_eps = cfg.get_list(name, "bc_eps", p.bc_eps);
        return finish(timed([&] { return zn_convergence(model, schedule, p); }), ctx, name, out);
    }
    if (name == "fernique") {
        const auto model = model_from(cfg);
        FerniqueParams p;
        p.run = run_params(cfg, ctx, 100000);
        p.norm = norm_spec_from_string(cfg.get_string(name, "norm", "sup"));
        p.rho_grid = cfg.get_list(name, "rho_grid", p.rho_grid);
        p.stability = cfg.get_double(name, "stability", p.stability);
        if (p.norm == NormSpec::SumBlock || p.norm == NormSpec::SupBlock)
            p.schedule = schedule_from(cfg, model, workers_of(ctx));
        return finish(timed([&] { return estimate_fernique(model, p); }), ctx, name, out);
    }
    if (name == "tightness") {
        const auto model = model_from(cfg);
        TightnessParams p;
        p.run = run_params(cfg, ctx, 1000000);
        p.norm = norm_spec_from_string(cfg.get_string(name, "norm", "sup"));
        p.radius = cfg.get_double(name, "radius", p.radius);
        p.eps_grid = cfg.get_list(name, "eps_grid", {});
        p.min_hits = cfg.get_u64(name, "min_hits", p.min_hits);
        p.slope_tol = cfg.get_double(name, "slope_tol", p.slope_tol);
        p.rho_grid = cfg.get_list(name, "rho_grid", p.rho_grid);
        if (p.norm == NormSpec::SumBlock || p.norm == NormSpec::SupBlock)
            p.schedule = schedule_from(cfg, model, workers_of(ctx));
        return finish(timed([&] { return tightness_experiment(model, p); }), ctx, name, out);
    }
    if (name == "concentration") {
        ConcentrationParams p;
        p.run = run_params(cfg, ctx, 100000);
        p.dim = static_cast<int>(cfg.get_int(name, "dim", 2));
        p.subspace = cfg.get_matrix(name, "subspace");
        p.body.kind = body_kind_from_string(cfg.get_string(name, "body", "box"));
        p.body.half_sides = cfg.get_list(name, "half_sides", {});
        p.body.normals = cfg.get_matrix(name, "normals");
        p.body.offsets = cfg.get_list(name, "offsets", {});
        return finish(timed([&] { return concentration_check(p); }), ctx, name, out);
    }
    if (name == "block-variance") {
        BlockVarianceParams p;
        p.run = run_params(cfg, ctx, 100000);
        p.k_min = static_cast<int>(cfg.get_int(name, "k_min", p.k_min));
        p.k_max = static_cast<int>(cfg.get_int(name, "k_max", p.k_max));
        p.lambda = cfg.get_double(name, "lambda", p.lambda);
        p.envelope_from = static_cast<int>(cfg.get_int(name, "envelope_from", p.envelope_from));
        return finish(timed([&] { return block_variance_profile(p); }), ctx, name, out);
    }
    if (name == "ciesielski") {
        if (cfg.has(name, "input")) {
            const auto xi = read_coeffs(cfg.get_string(name, "input", ""));
            const double alpha = cfg.get_double(name, "alpha", 0.3);
            const int level = static_cast<int>(cfg.get_int(name, "level", 12));
            return finish(timed([&] { return ciesielski_equivalence_check(xi, alpha, level); }), ctx, name, out);
        }
        CiesielskiBatchParams p;
        p.count = cfg.get_u64(name, "count", p.count);
        p.max_block = static_cast<int>(cfg.get_int(name, "max_block", p.max_block));
        p.alphas = cfg.get_list(name, "alphas", p.alphas);
        p.seed = cfg.get_u64("run", "seed", p.seed);
        p.tol = cfg.get_double(name, "tol", p.tol);
        return finish(timed([&] { return ciesielski_random_check(p); }), ctx, name, out);
    }
    if (name == "kfunctional") {
        const auto model = model_from(cfg);
        KFunctionalExperimentParams p;
        p.run = run_params(cfg, ctx, 100, 8);
        p.thetas = cfg.get_list(name, "thetas", p.thetas);
        p.t_grid = cfg.get_list(name, "t_grid", {});
        p.tol = cfg.get_double(name, "tol", p.tol);
        p.histogram_bins = static_cast<int>(cfg.get_int(name, "bins", p.histogram_bins));
        if (p.histogram_bins < 1)
            throw ConfigError("kfunctional.bins must be positive");
        return finish(timed([&] { return kfunctional_experiment(model, p); }), ctx, name, out);
    }
    throw ConfigError("unknown subcommand " + name);
}

} // namespace interspace::cli
