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

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"

int main(int argc, char** argv)
{
    using namespace interspace;
    CLI::App app{"Intermediate-space norms for Gaussian series: schedules, norms and Monte Carlo checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    unsigned workers = 0;
    bool quiet = false;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"sample", "Sample a partial sum X_N and its coefficients"},
        {"blocks", "Build and save a certified block schedule"},
        {"norms", "Print sup, H1, Hoelder, sum-block and sup-block norms of a path or coefficient file"},
        {"verify-key-inequality", "Block exceedance frequencies against 2^-k"},
        {"zn-convergence", "Z_n trajectories, tail jumps and small-ball probabilities"},
        {"fernique", "exp(rho |X|^2) moments with a stability diagnostic"},
        {"tightness", "Tail slope of log P(|X| > r/eps) against eps^-2"},
        {"concentration", "Gaussian mass of a symmetric convex body versus its section"},
        {"block-variance", "Dyadic block variance profile of the Schauder expansion"},
        {"ciesielski", "Sup-block norm versus the Ciesielski sequence norm"},
        {"kfunctional", "K-functional curves and theta-norm histograms"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "INI config file");
        sub->add_option("-s,--set", overrides, "Override a config entry: section.key=value")->take_all();
        sub->add_option("-o,--out", out_dir, "Output directory (default: run.output_dir, then $INTERSPACE_OUT_DIR)");
        sub->add_option("-w,--workers", workers, "Worker threads; 0 uses all cores. Never changes results");
        sub->add_flag("-q,--quiet", quiet, "Only print the pass/fail summary line");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kInvalidConfig;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        cli::Context ctx;
        if (!config_path.empty())
            ctx.config = RunConfig::from_file(config_path);
        for (const auto& o : overrides)
            ctx.config.set(o);
        if (app.get_subcommands().front()->count("--workers") > 0)
            ctx.workers = workers;
        ctx.quiet = quiet;
        ctx.out_dir = cli::resolve_out_dir(out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir), ctx.config);
        return cli::run_command(name, ctx, std::cout);
    } catch (const std::invalid_argument& e) {
        std::cerr << "interspace " << name << ": invalid configuration: " << e.what() << "\n";
        return cli::kInvalidConfig;
    } catch (const std::out_of_range& e) {
        std::cerr << "interspace " << name << ": invalid configuration: " << e.what() << "\n";
        return cli::kInvalidConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "interspace " << name << ": malformed JSON input: " << e.what() << "\n";
        return cli::kInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "interspace " << name << ": " << e.what() << "\n";
        return cli::kFail;
    }
}
