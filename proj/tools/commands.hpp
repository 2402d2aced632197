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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "interspace/blocks.hpp"
#include "interspace/config.hpp"
#include "interspace/models.hpp"
#include "interspace/report.hpp"

namespace interspace::cli {

enum ExitCode { kPass = 0, kFail = 1, kInvalidConfig = 2 };

struct Context {
    RunConfig config;
    std::filesystem::path out_dir;
    std::optional<unsigned> workers;
    bool quiet = false;
};

BasisModel model_from(const RunConfig& cfg);
BlockSchedule schedule_from(const RunConfig& cfg, const BasisModel& model, unsigned workers);
std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag, const RunConfig& cfg);

/// Runs one subcommand; returns the process exit status.
int run_command(const std::string& name, const Context& ctx, std::ostream& out);

} // namespace interspace::cli
