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
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace interspace {

/// One assertable claim: estimate `relation` bound, judged with the stated margin.
struct ReportItem {
    std::string name;
    double estimate = 0.0;
    double standard_error = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    std::string relation = "<="; // "<=", ">=", "==", ">" or "info"
    bool pass = true;
    std::string note;
};

/// Plot-ready numeric table, written as CSV.
struct ReportTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
    static constexpr int kSchemaVersion = 1;

    std::string name;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::uint64_t replicates = 0;
    std::vector<ReportItem> items;
    std::vector<ReportTable> tables;
    nlohmann::json extra = nlohmann::json::object();
    double wall_seconds = 0.0; // kept out of to_json so reports compare byte for byte

    bool passed() const noexcept;

    /// Add a judged item; pass is computed from relation, bound and margin.
    ReportItem& check(std::string item_name, double estimate, std::string relation, double bound, double margin = 0.0,
                      double standard_error = 0.0, std::string note = {});
    ReportItem& info(std::string item_name, double estimate, double standard_error = 0.0, std::string note = {});

    nlohmann::json to_json() const;
    std::string dump() const;

    /// Writes <stem>.json, <stem>.<table>.csv and <stem>.timing.json into dir.
    std::vector<std::filesystem::path> write(const std::filesystem::path& dir, const std::string& stem) const;
};

std::string table_to_csv(const ReportTable& t);

} // namespace interspace
