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

#include "interspace/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace interspace {

namespace {

nlohmann::json number(double x)
{
    if (std::isnan(x))
        return nullptr;
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return x;
}

bool judge(double est, const std::string& rel, double bound, double margin)
{
    if (rel == "info")
        return true;
    if (std::isnan(est) || std::isnan(bound))
        return false;
    if (rel == "<=")
        return est <= bound + margin;
    if (rel == ">=")
        return est >= bound - margin;
    if (rel == ">")
        return est > bound - margin;
    if (rel == "==")
        return std::abs(est - bound) <= margin;
    throw std::invalid_argument("unknown relation '" + rel + "'");
}

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

bool ExperimentReport::passed() const noexcept
{
    for (const auto& it : items)
        if (!it.pass)
            return false;
    return true;
}

ReportItem& ExperimentReport::check(std::string item_name, double estimate, std::string relation, double bound,
                                    double margin, double standard_error, std::string note)
{
    ReportItem it;
    it.pass = judge(estimate, relation, bound, margin);
    it.name = std::move(item_name);
    it.estimate = estimate;
    it.relation = std::move(relation);
    it.bound = bound;
    it.margin = margin;
    it.standard_error = standard_error;
    it.note = std::move(note);
    items.push_back(std::move(it));
    return items.back();
}

ReportItem& ExperimentReport::info(std::string item_name, double estimate, double standard_error, std::string note)
{
    return check(std::move(item_name), estimate, "info", std::nan(""), 0.0, standard_error, std::move(note));
}

nlohmann::json ExperimentReport::to_json() const
{
    nlohmann::json j;
    j["format"] = "interspace-report";
    j["version"] = kSchemaVersion;
    j["name"] = name;
    j["config"] = config;
    j["seed"] = seed;
    j["replicates"] = replicates;
    j["passed"] = passed();
    auto arr = nlohmann::json::array();
    for (const auto& it : items) {
        nlohmann::json o{{"name", it.name},
                         {"estimate", number(it.estimate)},
                         {"standard_error", number(it.standard_error)},
                         {"relation", it.relation},
                         {"bound", number(it.bound)},
                         {"margin", number(it.margin)},
                         {"pass", it.pass}};
        if (!it.note.empty())
            o["note"] = it.note;
        arr.push_back(std::move(o));
    }
    j["items"] = std::move(arr);
    auto tabs = nlohmann::json::array();
    for (const auto& t : tables)
        tabs.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows.size()}});
    j["tables"] = std::move(tabs);
    if (!extra.empty())
        j["extra"] = extra;
    return j;
}

std::string ExperimentReport::dump() const
{
    return to_json().dump(2) + "\n";
}

std::string table_to_csv(const ReportTable& t)
{
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out += (c ? "," : "") + t.columns[c];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out += (c ? "," : "") + format_double(row[c]);
        out += "\n";
    }
    return out;
}

std::vector<std::filesystem::path> ExperimentReport::write(const std::filesystem::path& dir, const std::string& stem) const
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto put = [&](const std::filesystem::path& p, const std::string& text) {
        std::ofstream os(p, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot write " + p.string());
        os << text;
        written.push_back(p);
    };
    put(dir / (stem + ".json"), dump());
    for (const auto& t : tables)
        put(dir / (stem + "." + t.name + ".csv"), table_to_csv(t));
    put(dir / (stem + ".timing.json"), nlohmann::json{{"name", name}, {"wall_seconds", wall_seconds}}.dump(2) + "\n");
    return written;
}

} // namespace interspace
