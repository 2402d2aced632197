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

#include "interspace/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace interspace {

const std::map<std::string, std::vector<std::string>>& RunConfig::schema()
{
    static const std::map<std::string, std::vector<std::string>> s{
        {"run", {"seed", "replicates", "workers", "level", "output_dir", "pinned_zero"}},
        {"model", {"kind", "terms", "file"}},
        {"schedule",
         {"alpha", "variant", "eta", "blocks", "tail_replicates", "tail_level", "j_max", "use_hint", "confidence", "file"}},
        {"sample", {"truncation", "format"}},
        {"norms", {"input", "input_kind", "holder_alpha"}},
        {"verify-key-inequality", {}},
        {"zn-convergence", {"quantiles", "bracket_tol", "bc_eps"}},
        {"fernique", {"norm", "rho_grid", "stability"}},
        {"tightness", {"norm", "radius", "eps_grid", "min_hits", "slope_tol", "rho_grid"}},
        {"concentration", {"dim", "subspace", "body", "half_sides", "normals", "offsets"}},
        {"block-variance", {"k_min", "k_max", "lambda", "envelope_from"}},
        {"ciesielski", {"input", "alpha", "level", "alphas", "count", "max_block", "tol"}},
        {"kfunctional", {"thetas", "t_grid", "tol", "bins", "input"}},
    };
    return s;
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value)
{
    const auto& s = schema();
    const auto it = s.find(section);
    if (it == s.end())
        throw ConfigError("unknown config section [" + section + "]");
    if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    values_[section][key] = value;
}

void RunConfig::set(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("override must look like section.key=value, got '" + assignment + "'");
    set(assignment.substr(0, dot), assignment.substr(dot + 1, eq - dot - 1), assignment.substr(eq + 1));
}

RunConfig RunConfig::from_string(const std::string& text)
{
    boost::property_tree::ptree tree;
    std::istringstream is(text);
    try {
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("key '" + section + "' appears outside any section");
        if (schema().count(section) == 0)
            throw ConfigError("unknown config section [" + section + "]");
        cfg.values_[section];
        for (const auto& [key, leaf] : body)
            cfg.set(section, key, leaf.data());
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return from_string(ss.str());
}

bool RunConfig::has(const std::string& section, const std::string& key) const
{
    const auto it = values_.find(section);
    return it != values_.end() && it->second.count(key) != 0;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key, const std::string& fallback) const
{
    if (!has(section, key))
        return fallback;
    return values_.at(section).at(key);
}

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& raw, const std::string& where)
{
    const std::string s = trim(raw);
    if (s == "inf" || s == "+inf")
        return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ConfigError(where + ": '" + raw + "' is not a number");
    return v;
}

template <class Int>
Int parse_int(const std::string& raw, const std::string& where)
{
    const std::string s = trim(raw);
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ConfigError(where + ": '" + raw + "' is not a valid integer");
    return v;
}

std::vector<double> parse_list(const std::string& raw, const std::string& where)
{
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty())
            out.push_back(parse_double(item, where));
    return out;
}

} // namespace

double RunConfig::get_double(const std::string& section, const std::string& key, double fallback) const
{
    return has(section, key) ? parse_double(values_.at(section).at(key), section + "." + key) : fallback;
}

std::int64_t RunConfig::get_int(const std::string& section, const std::string& key, std::int64_t fallback) const
{
    return has(section, key) ? parse_int<std::int64_t>(values_.at(section).at(key), section + "." + key) : fallback;
}

std::uint64_t RunConfig::get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const
{
    return has(section, key) ? parse_int<std::uint64_t>(values_.at(section).at(key), section + "." + key) : fallback;
}

bool RunConfig::get_bool(const std::string& section, const std::string& key, bool fallback) const
{
    if (!has(section, key))
        return fallback;
    const std::string v = trim(values_.at(section).at(key));
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError(section + "." + key + ": '" + v + "' is not a boolean");
}

std::vector<double> RunConfig::get_list(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const
{
    return has(section, key) ? parse_list(values_.at(section).at(key), section + "." + key) : fallback;
}

std::vector<std::vector<double>> RunConfig::get_matrix(const std::string& section, const std::string& key) const
{
    std::vector<std::vector<double>> out;
    if (!has(section, key))
        return out;
    std::stringstream ss(values_.at(section).at(key));
    std::string row;
    while (std::getline(ss, row, ';'))
        if (!trim(row).empty())
            out.push_back(parse_list(row, section + "." + key));
    return out;
}

nlohmann::json RunConfig::to_json() const
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [section, kv] : values_)
        for (const auto& [k, v] : kv)
            j[section][k] = v;
    return j;
}

} // namespace interspace
