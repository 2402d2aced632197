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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace interspace {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// key = value sections. Every section and key is checked against a fixed
/// schema; unknown ones are rejected. Lists are comma separated, vectors of
/// vectors use ';' between rows.
class RunConfig {
public:
    static RunConfig from_string(const std::string& text);
    static RunConfig from_file(const std::filesystem::path& path);

    /// Override "section.key=value"; same validation as the file.
    void set(const std::string& assignment);
    void set(const std::string& section, const std::string& key, const std::string& value);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;
    std::vector<std::vector<double>> get_matrix(const std::string& section, const std::string& key) const;

    /// All entries as strings, grouped by section.
    nlohmann::json to_json() const;

    static const std::map<std::string, std::vector<std::string>>& schema();

private:
    std::map<std::string, std::map<std::string, std::string>> values_;
};

} // namespace interspace
