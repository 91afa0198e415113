// SPDX-License-Identifier: Apache-2.0
//
// risim - link-level simulator for reconfigurable intelligent surfaces
// Copyright (C) 2026 The risim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace risim::runner
{
    // In-memory CSV table; cells are preformatted text
    struct CsvTable
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        void add_row(std::vector<std::string> row);
        std::string to_string() const; // LF line endings, no quoting needed for numeric cells
    };

    // "%.12g", with "inf", "-inf" and "nan" spelled out
    std::string format_number(double v);
    std::string format_integer(long long v);

    CsvTable parse_csv(const std::string &text);

    void write_text(const std::string &path, const std::string &text);
    void write_csv(const std::string &path, const CsvTable &table);

    // One experiment: its files and a JSON summary of headline numbers
    struct ExperimentOutput
    {
        std::string name;
        std::vector<std::pair<std::string, CsvTable>> files; // File name, table
        nlohmann::json summary = nlohmann::json::object();
    };

    struct Manifest
    {
        std::string tool_version;
        std::uint64_t scenario_hash = 0;
        std::uint64_t seed = 0;
        std::vector<ExperimentOutput> experiments;

        nlohmann::json to_json() const;
    };

    std::string hash_hex(std::uint64_t h);

    // Writes every experiment file plus manifest.json into `dir` (created if missing)
    void write_outputs(const std::string &dir, const Manifest &manifest);
}
