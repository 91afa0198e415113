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

#include "risim/runner/output.hpp"

#include "risim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace risim::runner
{
    void CsvTable::add_row(std::vector<std::string> row)
    {
        if (row.size() != header.size())
            throw std::logic_error("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                                   std::to_string(header.size()));
        rows.push_back(std::move(row));
    }

    std::string CsvTable::to_string() const
    {
        std::string out;
        const auto line = [&out](const std::vector<std::string> &cells)
        {
            for (std::size_t i = 0; i < cells.size(); ++i)
            {
                if (i)
                    out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto &r : rows)
            line(r);
        return out;
    }

    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        if (v == 0.0)
            return "0"; // Folds -0
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return buf;
    }

    std::string format_integer(long long v) { return std::to_string(v); }

    CsvTable parse_csv(const std::string &text)
    {
        CsvTable t;
        std::istringstream in(text);
        std::string line;
        bool first = true;
        while (std::getline(in, line))
        {
            std::vector<std::string> cells;
            std::string cell;
            std::istringstream ls(line);
            while (std::getline(ls, cell, ','))
                cells.push_back(cell);
            if (first)
                t.header = cells, first = false;
            else
                t.rows.push_back(cells);
        }
        return t;
    }

    void write_text(const std::string &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw invalid_input("cannot write '" + path + "'");
        out << text;
        if (!out)
            throw invalid_input("write to '" + path + "' failed");
    }

    void write_csv(const std::string &path, const CsvTable &table) { write_text(path, table.to_string()); }

    std::string hash_hex(std::uint64_t h)
    {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
        return buf;
    }

    nlohmann::json Manifest::to_json() const
    {
        nlohmann::json j;
        j["tool"] = "risim";
        j["tool_version"] = tool_version;
        j["scenario_hash"] = "fnv1a64:" + hash_hex(scenario_hash);
        j["seed"] = seed;
        j["experiments"] = nlohmann::json::array();
        for (const auto &e : experiments)
        {
            nlohmann::json x;
            x["name"] = e.name;
            x["files"] = nlohmann::json::array();
            for (const auto &[file, table] : e.files)
                x["files"].push_back({{"path", file}, {"columns", table.header}, {"rows", table.rows.size()}});
            x["summary"] = e.summary;
            j["experiments"].push_back(x);
        }
        return j;
    }

    void write_outputs(const std::string &dir, const Manifest &manifest)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw invalid_input("cannot create output directory '" + dir + "': " + ec.message());
        for (const auto &e : manifest.experiments)
            for (const auto &[file, table] : e.files)
                write_csv((std::filesystem::path(dir) / file).string(), table);
        write_text((std::filesystem::path(dir) / "manifest.json").string(), manifest.to_json().dump(2) + "\n");
    }
}
