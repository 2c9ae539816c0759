// SPDX-License-Identifier: Apache-2.0
//
// thzsim - wideband terahertz massive MIMO-OFDM simulation and estimation
// Copyright (C) 2026 The thzsim authors
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

#include "thz/csv.hpp"

#include <cmath>
#include <stdexcept>

#include "thz/config.hpp"

namespace thz
{
    CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header))
    {
        if (header_.empty())
            throw std::invalid_argument("CsvTable: empty header");
    }

    CsvTable::Row &CsvTable::Row::operator<<(const std::string &s)
    {
        if (s.find_first_of(",\n\"") != std::string::npos)
            throw std::invalid_argument("CsvTable: cell needs quoting: " + s);
        cells_.push_back(s);
        return *this;
    }

    CsvTable::Row &CsvTable::Row::operator<<(double v)
    {
        cells_.push_back(std::isnan(v) ? "nan" : format_number(v));
        return *this;
    }

    CsvTable::Row &CsvTable::Row::operator<<(int v)
    {
        cells_.push_back(std::to_string(v));
        return *this;
    }

    void CsvTable::add(const Row &row)
    {
        if (row.cells_.size() != header_.size())
            throw std::invalid_argument("CsvTable: row width does not match the header");
        rows_.push_back(row.cells_);
    }

    void CsvTable::add_metadata(const std::string &line) { metadata_.push_back(line); }

    void CsvTable::write(std::ostream &out) const
    {
        auto join = [&](const std::vector<std::string> &cells) {
            for (size_t i = 0; i < cells.size(); ++i)
                out << (i ? "," : "") << cells[i];
            out << '\n';
        };
        for (const auto &m : metadata_)
            out << "# " << m << '\n';
        join(header_);
        for (const auto &r : rows_)
            join(r);
    }
}
