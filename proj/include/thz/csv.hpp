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

#ifndef THZ_CSV_HPP
#define THZ_CSV_HPP

#include <ostream>
#include <string>
#include <vector>

namespace thz
{
    // Comma-separated table with '#' metadata lines ahead of the header
    class CsvTable
    {
    public:
        explicit CsvTable(std::vector<std::string> header);

        // Strings are written verbatim; numbers with 9 significant digits
        class Row
        {
        public:
            Row &operator<<(const std::string &s);
            Row &operator<<(const char *s) { return *this << std::string(s); }
            Row &operator<<(double v);
            Row &operator<<(int v);

        private:
            friend class CsvTable;
            std::vector<std::string> cells_;
        };

        void add(const Row &row);
        void add_metadata(const std::string &line);

        const std::vector<std::string> &header() const { return header_; }
        const std::vector<std::vector<std::string>> &rows() const { return rows_; }

        void write(std::ostream &out) const;

    private:
        std::vector<std::string> metadata_;
        std::vector<std::string> header_;
        std::vector<std::vector<std::string>> rows_;
    };
}

#endif
