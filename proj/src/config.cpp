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

#include "thz/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace thz
{
    ConfigError::ConfigError(std::string key, const std::string &message, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + key + ": " + message
                                      : key + ": " + message),
          key_(std::move(key)), line_(line)
    {
    }

    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        std::vector<std::string> split(const std::string &s, char sep)
        {
            std::vector<std::string> out;
            std::string item;
            std::istringstream in(s);
            while (std::getline(in, item, sep))
                out.push_back(trim(item));
            return out;
        }

        double parse_double(const std::string &key, const std::string &text, int line)
        {
            const std::string t = trim(text);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
                throw ConfigError(key, "expected a number, got '" + text + "'", line);
            return v;
        }

        template <class Int>
        Int parse_integer(const std::string &key, const std::string &text, int line)
        {
            const std::string t = trim(text);
            Int v{};
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
                throw ConfigError(key, "expected an integer, got '" + text + "'", line);
            return v;
        }

        bool parse_bool(const std::string &key, const std::string &text, int line)
        {
            std::string t = trim(text);
            std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return char(std::tolower(c)); });
            if (t == "true" || t == "1" || t == "yes" || t == "on")
                return true;
            if (t == "false" || t == "0" || t == "no" || t == "off")
                return false;
            throw ConfigError(key, "expected a boolean, got '" + text + "'", line);
        }

        std::string format_list(const std::vector<double> &v)
        {
            std::string s;
            for (size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + format_number(v[i]);
            return s;
        }

        std::string format_bool(bool b) { return b ? "true" : "false"; }

        const std::vector<std::string> kEstimators{"ls", "nbomp", "omp", "gsomp", "gsomp-ss", "crlb"};

        struct Key
        {
            std::function<void(ExperimentConfig &, const std::string &, const std::string &, int)> set;
            std::function<std::string(const ExperimentConfig &)> get;
        };

        template <class T>
        Key int_key(T ExperimentConfig::*field)
        {
            return {[field](ExperimentConfig &c, const std::string &k, const std::string &v, int line) {
                        c.*field = parse_integer<T>(k, v, line);
                    },
                    [field](const ExperimentConfig &c) { return std::to_string(c.*field); }};
        }

        Key double_key(double ExperimentConfig::*field, double scale = 1.0)
        {
            return {[field, scale](ExperimentConfig &c, const std::string &k, const std::string &v, int line) {
                        c.*field = parse_double(k, v, line) * scale;
                    },
                    [field, scale](const ExperimentConfig &c) { return format_number(c.*field / scale); }};
        }

        Key bool_key(bool ExperimentConfig::*field)
        {
            return {[field](ExperimentConfig &c, const std::string &k, const std::string &v, int line) {
                        c.*field = parse_bool(k, v, line);
                    },
                    [field](const ExperimentConfig &c) { return format_bool(c.*field); }};
        }

        Key list_key(std::vector<double> ExperimentConfig::*field)
        {
            return {[field](ExperimentConfig &c, const std::string &k, const std::string &v, int line) {
                        try
                        {
                            c.*field = parse_number_list(v);
                        }
                        catch (const ConfigError &e)
                        {
                            throw ConfigError(k, e.what(), line);
                        }
                    },
                    [field](const ExperimentConfig &c) { return format_list(c.*field); }};
        }

        const std::map<std::string, Key> &registry()
        {
            static const std::map<std::string, Key> keys = [] {
                std::map<std::string, Key> k;
                k["rows"] = int_key(&ExperimentConfig::rows);
                k["cols"] = int_key(&ExperimentConfig::cols);
                k["carrier_ghz"] = double_key(&ExperimentConfig::carrier, 1e9);
                k["bandwidth_ghz"] = double_key(&ExperimentConfig::bandwidth, 1e9);
                k["subcarriers"] = int_key(&ExperimentConfig::subcarriers);
                k["nsb"] = int_key(&ExperimentConfig::nsb);
                k["msb"] = int_key(&ExperimentConfig::msb);
                k["paths"] = int_key(&ExperimentConfig::paths);
                k["los"] = bool_key(&ExperimentConfig::los);
                k["element_gain"] = bool_key(&ExperimentConfig::element_gain);
                k["on_grid"] = bool_key(&ExperimentConfig::on_grid);
                k["min_separation"] = int_key(&ExperimentConfig::min_separation);
                k["distance_m"] = double_key(&ExperimentConfig::distance);
                k["gain_variance"] = double_key(&ExperimentConfig::gain_variance);
                k["azimuth_deg"] = double_key(&ExperimentConfig::azimuth_deg);
                k["polar_deg"] = double_key(&ExperimentConfig::polar_deg);
                k["power_dbm"] = double_key(&ExperimentConfig::power_dbm);
                k["noise_dbm_hz"] = double_key(&ExperimentConfig::noise_dbm_per_hz);
                k["pt_dbm"] = list_key(&ExperimentConfig::pt_dbm);
                k["snr_db"] = list_key(&ExperimentConfig::snr_db);
                k["distance_factors"] = list_key(&ExperimentConfig::distance_factors);
                k["grid_factor"] = int_key(&ExperimentConfig::grid_factor);
                k["user_grid_factor"] = int_key(&ExperimentConfig::user_grid_factor);
                k["training_fraction"] = double_key(&ExperimentConfig::training_fraction);
                k["rf_chains"] = int_key(&ExperimentConfig::rf_chains);
                k["epsilon_fraction"] = double_key(&ExperimentConfig::epsilon_fraction);
                k["prune"] = bool_key(&ExperimentConfig::prune);
                k["stride"] = int_key(&ExperimentConfig::stride);
                k["user_antennas"] = int_key(&ExperimentConfig::user_antennas);
                k["cdf_subcarrier"] = int_key(&ExperimentConfig::cdf_subcarrier);
                k["trials"] = int_key(&ExperimentConfig::trials);
                k["seed"] = int_key(&ExperimentConfig::seed);
                k["estimators"] = {[](ExperimentConfig &c, const std::string &key, const std::string &v, int line) {
                                       std::vector<std::string> names;
                                       for (const auto &n : split(v, ','))
                                       {
                                           if (std::find(kEstimators.begin(), kEstimators.end(), n) == kEstimators.end())
                                               throw ConfigError(key, "unknown estimator '" + n + "'", line);
                                           names.push_back(n);
                                       }
                                       c.estimators = names;
                                   },
                                   [](const ExperimentConfig &c) {
                                       std::string s;
                                       for (size_t i = 0; i < c.estimators.size(); ++i)
                                           s += (i ? "," : "") + c.estimators[i];
                                       return s;
                                   }};
                k["out"] = {[](ExperimentConfig &c, const std::string &, const std::string &v, int) { c.out = trim(v); },
                            [](const ExperimentConfig &c) { return c.out; }};
                return k;
            }();
            return keys;
        }
    }

    std::string format_number(double v)
    {
        if (v == 0.0)
            return "0"; // also folds -0
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return buf;
    }

    std::vector<double> parse_number_list(const std::string &text)
    {
        std::vector<double> out;
        for (const auto &item : split(text, ','))
        {
            const auto parts = split(item, ':');
            if (parts.size() == 1)
                out.push_back(parse_double("list", parts[0], 0));
            else if (parts.size() == 3)
            {
                const double a = parse_double("list", parts[0], 0);
                const double step = parse_double("list", parts[1], 0);
                const double b = parse_double("list", parts[2], 0);
                if (step == 0.0 || (b - a) / step < 0.0)
                    throw ConfigError("list", "range '" + item + "' does not reach its end");
                const long count = std::lround(std::floor((b - a) / step + 1e-9)) + 1;
                if (count > 100000)
                    throw ConfigError("list", "range '" + item + "' is too long");
                for (long i = 0; i < count; ++i)
                    out.push_back(a + double(i) * step);
            }
            else
                throw ConfigError("list", "expected a number or a:step:b, got '" + item + "'");
        }
        if (out.empty())
            throw ConfigError("list", "empty list");
        return out;
    }

    const std::vector<std::string> &subcommands()
    {
        static const std::vector<std::string> names{"gain",     "cdf-dict", "nmse",     "nmse-mu",
                                                    "rate-los", "rate-icsi", "rate-svd", "nearfield"};
        return names;
    }

    ExperimentConfig defaults_for(const std::string &subcommand)
    {
        const auto &names = subcommands();
        if (std::find(names.begin(), names.end(), subcommand) == names.end())
            throw ConfigError("subcommand", "unknown subcommand '" + subcommand + "'");

        ExperimentConfig c;
        c.subcommand = subcommand;
        if (subcommand == "gain")
        {
            c.rows = c.cols = 100;
            c.subcarriers = 18;
            c.los = true;
            c.paths = 1;
        }
        else if (subcommand == "cdf-dict")
        {
            c.grid_factor = 4;
            c.trials = 1000;
            c.paths = 1;
        }
        else if (subcommand == "nmse-mu")
        {
            c.rows = c.cols = 20;
            c.user_antennas = 4;
            c.estimators = {"ls", "omp", "gsomp", "crlb"};
        }
        else if (subcommand == "rate-los" || subcommand == "nearfield")
        {
            c.rows = c.cols = 100;
            c.subcarriers = 18;
            c.los = true;
            c.paths = 1;
        }
        else if (subcommand == "rate-icsi")
        {
            c.rows = c.cols = 100;
            c.paths = 2;
        }
        else if (subcommand == "rate-svd")
        {
            c.rows = 100;
            c.cols = 50;
            c.user_antennas = 2;
            c.paths = 2;
        }
        return c;
    }

    void apply_desk(ExperimentConfig &cfg)
    {
        cfg.rows = 16;
        cfg.cols = cfg.subcommand == "rate-svd" ? 8 : 16;
        cfg.subcarriers = 32;
        if (cfg.subcommand == "nmse" || cfg.subcommand == "nmse-mu" || cfg.subcommand == "rate-icsi")
            cfg.grid_factor = 2;
    }

    void set_key(ExperimentConfig &cfg, const std::string &key, const std::string &value, int line)
    {
        const auto &reg = registry();
        const auto it = reg.find(key);
        if (it == reg.end())
            throw ConfigError(key, "unknown key", line);
        it->second.set(cfg, key, value, line);
    }

    void apply_config_text(ExperimentConfig &cfg, const std::string &text)
    {
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw))
        {
            ++line;
            const std::string s = trim(raw.substr(0, raw.find('#')));
            if (s.empty())
                continue;
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError(s, "expected 'key = value'", line);
            const std::string key = trim(s.substr(0, eq));
            if (key.empty())
                throw ConfigError("(empty)", "missing key before '='", line);
            set_key(cfg, key, s.substr(eq + 1), line);
        }
    }

    void apply_config_file(ExperimentConfig &cfg, const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config", "cannot open '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        apply_config_text(cfg, buf.str());
    }

    void validate(const ExperimentConfig &c)
    {
        auto require = [](bool ok, const char *key, const std::string &msg) {
            if (!ok)
                throw ConfigError(key, msg);
        };
        require(c.rows >= 1, "rows", "must be >= 1");
        require(c.cols >= 1, "cols", "must be >= 1");
        require(c.carrier > 0.0, "carrier_ghz", "must be positive");
        require(c.bandwidth > 0.0, "bandwidth_ghz", "must be positive");
        require(c.bandwidth < 2.0 * c.carrier, "bandwidth_ghz", "band must stay above 0 Hz");
        require(c.subcarriers >= 1, "subcarriers", "must be >= 1");
        require(c.nsb >= 0 && (c.nsb == 0 || c.rows % c.nsb == 0), "nsb", "must be 0 or divide rows");
        require(c.msb >= 0 && (c.msb == 0 || c.cols % c.msb == 0), "msb", "must be 0 or divide cols");
        require(c.paths >= 1, "paths", "must be >= 1");
        require(c.min_separation >= 1, "min_separation", "must be >= 1");
        require(c.distance > 0.0, "distance_m", "must be positive");
        require(c.gain_variance > 0.0, "gain_variance", "must be positive");
        require(!c.pt_dbm.empty(), "pt_dbm", "must not be empty");
        require(!c.snr_db.empty(), "snr_db", "must not be empty");
        require(!c.estimators.empty(), "estimators", "must not be empty");
        require(c.grid_factor >= 1, "grid_factor", "must be >= 1");
        require(c.user_grid_factor >= 1, "user_grid_factor", "must be >= 1");
        require(c.training_fraction > 0.0 && c.training_fraction <= 1.0, "training_fraction", "must lie in (0, 1]");
        require(c.rf_chains >= 1 && c.rf_chains <= c.rows * c.cols, "rf_chains", "must lie in [1, N_B]");
        require(int(c.training_fraction * c.rows * c.cols) >= c.rf_chains, "training_fraction",
                "leaves fewer pilot beams than RF chains");
        require(c.epsilon_fraction > 0.0, "epsilon_fraction", "must be positive");
        require(c.stride >= 1, "stride", "must be >= 1");
        require(c.user_antennas >= 1, "user_antennas", "must be >= 1");
        require(c.cdf_subcarrier >= -1 && c.cdf_subcarrier < c.subcarriers, "cdf_subcarrier",
                "must be -1 or a valid subcarrier index");
        require(c.trials >= 1, "trials", "must be >= 1");
        for (double f : c.distance_factors)
            require(f > 0.0, "distance_factors", "entries must be positive");
        if (c.subcommand == "nmse-mu" || c.subcommand == "rate-svd")
            require(c.user_antennas >= 2, "user_antennas", "multi-antenna experiments need >= 2");
    }

    std::map<std::string, std::string> describe(const ExperimentConfig &cfg)
    {
        std::map<std::string, std::string> out;
        for (const auto &[key, entry] : registry())
            if (key != "out")
                out[key] = entry.get(cfg);
        return out;
    }
}
