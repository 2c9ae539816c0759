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

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thz/config.hpp"
#include "thz/experiments.hpp"

namespace
{
    constexpr int kConfigError = 2;
    constexpr int kRuntimeError = 3;

    // "--key=value", "--key value" or "key=value"; dashes in keys become underscores
    std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string> &args)
    {
        std::vector<std::pair<std::string, std::string>> out;
        for (size_t i = 0; i < args.size(); ++i)
        {
            std::string token = args[i];
            const bool flag = token.rfind("--", 0) == 0;
            if (flag)
                token.erase(0, 2);
            std::string key, value;
            if (const auto eq = token.find('='); eq != std::string::npos)
            {
                key = token.substr(0, eq);
                value = token.substr(eq + 1);
            }
            else if (flag && i + 1 < args.size())
            {
                key = token;
                value = args[++i];
            }
            else
                throw thz::ConfigError(token, "override needs a value");
            for (char &c : key)
                if (c == '-')
                    c = '_';
            out.emplace_back(key, value);
        }
        return out;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Wideband terahertz MIMO-OFDM experiments"};
    app.allow_extras();
    std::string subcommand, config_path, out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    bool desk = false;
    app.add_option("subcommand", subcommand, "gain | cdf-dict | nmse | nmse-mu | rate-los | rate-icsi | rate-svd | nearfield")
        ->required();
    app.add_option("--config", config_path, "flat key = value file");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out_path, "CSV path (stdout when omitted)");
    app.add_option("--trials", trials, "Monte Carlo trials");
    app.add_flag("--desk", desk, "desk-scale preset");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kConfigError;
    }

    thz::ExperimentConfig cfg;
    try
    {
        cfg = thz::defaults_for(subcommand);
        if (desk)
            thz::apply_desk(cfg);
        if (!config_path.empty())
            thz::apply_config_file(cfg, config_path);
        for (const auto &[key, value] : parse_overrides(app.remaining()))
            thz::set_key(cfg, key, value);
        if (seed)
            cfg.seed = *seed;
        if (trials)
            thz::set_key(cfg, "trials", std::to_string(*trials));
        if (!out_path.empty())
            cfg.out = out_path;
        thz::validate(cfg);
    }
    catch (const thz::ConfigError &e)
    {
        std::cerr << "thzsim: config error: " << e.what() << '\n';
        return kConfigError;
    }

    std::ofstream file;
    if (!cfg.out.empty())
    {
        file.open(cfg.out, std::ios::binary | std::ios::trunc);
        if (!file)
        {
            std::cerr << "thzsim: config error: out: cannot write '" << cfg.out << "'\n";
            return kConfigError;
        }
    }

    try
    {
        const thz::CsvTable table = thz::run_experiment(cfg);
        std::ostream &sink = cfg.out.empty() ? std::cout : file;
        table.write(sink);
        sink.flush();
        if (!sink)
        {
            std::cerr << "thzsim: failed writing output\n";
            return kRuntimeError;
        }
    }
    catch (const thz::ConfigError &e)
    {
        std::cerr << "thzsim: config error: " << e.what() << '\n';
        return kConfigError;
    }
    catch (const std::exception &e)
    {
        std::cerr << "thzsim: runtime error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
