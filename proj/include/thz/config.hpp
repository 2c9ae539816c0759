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

#ifndef THZ_CONFIG_HPP
#define THZ_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace thz
{
    // Invalid configuration; names the offending key (and file line when known)
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(std::string key, const std::string &message, int line = 0);
        const std::string &key() const { return key_; }
        int line() const { return line_; }

    private:
        std::string key_;
        int line_;
    };

    struct ExperimentConfig
    {
        std::string subcommand = "nmse";

        // BS array and band
        int rows = 40;
        int cols = 40;
        double carrier = 300e9;   // [Hz]
        double bandwidth = 40e9;  // [Hz]
        int subcarriers = 400;

        // Partition; zero picks the subarray size rule
        int nsb = 0;
        int msb = 0;

        // Channel
        int paths = 3;
        bool los = false;
        bool element_gain = true;
        bool on_grid = true;
        int min_separation = 1;
        double distance = 15.0;          // [m]
        double gain_variance = 1e-9;     // sigma_beta^2
        double azimuth_deg = 45.0;       // fixed direction of `gain`
        double polar_deg = 60.0;

        // Link budget
        double power_dbm = 10.0;
        double noise_dbm_per_hz = -174.0;
        std::vector<double> pt_dbm{-10.0, -5.0, 0.0, 5.0, 10.0};

        // Estimation
        std::vector<std::string> estimators{"ls", "nbomp", "omp", "gsomp", "gsomp-ss", "crlb"};
        std::vector<double> snr_db{-15.0, -10.0, -5.0, 0.0, 5.0, 10.0};
        int grid_factor = 2;          // G_x = grid_factor * N + 1
        int user_grid_factor = 4;     // G_u = user_grid_factor * N_U + 1
        double training_fraction = 0.8;
        int rf_chains = 2;
        double epsilon_fraction = 1.0; // epsilon = fraction * N_beam * noise
        bool prune = false;
        int stride = 50;
        int user_antennas = 1;

        // Near field
        std::vector<double> distance_factors{0.25, 0.5, 1.0, 2.0, 4.0};

        // Dictionary CDF
        int cdf_subcarrier = -1; // -1 picks S / 2

        int trials = 100;
        std::uint64_t seed = 1;
        std::string out;
    };

    const std::vector<std::string> &subcommands();

    // Reference defaults per subcommand; throws ConfigError("subcommand") on unknown names
    ExperimentConfig defaults_for(const std::string &subcommand);

    // Desk-scale preset: 16x16 arrays, 32 subcarriers, G = 4 N_B (odd grids)
    void apply_desk(ExperimentConfig &cfg);

    // Applies one key; throws ConfigError on unknown keys and malformed values
    void set_key(ExperimentConfig &cfg, const std::string &key, const std::string &value, int line = 0);

    // Flat `key = value` text, '#' comments
    void apply_config_text(ExperimentConfig &cfg, const std::string &text);
    void apply_config_file(ExperimentConfig &cfg, const std::string &path);

    // Cross-field checks against module preconditions
    void validate(const ExperimentConfig &cfg);

    // Every key with its canonical value text, sorted by key; feeding these back
    // through set_key reproduces the configuration.
    std::map<std::string, std::string> describe(const ExperimentConfig &cfg);

    // "a:b:c" ranges and comma lists of numbers
    std::vector<double> parse_number_list(const std::string &text);

    // 9 significant digits
    std::string format_number(double v);
}

#endif
