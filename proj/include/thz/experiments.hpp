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

#ifndef THZ_EXPERIMENTS_HPP
#define THZ_EXPERIMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "thz/config.hpp"
#include "thz/csv.hpp"

namespace thz
{
    // Normalized array gain per subcarrier for each combiner
    struct GainSweep
    {
        std::vector<double> frequency;
        std::map<std::string, std::vector<double>> gain; // digital, proposed, narrowband
    };

    struct DictionaryCdf
    {
        std::vector<double> array_gain;
        std::vector<double> error_x;
        std::vector<double> error_y;
    };

    // Mean over trials (and subcarriers) per estimator and SNR point
    struct NmseSweep
    {
        std::vector<double> snr_db;
        std::vector<std::string> estimators;
        std::map<std::string, std::vector<double>> nmse;      // linear
        std::map<std::string, std::vector<double>> recovery;  // exact-support rate, NaN where undefined
        std::map<std::string, std::vector<int>> cap_hits;
    };

    struct RateSummary
    {
        std::map<std::string, double> rate; // bits/s averaged over trials
    };

    struct RateSweep
    {
        std::vector<double> pt_dbm;
        std::map<std::string, std::vector<double>> rate; // bits/s per power point
    };

    struct NearFieldSweep
    {
        double fraunhofer = 0.0;
        std::vector<double> factors;
        std::vector<double> plane;
        std::vector<double> spherical;
    };

    GainSweep run_gain(const ExperimentConfig &cfg);
    DictionaryCdf run_cdf_dict(const ExperimentConfig &cfg);
    NmseSweep run_nmse(const ExperimentConfig &cfg);    // nmse and nmse-mu
    RateSummary run_rate_los(const ExperimentConfig &cfg);
    RateSweep run_rate_icsi(const ExperimentConfig &cfg);
    RateSweep run_rate_svd(const ExperimentConfig &cfg);
    NearFieldSweep run_nearfield(const ExperimentConfig &cfg);

    // Dispatches on cfg.subcommand; the table carries the run metadata
    CsvTable run_experiment(const ExperimentConfig &cfg);
}

#endif
