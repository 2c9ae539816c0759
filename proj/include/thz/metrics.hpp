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

#ifndef THZ_METRICS_HPP
#define THZ_METRICS_HPP

#include <utility>
#include <vector>

#include "thz/channel_model.hpp"
#include "thz/combining.hpp"

namespace thz
{
    // Power budget and noise of an OFDM link
    struct RateConfig
    {
        double total_power = 0.0;           // P_t [W]
        double spacing = 0.0;               // Delta B [Hz]
        double noise_density = 0.0;         // sigma^2 [W/Hz]
        int subcarriers = 1;

        double noise_power() const { return spacing * noise_density; }  // P_n
        double data_power() const { return total_power / subcarriers; } // P_d
        void validate() const;
    };

    // Thermal noise of -174 dBm/Hz unless given
    RateConfig make_rate_config(const OfdmGrid &grid, double total_power, double noise_dbm_per_hz = -174.0);

    // (1/|S|) sum_s ||h - h_hat||^2 / ||h||^2; throws std::domain_error on a zero channel
    double nmse(const std::vector<cvec> &truth, const std::vector<cvec> &estimate);
    double nmse(const std::vector<cmat> &truth, const std::vector<cmat> &estimate);

    // sigma_beta^2 P_p / P_n
    double avg_snr(double gain_variance, double pilot_power, double noise_power);

    // sum_s Delta B log2(1 + P_d |w^H h|^2 / (||w||^2 P_n)) for one realization
    double rate_perfect_csi(const std::vector<cvec> &channel, const std::vector<cvec> &combiner, const RateConfig &cfg);

    // MRC rate on estimates with per-subcarrier error power h_hat^H R_e h_hat / ||h_hat||^2
    double rate_imperfect_csi(const std::vector<cvec> &estimate, const std::vector<double> &error_power,
                              const RateConfig &cfg);
    double rate_imperfect_csi(const std::vector<cvec> &estimate, const std::vector<cmat> &error_covariance,
                              const RateConfig &cfg);

    // h_hat^H R h_hat / ||h_hat||^2
    double error_power(const cvec &estimate, const cmat &error_covariance);

    // sum_s sum_n Delta B log2(1 + p_ns sigma_ns^2 / P_n); powers indexed like the singular values
    double rate_svd(const SvdTransmission &tx, const std::vector<std::vector<double>> &powers, const RateConfig &cfg);

    // Waterfilling over every stream of every subcarrier under the total budget
    std::vector<std::vector<double>> svd_power_allocation(const SvdTransmission &tx, const RateConfig &cfg);

    // Right-continuous empirical CDF as sorted (value, probability) pairs, one per distinct value
    std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples);
}

#endif
