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

#include "thz/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thz
{
    void RateConfig::validate() const
    {
        if (!(total_power >= 0.0) || !(spacing > 0.0) || !(noise_density > 0.0) || subcarriers < 1)
            throw std::invalid_argument("RateConfig: invalid power, spacing, noise or subcarrier count");
    }

    RateConfig make_rate_config(const OfdmGrid &grid, double total_power, double noise_dbm_per_hz)
    {
        grid.validate();
        RateConfig cfg{total_power, grid.spacing(), dbm_to_watt(noise_dbm_per_hz), grid.subcarriers};
        cfg.validate();
        return cfg;
    }

    namespace
    {
        template <class M>
        double nmse_impl(const std::vector<M> &truth, const std::vector<M> &estimate)
        {
            if (truth.empty() || truth.size() != estimate.size())
                throw std::invalid_argument("nmse: need matching nonempty subcarrier sets");
            double sum = 0.0;
            for (size_t s = 0; s < truth.size(); ++s)
            {
                if (truth[s].rows() != estimate[s].rows() || truth[s].cols() != estimate[s].cols())
                    throw std::invalid_argument("nmse: dimension mismatch");
                const double ref = truth[s].squaredNorm();
                if (!(ref > 0.0))
                    throw std::domain_error("nmse: zero-norm true channel");
                sum += (truth[s] - estimate[s]).squaredNorm() / ref;
            }
            return sum / double(truth.size());
        }
    }

    double nmse(const std::vector<cvec> &truth, const std::vector<cvec> &estimate)
    {
        return nmse_impl(truth, estimate);
    }

    double nmse(const std::vector<cmat> &truth, const std::vector<cmat> &estimate)
    {
        return nmse_impl(truth, estimate);
    }

    double avg_snr(double gain_variance, double pilot_power, double noise_power)
    {
        if (!(gain_variance > 0.0) || !(pilot_power > 0.0) || !(noise_power > 0.0))
            throw std::invalid_argument("avg_snr: inputs must be positive");
        return gain_variance * pilot_power / noise_power;
    }

    double rate_perfect_csi(const std::vector<cvec> &channel, const std::vector<cvec> &combiner, const RateConfig &cfg)
    {
        cfg.validate();
        if (channel.size() != combiner.size())
            throw std::invalid_argument("rate_perfect_csi: one combiner per subcarrier required");
        double rate = 0.0;
        for (size_t s = 0; s < channel.size(); ++s)
        {
            const double wn = combiner[s].squaredNorm();
            if (!(wn > 0.0))
                continue;
            const double gain = std::norm(combiner[s].dot(channel[s])) / wn;
            rate += cfg.spacing * std::log2(1.0 + cfg.data_power() * gain / cfg.noise_power());
        }
        return rate;
    }

    double error_power(const cvec &estimate, const cmat &error_covariance)
    {
        const double n2 = estimate.squaredNorm();
        if (!(n2 > 0.0))
            throw std::domain_error("error_power: zero-norm estimate");
        return estimate.dot(error_covariance * estimate).real() / n2;
    }

    double rate_imperfect_csi(const std::vector<cvec> &estimate, const std::vector<double> &error_power,
                              const RateConfig &cfg)
    {
        cfg.validate();
        if (estimate.size() != error_power.size())
            throw std::invalid_argument("rate_imperfect_csi: one error power per subcarrier required");
        double rate = 0.0;
        for (size_t s = 0; s < estimate.size(); ++s)
        {
            const double n2 = estimate[s].squaredNorm();
            if (!(n2 > 0.0))
                throw std::domain_error("rate_imperfect_csi: zero-norm estimate");
            const double sinr = cfg.data_power() * n2 / (cfg.noise_power() + cfg.data_power() * error_power[s]);
            rate += cfg.spacing * std::log2(1.0 + sinr);
        }
        return rate;
    }

    double rate_imperfect_csi(const std::vector<cvec> &estimate, const std::vector<cmat> &error_covariance,
                              const RateConfig &cfg)
    {
        if (estimate.size() != error_covariance.size())
            throw std::invalid_argument("rate_imperfect_csi: one covariance per subcarrier required");
        std::vector<double> ep(estimate.size());
        for (size_t s = 0; s < estimate.size(); ++s)
            ep[s] = error_power(estimate[s], error_covariance[s]);
        return rate_imperfect_csi(estimate, ep, cfg);
    }

    double rate_svd(const SvdTransmission &tx, const std::vector<std::vector<double>> &powers, const RateConfig &cfg)
    {
        cfg.validate();
        if (powers.size() != tx.singular_values.size())
            throw std::invalid_argument("rate_svd: power table does not match the streams");
        double rate = 0.0;
        for (size_t s = 0; s < powers.size(); ++s)
        {
            const rvec &sv = tx.singular_values[s];
            if (Index(powers[s].size()) != sv.size())
                throw std::invalid_argument("rate_svd: power table does not match the streams");
            for (Index n = 0; n < sv.size(); ++n)
                rate += cfg.spacing * std::log2(1.0 + powers[s][n] * sv[n] * sv[n] / cfg.noise_power());
        }
        return rate;
    }

    std::vector<std::vector<double>> svd_power_allocation(const SvdTransmission &tx, const RateConfig &cfg)
    {
        cfg.validate();
        std::vector<std::vector<double>> out(tx.singular_values.size());
        std::vector<double> gains;
        for (size_t s = 0; s < out.size(); ++s)
        {
            const rvec &sv = tx.singular_values[s];
            out[s].assign(sv.size(), 0.0);
            for (Index n = 0; n < sv.size(); ++n)
                gains.push_back(sv[n] * sv[n]);
        }
        if (gains.empty() || cfg.total_power == 0.0)
            return out;
        const std::vector<double> p = waterfilling(gains, cfg.noise_power(), cfg.total_power);
        size_t k = 0;
        for (auto &row : out)
            for (double &v : row)
                v = p[k++];
        return out;
    }

    std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples)
    {
        if (samples.empty())
            throw std::invalid_argument("empirical_cdf: empty sample set");
        std::sort(samples.begin(), samples.end());
        const double n = double(samples.size());
        std::vector<std::pair<double, double>> cdf;
        for (size_t i = 0; i < samples.size(); ++i)
        {
            if (i + 1 < samples.size() && samples[i + 1] == samples[i])
                continue;
            cdf.emplace_back(samples[i], double(i + 1) / n);
        }
        return cdf;
    }
}
