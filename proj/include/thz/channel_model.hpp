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

#ifndef THZ_CHANNEL_MODEL_HPP
#define THZ_CHANNEL_MODEL_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "thz/array_model.hpp"

namespace thz
{
    // OFDM subcarrier grid: f_s = (s - (S-1)/2) B / S
    struct OfdmGrid
    {
        int subcarriers = 1;
        double bandwidth = 0.0; // [Hz]

        double spacing() const { return bandwidth / subcarriers; }
        double frequency(int s) const { return (s - 0.5 * (subcarriers - 1)) * spacing(); }
        std::vector<double> frequencies() const;
        void validate() const;
    };

    // Propagation medium and reflector
    struct Medium
    {
        double absorption = 0.0033;                 // k_abs [1/m]
        cdouble refractive_index{2.24, -0.025};     // n_t
        double roughness = 0.088e-3;                // sigma_rough [m]
    };

    enum class PathKind
    {
        los,
        nlos
    };

    // Distance-based attenuation; incidence angle only matters for reflected rays
    struct PhysicalGain
    {
        double distance = 15.0;
        double incidence = 0.0;
    };

    // Frequency-flat complex gain
    struct StatisticalGain
    {
        cdouble beta{0.0, 0.0};
    };

    struct Path
    {
        PathKind kind = PathKind::nlos;
        std::variant<PhysicalGain, StatisticalGain> gain = StatisticalGain{};
        double toa = 0.0;       // tau [s]
        Direction doa;          // direction of arrival at the BS
        double aod = 0.0;       // departure azimuth at a multi-antenna user
    };

    using PathSet = std::vector<Path>;

    struct UserArray
    {
        int count = 1;
        double spacing = 0.0;
    };

    // Per-subcarrier channel. Single-antenna users have one column per matrix.
    struct ChannelRealization
    {
        OfdmGrid grid;
        PathSet paths;
        std::vector<cmat> response; // N_B x N_U per subcarrier

        int subcarriers() const { return int(response.size()); }
        cvec vector(int s) const { return response[s].col(0); }
        bool multi_antenna() const { return !response.empty() && response.front().cols() > 1; }
    };

    // Everything needed to synthesize a channel from a path set
    struct LinkSetup
    {
        ArrayGeometry bs;
        OfdmGrid grid;
        Medium medium;
        std::optional<ElementPattern> pattern; // isotropic BS elements when empty
        std::optional<UserArray> user;         // single-antenna user when empty
    };

    // Free-space and molecular absorption amplitude c / (4 pi (fc+f) D) exp(-k_abs D / 2)
    double los_attenuation(double f, double carrier, double distance, double absorption);

    // Fresnel reflection with Rayleigh roughness loss
    cdouble reflection_coefficient(double f, double carrier, double incidence, const Medium &medium);

    // |Gamma(f)| times the line-of-sight amplitude
    double nlos_attenuation(double f, double carrier, double distance, double incidence, const Medium &medium);

    // beta_l(f): path gain without the delay term exp(-j 2 pi f tau)
    cdouble path_gain(const Path &path, double f, double carrier, const Medium &medium);

    // Coefficient multiplying the BS response at subcarrier frequency f, including
    // the delay phase and the element amplitude sqrt(Lambda)
    cdouble path_coefficient(const Path &path, double f, const LinkSetup &link);

    // Per-subcarrier channel; parallel over subcarriers
    ChannelRealization synth_channel(const PathSet &paths, const LinkSetup &link);

    // Single subcarrier of synth_channel with a caller-supplied BS response model
    cmat synth_subcarrier(const PathSet &paths, const LinkSetup &link, double f);

    // Line-of-sight channel with a spherical wavefront at the path distance
    ChannelRealization synth_spherical_los(const Path &los, const LinkSetup &link);

    enum class GainModel
    {
        statistical, // beta ~ CN(0, sigma_beta^2), frequency flat
        physical     // distance and reflection based
    };

    // Statistical path generation per the reference simulation setup
    struct StatConfig
    {
        int paths = 3;
        bool include_los = false;
        GainModel gain_model = GainModel::statistical;
        double gain_variance = 1e-9;       // sigma_beta^2
        double distance = 15.0;            // [m]
        double los_toa = 50e-9;            // [s]
        double nlos_toa_min = 50e-9;
        double nlos_toa_max = 55e-9;
        bool draw_aod = false;
    };

    using Rng = std::mt19937_64;

    PathSet sample_random_channel(const StatConfig &cfg, Rng &rng);

    // CN(0, variance)
    cdouble complex_normal(Rng &rng, double variance = 1.0);
}

#endif
