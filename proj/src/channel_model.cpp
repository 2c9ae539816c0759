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

#include "thz/channel_model.hpp"

#include <cmath>
#include <stdexcept>

namespace thz
{
    std::vector<double> OfdmGrid::frequencies() const
    {
        std::vector<double> f(subcarriers);
        for (int s = 0; s < subcarriers; ++s)
            f[s] = frequency(s);
        return f;
    }

    void OfdmGrid::validate() const
    {
        if (subcarriers < 1)
            throw std::invalid_argument("OfdmGrid: subcarrier count must be >= 1");
        if (!(bandwidth > 0.0))
            throw std::invalid_argument("OfdmGrid: bandwidth must be positive");
    }

    double los_attenuation(double f, double carrier, double distance, double absorption)
    {
        if (!(distance > 0.0))
            throw std::invalid_argument("los_attenuation: distance must be positive");
        const double freq = carrier + f;
        if (!(freq > 0.0))
            throw std::invalid_argument("los_attenuation: absolute frequency must be positive");
        return kSpeedOfLight / (4.0 * kPi * freq * distance) * std::exp(-0.5 * absorption * distance);
    }

    cdouble reflection_coefficient(double f, double carrier, double incidence, const Medium &medium)
    {
        const cdouble n_t = medium.refractive_index;
        const double cos_i = std::cos(incidence);
        const cdouble refraction = std::asin(cdouble(std::sin(incidence)) / n_t);
        const cdouble cos_t = std::cos(refraction);
        const cdouble fresnel = (cos_i - n_t * cos_t) / (cos_i + n_t * cos_t);

        const double freq = carrier + f;
        const double k = 2.0 * kPi * freq * medium.roughness * cos_i / kSpeedOfLight;
        return fresnel * std::exp(-2.0 * k * k); // 8 pi^2 f^2 sigma^2 cos^2 / c^2
    }

    double nlos_attenuation(double f, double carrier, double distance, double incidence, const Medium &medium)
    {
        return std::abs(reflection_coefficient(f, carrier, incidence, medium)) *
               los_attenuation(f, carrier, distance, medium.absorption);
    }

    cdouble path_gain(const Path &path, double f, double carrier, const Medium &medium)
    {
        if (const auto *stat = std::get_if<StatisticalGain>(&path.gain))
            return stat->beta;

        const auto &phys = std::get<PhysicalGain>(path.gain);
        const double amplitude = path.kind == PathKind::los
                                     ? los_attenuation(f, carrier, phys.distance, medium.absorption)
                                     : nlos_attenuation(f, carrier, phys.distance, phys.incidence, medium);
        return amplitude * phasor(std::fmod(carrier * path.toa, 1.0));
    }

    cdouble path_coefficient(const Path &path, double f, const LinkSetup &link)
    {
        cdouble c = path_gain(path, f, link.bs.carrier, link.medium) * phasor(f * path.toa);
        if (link.pattern)
            c *= element_amplitude(*link.pattern, path.doa);
        return c;
    }

    cmat synth_subcarrier(const PathSet &paths, const LinkSetup &link, double f)
    {
        const int nu = link.user ? link.user->count : 1;
        cmat h = cmat::Zero(link.bs.size(), nu);
        for (const auto &path : paths)
        {
            const cdouble coeff = path_coefficient(path, f, link);
            if (coeff == cdouble(0.0))
                continue;
            const cvec a = upa_response(link.bs, path.doa, f);
            if (link.user)
            {
                const cvec au = ula_response(nu, link.user->spacing, link.bs.carrier, path.aod, f);
                h.noalias() += coeff * a * au.adjoint();
            }
            else
                h.col(0) += coeff * a;
        }
        return h;
    }

    ChannelRealization synth_channel(const PathSet &paths, const LinkSetup &link)
    {
        if (paths.empty())
            throw std::invalid_argument("synth_channel: empty path set");
        link.bs.validate();
        link.grid.validate();
        if (link.user && link.user->count < 1)
            throw std::invalid_argument("synth_channel: user array needs at least one antenna");

        ChannelRealization ch{link.grid, paths, std::vector<cmat>(link.grid.subcarriers)};
        const int S = link.grid.subcarriers;
#pragma omp parallel for schedule(static)
        for (int s = 0; s < S; ++s)
            ch.response[s] = synth_subcarrier(paths, link, link.grid.frequency(s));
        return ch;
    }

    ChannelRealization synth_spherical_los(const Path &los, const LinkSetup &link)
    {
        const auto *phys = std::get_if<PhysicalGain>(&los.gain);
        if (phys == nullptr)
            throw std::invalid_argument("synth_spherical_los: needs a distance-based path");
        if (link.user)
            throw std::invalid_argument("synth_spherical_los: single-antenna users only");

        ChannelRealization ch{link.grid, {los}, std::vector<cmat>(link.grid.subcarriers)};
        const int S = link.grid.subcarriers;
#pragma omp parallel for schedule(static)
        for (int s = 0; s < S; ++s)
        {
            const double f = link.grid.frequency(s);
            // Propagation phase is carried by the spherical response itself
            cdouble coeff = path_gain(los, f, link.bs.carrier, link.medium) *
                            std::conj(phasor(std::fmod(link.bs.carrier * los.toa, 1.0)));
            if (link.pattern)
                coeff *= element_amplitude(*link.pattern, los.doa);
            ch.response[s] = coeff * spherical_response(link.bs, los.doa, phys->distance, f);
        }
        return ch;
    }

    cdouble complex_normal(Rng &rng, double variance)
    {
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * variance));
        const double re = gauss(rng);
        const double im = gauss(rng);
        return {re, im};
    }

    PathSet sample_random_channel(const StatConfig &cfg, Rng &rng)
    {
        if (cfg.paths < 1)
            throw std::invalid_argument("sample_random_channel: need at least one path");

        std::uniform_real_distribution<double> azimuth(-kPi, kPi);
        std::uniform_real_distribution<double> polar(-0.5 * kPi, 0.5 * kPi);
        std::uniform_real_distribution<double> toa(cfg.nlos_toa_min, cfg.nlos_toa_max);
        std::uniform_real_distribution<double> incidence(-0.5 * kPi, 0.5 * kPi);
        std::uniform_real_distribution<double> departure(-0.5 * kPi, 0.5 * kPi);

        PathSet paths;
        paths.reserve(cfg.paths);
        for (int l = 0; l < cfg.paths; ++l)
        {
            Path p;
            p.kind = (cfg.include_los && l == 0) ? PathKind::los : PathKind::nlos;
            const double phi = azimuth(rng);
            const double theta = polar(rng);
            p.doa = {phi, theta};
            if (p.kind == PathKind::los)
                p.toa = cfg.gain_model == GainModel::physical ? cfg.distance / kSpeedOfLight : cfg.los_toa;
            else
                p.toa = toa(rng);

            if (cfg.gain_model == GainModel::statistical)
                p.gain = StatisticalGain{complex_normal(rng, cfg.gain_variance)};
            else
                p.gain = PhysicalGain{cfg.distance, p.kind == PathKind::los ? 0.0 : incidence(rng)};

            if (cfg.draw_aod)
                p.aod = departure(rng);
            paths.push_back(p);
        }
        return paths;
    }
}
