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

#include "thz/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace thz
{
    ArrayGeometry ArrayGeometry::half_wavelength(int rows, int cols, double carrier)
    {
        ArrayGeometry geom{rows, cols, kSpeedOfLight / (2.0 * carrier), carrier};
        geom.validate();
        return geom;
    }

    void ArrayGeometry::validate() const
    {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("ArrayGeometry: antenna counts must be >= 1");
        if (!(spacing > 0.0))
            throw std::invalid_argument("ArrayGeometry: spacing must be positive");
        if (!(carrier > 0.0))
            throw std::invalid_argument("ArrayGeometry: carrier frequency must be positive");
    }

    void VirtualPartition::validate(const ArrayGeometry &geom) const
    {
        if (nsb < 1 || msb < 1)
            throw std::invalid_argument("VirtualPartition: subarray counts must be >= 1");
        if (geom.rows % nsb != 0 || geom.cols % msb != 0)
            throw std::invalid_argument("VirtualPartition: " + std::to_string(nsb) + "x" + std::to_string(msb) +
                                        " does not divide a " + std::to_string(geom.rows) + "x" +
                                        std::to_string(geom.cols) + " array");
    }

    void ElementPattern::validate() const
    {
        if (!(max_gain_db > 0.0 && hpbw_azimuth_deg > 0.0 && hpbw_polar_deg > 0.0 && front_to_back_db > 0.0 &&
              side_lobe_db > 0.0))
            throw std::invalid_argument("ElementPattern: all parameters must be positive");
    }

    double dirichlet(int order, double x)
    {
        const double half = 0.5 * x;
        const double den = std::sin(half);
        if (std::abs(den) < 1e-9)
        {
            // x = 2 pi k + eps, limit is (-1)^(k (N-1))
            const long long k = std::llround(x / (2.0 * kPi));
            const bool odd = ((k % 2) != 0) && ((order - 1) % 2 != 0);
            return odd ? -1.0 : 1.0;
        }
        return std::sin(order * half) / (order * den);
    }

    double delay_step_x(const ArrayGeometry &geom, const Direction &dir)
    {
        return geom.spacing * std::sin(dir.polar) * std::cos(dir.azimuth) / kSpeedOfLight;
    }

    double delay_step_y(const ArrayGeometry &geom, const Direction &dir)
    {
        return geom.spacing * std::sin(dir.polar) * std::sin(dir.azimuth) / kSpeedOfLight;
    }

    double delay_across_array(const ArrayGeometry &geom, const Direction &dir, int n, int m)
    {
        if (n < 0 || n >= geom.rows || m < 0 || m >= geom.cols)
            throw std::out_of_range("delay_across_array: antenna index (" + std::to_string(n) + "," +
                                    std::to_string(m) + ") outside the array");
        return n * delay_step_x(geom, dir) + m * delay_step_y(geom, dir);
    }

    cvec progressive_phase(int count, double cycles_per_element)
    {
        cvec v(count);
        for (int k = 0; k < count; ++k)
            v[k] = phasor(k * cycles_per_element);
        return v;
    }

    cvec axis_response_x(const ArrayGeometry &geom, const Direction &dir, double f)
    {
        return progressive_phase(geom.rows, (geom.carrier + f) * delay_step_x(geom, dir));
    }

    cvec axis_response_y(const ArrayGeometry &geom, const Direction &dir, double f)
    {
        return progressive_phase(geom.cols, (geom.carrier + f) * delay_step_y(geom, dir));
    }

    cvec upa_response(const ArrayGeometry &geom, const Direction &dir, double f)
    {
        const cvec ax = axis_response_x(geom, dir, f);
        const cvec ay = axis_response_y(geom, dir, f);
        cvec a(geom.size());
        for (int n = 0; n < geom.rows; ++n)
            a.segment(Index(n) * geom.cols, geom.cols) = ax[n] * ay;
        return a;
    }

    cvec upa_response_spatial(int rows, int cols, const SpatialFrequency &sf, double relative_frequency)
    {
        const double scale = 1.0 + relative_frequency;
        const cvec ax = progressive_phase(rows, scale * sf.x);
        const cvec ay = progressive_phase(cols, scale * sf.y);
        cvec a(Index(rows) * cols);
        for (int n = 0; n < rows; ++n)
            a.segment(Index(n) * cols, cols) = ax[n] * ay;
        return a;
    }

    cvec ula_response(int count, double spacing, double carrier, double azimuth, double f)
    {
        if (count < 1)
            throw std::invalid_argument("ula_response: antenna count must be >= 1");
        return progressive_phase(count, (carrier + f) * spacing * std::sin(azimuth) / kSpeedOfLight);
    }

    cvec spherical_response(const ArrayGeometry &geom, const Direction &dir, double distance, double f)
    {
        if (!(distance > 0.0))
            throw std::invalid_argument("spherical_response: distance must be positive");

        // Source placed on the side whose far-field limit matches upa_response
        const double x = -distance * std::cos(dir.azimuth) * std::sin(dir.polar);
        const double y = -distance * std::sin(dir.azimuth) * std::sin(dir.polar);
        const double d = geom.spacing;
        const double freq = geom.carrier + f;

        // Common phase of the reference antenna, reduced before the per-antenna offsets
        const double ref_cycles = std::fmod(freq * distance / kSpeedOfLight, 1.0);
        const cdouble ref = phasor(ref_cycles);

        cvec a(geom.size());
        for (int n = 0; n < geom.rows; ++n)
            for (int m = 0; m < geom.cols; ++m)
            {
                // D_nm - D = (D_nm^2 - D^2) / (D_nm + D), exact without cancellation
                const double dsq = -2.0 * d * (n * x + m * y) + d * d * (double(n) * n + double(m) * m);
                const double dnm = std::sqrt(distance * distance + dsq);
                const double excess = dsq / (dnm + distance);
                a[geom.index(n, m)] = ref * phasor(freq * excess / kSpeedOfLight);
            }
        return a;
    }

    double fraunhofer_distance(const ArrayGeometry &geom)
    {
        const double dx = (geom.rows - 1) * geom.spacing;
        const double dy = (geom.cols - 1) * geom.spacing;
        return 2.0 * (dx * dx + dy * dy) / geom.wavelength();
    }

    SpatialFrequency angles_to_spatial(const Direction &dir)
    {
        return {0.5 * std::sin(dir.polar) * std::cos(dir.azimuth), 0.5 * std::sin(dir.polar) * std::sin(dir.azimuth)};
    }

    Direction spatial_to_angles(const SpatialFrequency &sf)
    {
        const double r2 = sf.x * sf.x + sf.y * sf.y;
        if (r2 > 0.25 * (1.0 + 1e-12))
            throw std::domain_error("spatial_to_angles: spatial frequency outside the visible disk");
        const double s = std::min(1.0, 2.0 * std::sqrt(r2));
        return {std::atan2(sf.y, sf.x), std::asin(s)};
    }

    double element_gain_db(const ElementPattern &pattern, const Direction &dir)
    {
        constexpr double deg = 180.0 / kPi;
        const double phi_deg = std::remainder(dir.azimuth * deg, 360.0);
        const double theta_pattern = dir.polar * deg + 90.0;

        const double rel_h = phi_deg / pattern.hpbw_azimuth_deg;
        const double rel_v = (theta_pattern - 90.0) / pattern.hpbw_polar_deg;
        const double horizontal = -std::min(12.0 * rel_h * rel_h, pattern.front_to_back_db);
        const double vertical = -std::min(12.0 * rel_v * rel_v, pattern.side_lobe_db);
        return pattern.max_gain_db - std::min(-horizontal - vertical, pattern.front_to_back_db);
    }

    double element_amplitude(const ElementPattern &pattern, const Direction &dir)
    {
        return std::sqrt(db_to_linear(element_gain_db(pattern, dir)));
    }
}
