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

#ifndef THZ_ARRAY_MODEL_HPP
#define THZ_ARRAY_MODEL_HPP

#include "thz/types.hpp"

namespace thz
{
    // Uniform planar array in the xy-plane. cols == 1 describes a ULA along x.
    //
    // Response vectors are ordered with the y-index (m) fastest:
    //   index(n, m) = n * cols + m
    // which equals a_x (x) a_y and vec(a_y a_x^T) at the same time.
    struct ArrayGeometry
    {
        int rows = 1;            // N, antennas along x
        int cols = 1;            // M, antennas along y
        double spacing = 0.0;    // d [m]
        double carrier = 0.0;    // fc [Hz]

        static ArrayGeometry half_wavelength(int rows, int cols, double carrier);

        int size() const { return rows * cols; }
        double wavelength() const { return kSpeedOfLight / carrier; }
        Index index(int n, int m) const { return Index(n) * cols + m; }

        // Throws std::invalid_argument on a non-positive field
        void validate() const;
    };

    struct Direction
    {
        double azimuth = 0.0; // phi in [-pi, pi]
        double polar = 0.0;   // theta in [-pi/2, pi/2], 0 is broadside
    };

    struct SpatialFrequency
    {
        double x = 0.0; // omega_x = sin(theta) cos(phi) / 2
        double y = 0.0; // omega_y = sin(theta) sin(phi) / 2
    };

    // Split of an N x M array into nsb x msb virtual subarrays of
    // (N / nsb) x (M / msb) antennas each.
    struct VirtualPartition
    {
        int nsb = 1;
        int msb = 1;

        int sub_rows(const ArrayGeometry &geom) const { return geom.rows / nsb; }
        int sub_cols(const ArrayGeometry &geom) const { return geom.cols / msb; }
        int subarray_count() const { return nsb * msb; }

        // Throws std::invalid_argument if nsb does not divide N or msb does not divide M
        void validate(const ArrayGeometry &geom) const;
    };

    // 3GPP-style directional element power pattern; all values in dB or degrees.
    struct ElementPattern
    {
        double max_gain_db = 50.0;
        double hpbw_azimuth_deg = 65.0;
        double hpbw_polar_deg = 65.0;
        double front_to_back_db = 30.0;
        double side_lobe_db = 30.0;

        void validate() const;
    };

    // Dirichlet sinc sin(N x / 2) / (N sin(x / 2)), continuous at x = 2 pi k
    double dirichlet(int order, double x);

    // Delay from antenna (0,0) to antenna (n,m) for a plane wave arriving from dir [s]
    double delay_across_array(const ArrayGeometry &geom, const Direction &dir, int n, int m);

    // Per-axis delay steps Delta_x = d sin(theta) cos(phi) / c and Delta_y = d sin(theta) sin(phi) / c
    double delay_step_x(const ArrayGeometry &geom, const Direction &dir);
    double delay_step_y(const ArrayGeometry &geom, const Direction &dir);

    // [1, e^{-j 2 pi freq step}, ..., e^{-j 2 pi freq (count-1) step}]
    cvec progressive_phase(int count, double cycles_per_element);

    // Plane-wave UPA response at baseband offset f (absolute frequency fc + f)
    cvec upa_response(const ArrayGeometry &geom, const Direction &dir, double f);

    // Axis factors of upa_response: upa_response == kron(axis_response_x, axis_response_y)
    cvec axis_response_x(const ArrayGeometry &geom, const Direction &dir, double f);
    cvec axis_response_y(const ArrayGeometry &geom, const Direction &dir, double f);

    // Half-wavelength UPA response written in spatial frequencies, with the (1 + f / fc) scaling
    cvec upa_response_spatial(int rows, int cols, const SpatialFrequency &sf, double relative_frequency);

    // User ULA response e^{-j 2 pi (fc + f) k d sin(phi) / c}
    cvec ula_response(int count, double spacing, double carrier, double azimuth, double f);

    // Spherical-wave response for a source at distance [m] from antenna (0,0)
    cvec spherical_response(const ArrayGeometry &geom, const Direction &dir, double distance, double f);

    // 2 D_max^2 / lambda with D_max the array diagonal
    double fraunhofer_distance(const ArrayGeometry &geom);

    SpatialFrequency angles_to_spatial(const Direction &dir);

    // Throws std::domain_error outside the disk omega_x^2 + omega_y^2 <= 1/4
    Direction spatial_to_angles(const SpatialFrequency &sf);

    // Element gain in dBi. The polar angle is measured from the array normal and
    // shifted by +90 deg before entering the vertical cut, so broadside is the maximum.
    double element_gain_db(const ElementPattern &pattern, const Direction &dir);

    // sqrt of the linear element gain, used as amplitude factor on response vectors
    double element_amplitude(const ElementPattern &pattern, const Direction &dir);
}

#endif
