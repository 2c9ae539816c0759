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

#ifndef THZ_TYPES_HPP
#define THZ_TYPES_HPP

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace thz
{
    using cdouble = std::complex<double>;
    using cvec = Eigen::VectorXcd;
    using cmat = Eigen::MatrixXcd;
    using rvec = Eigen::VectorXd;
    using Index = Eigen::Index;

    inline constexpr double kSpeedOfLight = 3.0e8; // m/s
    inline constexpr double kPi = std::numbers::pi;
    inline constexpr cdouble kJ{0.0, 1.0};

    // exp(-j * 2 * pi * x)
    inline cdouble phasor(double cycles)
    {
        const double arg = -2.0 * kPi * cycles;
        return {std::cos(arg), std::sin(arg)};
    }

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
}

#endif
