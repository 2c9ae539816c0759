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

#ifndef THZ_COMBINING_HPP
#define THZ_COMBINING_HPP

#include <vector>

#include "thz/array_model.hpp"
#include "thz/channel_model.hpp"

namespace thz
{
    // |w^H a|^2 / N_B for a unit-norm combiner w
    double normalized_array_gain(const cvec &combiner, const cvec &response);
    double normalized_array_gain(const cvec &combiner, const ArrayGeometry &geom, const Direction &dir, double f);

    // Closed-form narrowband gain |D_N(2 pi f Dx)|^2 |D_M(2 pi f Dy)|^2
    double narrowband_gain_closed_form(const ArrayGeometry &geom, const Direction &dir, double f);

    // Closed-form gain of the TTD combiner |D_Nt(2 pi f Dx)|^2 |D_Mt(2 pi f Dy)|^2
    double ttd_gain_closed_form(const ArrayGeometry &geom, const Direction &dir, const VirtualPartition &partition,
                                double f);

    // Largest square subarray side with (side - 1) < sqrt(2) fc / B, clamped to max_side
    int subarray_size_rule(double carrier, double bandwidth, int max_side);

    // Partition whose subarray sides are the largest divisors of N and M within the size rule
    VirtualPartition choose_partition(const ArrayGeometry &geom, double bandwidth);

    // Frequency-flat beam a(dir, 0) / sqrt(N_B)
    cvec narrowband_combiner(const ArrayGeometry &geom, const Direction &dir);

    // Frequency-selective beam a(dir, f) / sqrt(N_B), only realizable with a fully digital array
    cvec digital_combiner(const ArrayGeometry &geom, const Direction &dir, double f);

    // Phase shifters steered at a direction plus one true-time-delay per virtual subarray.
    //
    //   f_RF[s] = vec(A(dir, 0) .* T[s]) / sqrt(N_B)
    //   T[s]    = [exp(-j 2 pi f_s Delta_mn)] (x) ones(Mt, Nt)
    //   Delta_mn = n Nt Delta_x + m Mt Delta_y      (0-based subarray indices)
    class TtdCombiner
    {
    public:
        TtdCombiner(const ArrayGeometry &geom, const Direction &steering, const VirtualPartition &partition);

        // Unit-norm combiner at baseband frequency f
        cvec evaluate(double f) const;

        // Delay applied to subarray (n, m) [s]
        double delay(int n, int m) const { return delays_[std::size_t(n) * partition_.msb + m]; }

        // The reference subarray needs no delay line
        int ttd_count() const { return partition_.subarray_count() - 1; }

        const Direction &steering() const { return steering_; }
        const VirtualPartition &partition() const { return partition_; }
        const ArrayGeometry &geometry() const { return geom_; }

    private:
        ArrayGeometry geom_;
        Direction steering_;
        VirtualPartition partition_;
        cvec phases_;                // a(dir, 0) / sqrt(N_B)
        std::vector<double> delays_; // nsb x msb, row-major over (n, m)
    };

    // Known (or estimated) path used to steer a combiner
    struct PathEstimate
    {
        Direction doa;
        std::vector<cdouble> coefficient; // per-subcarrier gain multiplying a(doa, f_s)
    };

    // Per-subcarrier hybrid combiner F[s] = F_RF[s] F_BB[s]
    struct HybridCombiner
    {
        std::vector<cmat> rf;
        std::vector<cmat> baseband;

        int subcarriers() const { return int(rf.size()); }
        cmat combiner(int s) const { return rf[s] * baseband[s]; }

        // Sum of the baseband outputs: F[s] * 1
        cvec effective(int s) const { return combiner(s).rowwise().sum(); }
    };

    enum class BeamKind
    {
        digital,    // a(dir, f_s) / sqrt(N_B)
        ttd,        // TtdCombiner
        narrowband  // a(dir, 0) / sqrt(N_B)
    };

    // One RF column per path, diagonal baseband weights sqrt(N_B) g_l[s] / ||h_hat[s]||
    HybridCombiner multipath_mrc(const ArrayGeometry &geom, const OfdmGrid &grid, const std::vector<PathEstimate> &paths,
                                 int rf_chains, BeamKind kind, const VirtualPartition &partition);

    // Ground-truth path coefficients of a channel (element gain and delay phase included)
    std::vector<PathEstimate> true_path_estimates(const PathSet &paths, const LinkSetup &link);

    enum class SvdScheme
    {
        digital,
        proposed,
        narrowband
    };

    // Effective singular values per subcarrier; streams beyond the numerical rank are dropped
    struct SvdTransmission
    {
        std::vector<rvec> singular_values;
    };

    // Hybrid SVD transmission for a multi-antenna user. The RF stage of the hybrid
    // schemes is a matched filter of H_B(f) = [a_B(dir_l, f)]; its output is whitened
    // before the SVD so that the noise at the baseband stays white.
    SvdTransmission hybrid_svd_design(const ChannelRealization &channel, const ArrayGeometry &geom,
                                      const std::vector<Direction> &bs_directions, int rf_chains, SvdScheme scheme,
                                      const VirtualPartition &partition);

    // p = max(0, mu - noise / g) with sum p = budget; gains are squared singular values
    std::vector<double> waterfilling(const std::vector<double> &gains, double noise, double budget);
}

#endif
