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

#include "thz/combining.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace thz
{
    double normalized_array_gain(const cvec &combiner, const cvec &response)
    {
        if (combiner.size() != response.size())
            throw std::invalid_argument("normalized_array_gain: size mismatch");
        return std::norm(combiner.dot(response)) / double(response.size());
    }

    double normalized_array_gain(const cvec &combiner, const ArrayGeometry &geom, const Direction &dir, double f)
    {
        return normalized_array_gain(combiner, upa_response(geom, dir, f));
    }

    double narrowband_gain_closed_form(const ArrayGeometry &geom, const Direction &dir, double f)
    {
        const double gx = dirichlet(geom.rows, 2.0 * kPi * f * delay_step_x(geom, dir));
        const double gy = dirichlet(geom.cols, 2.0 * kPi * f * delay_step_y(geom, dir));
        return gx * gx * gy * gy;
    }

    double ttd_gain_closed_form(const ArrayGeometry &geom, const Direction &dir, const VirtualPartition &partition,
                                double f)
    {
        const double gx = dirichlet(partition.sub_rows(geom), 2.0 * kPi * f * delay_step_x(geom, dir));
        const double gy = dirichlet(partition.sub_cols(geom), 2.0 * kPi * f * delay_step_y(geom, dir));
        return gx * gx * gy * gy;
    }

    int subarray_size_rule(double carrier, double bandwidth, int max_side)
    {
        if (!(bandwidth > 0.0))
            throw std::invalid_argument("subarray_size_rule: bandwidth must be positive");
        const double bound = std::sqrt(2.0) * carrier / bandwidth;
        if (bound >= max_side)
            return max_side;
        // (side - 1) < bound
        int side = int(std::ceil(bound));
        if (side - 1 >= bound)
            --side;
        return std::clamp(side, 1, max_side);
    }

    VirtualPartition choose_partition(const ArrayGeometry &geom, double bandwidth)
    {
        auto largest_divisor = [](int n, int limit)
        {
            for (int k = std::min(n, limit); k > 1; --k)
                if (n % k == 0)
                    return k;
            return 1;
        };
        const int nt = largest_divisor(geom.rows, subarray_size_rule(geom.carrier, bandwidth, geom.rows));
        const int mt = largest_divisor(geom.cols, subarray_size_rule(geom.carrier, bandwidth, geom.cols));
        return {geom.rows / nt, geom.cols / mt};
    }

    cvec narrowband_combiner(const ArrayGeometry &geom, const Direction &dir)
    {
        return upa_response(geom, dir, 0.0) / std::sqrt(double(geom.size()));
    }

    cvec digital_combiner(const ArrayGeometry &geom, const Direction &dir, double f)
    {
        return upa_response(geom, dir, f) / std::sqrt(double(geom.size()));
    }

    TtdCombiner::TtdCombiner(const ArrayGeometry &geom, const Direction &steering, const VirtualPartition &partition)
        : geom_(geom), steering_(steering), partition_(partition)
    {
        geom_.validate();
        partition_.validate(geom_);

        phases_ = narrowband_combiner(geom_, steering_);

        const double dx = delay_step_x(geom_, steering_);
        const double dy = delay_step_y(geom_, steering_);
        const int nt = partition_.sub_rows(geom_);
        const int mt = partition_.sub_cols(geom_);
        delays_.resize(std::size_t(partition_.subarray_count()));
        for (int n = 0; n < partition_.nsb; ++n)
            for (int m = 0; m < partition_.msb; ++m)
                delays_[std::size_t(n) * partition_.msb + m] = n * nt * dx + m * mt * dy;
    }

    cvec TtdCombiner::evaluate(double f) const
    {
        const int nt = partition_.sub_rows(geom_);
        const int mt = partition_.sub_cols(geom_);

        std::vector<cdouble> taps(delays_.size());
        for (std::size_t k = 0; k < delays_.size(); ++k)
            taps[k] = phasor(f * delays_[k]);

        cvec w(geom_.size());
        for (int n = 0; n < geom_.rows; ++n)
            for (int m = 0; m < geom_.cols; ++m)
            {
                const Index i = geom_.index(n, m);
                w[i] = phases_[i] * taps[std::size_t(n / nt) * partition_.msb + m / mt];
            }
        return w;
    }

    namespace
    {
        cvec beam(const ArrayGeometry &geom, const Direction &dir, double f, BeamKind kind,
                  const VirtualPartition &partition)
        {
            switch (kind)
            {
            case BeamKind::digital:
                return digital_combiner(geom, dir, f);
            case BeamKind::narrowband:
                return narrowband_combiner(geom, dir);
            case BeamKind::ttd:
                break;
            }
            return TtdCombiner(geom, dir, partition).evaluate(f);
        }
    }

    HybridCombiner multipath_mrc(const ArrayGeometry &geom, const OfdmGrid &grid, const std::vector<PathEstimate> &paths,
                                 int rf_chains, BeamKind kind, const VirtualPartition &partition)
    {
        const int L = int(paths.size());
        if (L == 0)
            throw std::invalid_argument("multipath_mrc: no paths");
        if (rf_chains < L)
            throw std::invalid_argument("multipath_mrc: " + std::to_string(L) + " paths need as many RF chains, got " +
                                        std::to_string(rf_chains));
        for (const auto &p : paths)
            if (int(p.coefficient.size()) != grid.subcarriers)
                throw std::invalid_argument("multipath_mrc: path coefficients do not match the subcarrier count");

        const double sqrt_nb = std::sqrt(double(geom.size()));
        const int S = grid.subcarriers;

        // TTD networks are frequency independent; build them once
        std::vector<TtdCombiner> ttd;
        if (kind == BeamKind::ttd)
            for (const auto &p : paths)
                ttd.emplace_back(geom, p.doa, partition);

        HybridCombiner out{std::vector<cmat>(S), std::vector<cmat>(S)};
#pragma omp parallel for schedule(static)
        for (int s = 0; s < S; ++s)
        {
            const double f = grid.frequency(s);
            cmat rf(geom.size(), L);
            cvec h_hat = cvec::Zero(geom.size());
            for (int l = 0; l < L; ++l)
            {
                rf.col(l) = kind == BeamKind::ttd ? ttd[l].evaluate(f) : beam(geom, paths[l].doa, f, kind, partition);
                h_hat += paths[l].coefficient[s] * upa_response(geom, paths[l].doa, f);
            }
            const double norm = h_hat.norm();
            cmat bb = cmat::Zero(L, L);
            if (norm > 0.0)
                for (int l = 0; l < L; ++l)
                    bb(l, l) = sqrt_nb * paths[l].coefficient[s] / norm;
            out.rf[s] = std::move(rf);
            out.baseband[s] = std::move(bb);
        }
        return out;
    }

    std::vector<PathEstimate> true_path_estimates(const PathSet &paths, const LinkSetup &link)
    {
        std::vector<PathEstimate> out;
        out.reserve(paths.size());
        for (const auto &p : paths)
        {
            PathEstimate e{p.doa, std::vector<cdouble>(link.grid.subcarriers)};
            for (int s = 0; s < link.grid.subcarriers; ++s)
                e.coefficient[s] = path_coefficient(p, link.grid.frequency(s), link);
            out.push_back(std::move(e));
        }
        return out;
    }

    namespace
    {
        rvec significant(const rvec &sv, Index limit)
        {
            const double tol = sv.size() > 0 ? 1e-10 * sv[0] : 0.0;
            Index k = 0;
            while (k < sv.size() && k < limit && sv[k] > tol)
                ++k;
            return sv.head(k);
        }
    }

    SvdTransmission hybrid_svd_design(const ChannelRealization &channel, const ArrayGeometry &geom,
                                      const std::vector<Direction> &bs_directions, int rf_chains, SvdScheme scheme,
                                      const VirtualPartition &partition)
    {
        const int S = channel.subcarriers();
        if (S == 0)
            throw std::invalid_argument("hybrid_svd_design: empty channel");
        if (channel.response.front().rows() != geom.size())
            throw std::invalid_argument("hybrid_svd_design: channel does not match the BS array");
        if (scheme != SvdScheme::digital)
        {
            if (bs_directions.empty())
                throw std::invalid_argument("hybrid_svd_design: hybrid schemes need path directions");
            if (int(bs_directions.size()) > rf_chains)
                throw std::invalid_argument("hybrid_svd_design: more paths than RF chains");
        }

        const Index nu = channel.response.front().cols();
        std::vector<TtdCombiner> ttd;
        if (scheme == SvdScheme::proposed)
            for (const auto &d : bs_directions)
                ttd.emplace_back(geom, d, partition);

        SvdTransmission out{std::vector<rvec>(S)};
#pragma omp parallel for schedule(static)
        for (int s = 0; s < S; ++s)
        {
            const cmat &H = channel.response[s];
            if (scheme == SvdScheme::digital)
            {
                Eigen::JacobiSVD<cmat> svd(H);
                out.singular_values[s] = significant(svd.singularValues(), nu);
                continue;
            }
            const double f = channel.grid.frequency(s);
            const Index L = Index(bs_directions.size());
            cmat rf(geom.size(), L);
            for (Index l = 0; l < L; ++l)
                rf.col(l) = scheme == SvdScheme::proposed ? ttd[l].evaluate(f)
                                                          : narrowband_combiner(geom, bs_directions[l]);

            // Whiten the RF outputs: (F^H F)^{-1/2} F^H H
            Eigen::SelfAdjointEigenSolver<cmat> eig(rf.adjoint() * rf);
            const rvec ev = eig.eigenvalues().cwiseMax(1e-300);
            const cmat inv_sqrt = eig.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                                  eig.eigenvectors().adjoint();
            const cmat eff = inv_sqrt * (rf.adjoint() * H);
            Eigen::JacobiSVD<cmat> svd(eff);
            out.singular_values[s] = significant(svd.singularValues(), std::min<Index>(L, nu));
        }
        return out;
    }

    std::vector<double> waterfilling(const std::vector<double> &gains, double noise, double budget)
    {
        if (!(budget > 0.0))
            throw std::invalid_argument("waterfilling: power budget must be positive");
        if (!(noise > 0.0))
            throw std::invalid_argument("waterfilling: noise power must be positive");
        double max_floor = 0.0;
        bool any = false;
        for (double g : gains)
        {
            if (g < 0.0)
                throw std::invalid_argument("waterfilling: negative channel gain");
            if (g > 0.0)
            {
                any = true;
                max_floor = std::max(max_floor, noise / g);
            }
        }
        if (!any)
            throw std::invalid_argument("waterfilling: all channel gains are zero");

        auto allocate = [&](double level, std::vector<double> &p)
        {
            double total = 0.0;
            for (std::size_t i = 0; i < gains.size(); ++i)
            {
                p[i] = gains[i] > 0.0 ? std::max(0.0, level - noise / gains[i]) : 0.0;
                total += p[i];
            }
            return total;
        };

        std::vector<double> p(gains.size());
        double lo = 0.0;
        double hi = budget + max_floor;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (allocate(mid, p) > budget)
                hi = mid;
            else
                lo = mid;
        }
        const double total = allocate(0.5 * (lo + hi), p);
        // Remove the residual bisection error on the active set
        if (total > 0.0)
            for (double &v : p)
                v *= budget / total;
        return p;
    }
}
