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

#ifndef THZ_ESTIMATION_HPP
#define THZ_ESTIMATION_HPP

#include <memory>
#include <optional>
#include <vector>

#include "thz/channel_model.hpp"

namespace thz
{
    // Pilot combiners for N_slot training slots of N_RF chains each. The RF part is
    // frequency flat, so the whitened effective combiner is shared by all subcarriers.
    struct TrainingEnsemble
    {
        int antennas = 0;
        int rf_chains = 0;
        int slots = 0;
        double pilot_power = 0.0;
        cmat rf;                               // N_B x N_beam
        std::vector<cmat> baseband;            // D_t^-1, N_RF x N_RF per slot
        std::shared_ptr<const cmat> combiner;  // whitened N_B x N_beam

        int beams() const { return slots * rf_chains; }
        cmat slot_combiner(int t) const { return combiner->middleCols(Index(t) * rf_chains, rf_chains); }
    };

    // Random +-1/sqrt(N_B) RF pilots with per-slot Cholesky whitening
    TrainingEnsemble build_training(int antennas, int rf_chains, int slots, double pilot_power, Rng &rng);

    // Full training with the unitary DFT; Q^H Q = P_p I
    TrainingEnsemble dft_training(int antennas, double pilot_power);

    // W^H n stacked over slots, with an independent CN(0, variance I) draw per slot
    cvec effective_noise(const TrainingEnsemble &ens, double variance, Rng &rng);

    // sqrt(P_p) W^H h + effective noise
    cvec measure(const TrainingEnsemble &ens, const cvec &h, double variance, Rng &rng);

    // vec(sqrt(P_p) W^H H V + N); each user pilot column sees fresh slot noise
    cvec measure(const TrainingEnsemble &ens, const cmat &h, const cmat &user_pilots, double variance, Rng &rng);

    // +-1/sqrt(N_U) user pilot beams, N_U x count
    cmat user_pilot_beams(int antennas, int count, Rng &rng);

    // Least squares with the full ensemble; throws std::invalid_argument when N_beam < N_B
    cvec ls_estimate(const cvec &y, const TrainingEnsemble &ens);

    // sigma^2 N_B / P_p
    double ls_mse(int antennas, double pilot_power, double noise_variance);

    // Symmetric grid value (i - (size-1)/2) / size
    double grid_value(int size, int i);

    // Per-subcarrier axis dictionaries. Column g of the joint dictionary is
    // q * G_y + p, matching the response ordering of the array. Grid values are
    // phase cycles per element at the carrier, (d / lambda) sin(theta) cos(phi),
    // which equal the spatial frequencies for half-wavelength spacing.
    struct WidebandDictionary
    {
        int rows = 0, cols = 0;
        int grid_x = 0, grid_y = 0;
        double spacing_ratio = 0.5; // d / lambda
        std::vector<cmat> ax; // N x G_x per subcarrier
        std::vector<cmat> ay; // M x G_y per subcarrier

        Index size() const { return Index(grid_x) * grid_y; }
        int subcarriers() const { return int(ax.size()); }
        SpatialFrequency grid_point(Index g) const;
        Index nearest(const SpatialFrequency &sf) const;
        cvec column(int s, Index g) const;
        cmat matrix(int s) const;

        // Angle read-out; empty for grid points outside the visible disk
        std::optional<Direction> direction(Index g) const;
    };

    // Throws std::invalid_argument on even grids. A frequency-flat dictionary
    // evaluates every subcarrier at the carrier.
    WidebandDictionary build_dictionary(const ArrayGeometry &geom, const OfdmGrid &grid, int gx, int gy,
                                        bool frequency_flat = false);

    // ULA dictionary over the same symmetric grid, N_U x G_u per subcarrier
    std::vector<cmat> build_user_dictionary(const UserArray &user, double carrier, const OfdmGrid &grid, int gu,
                                            bool frequency_flat = false);

    // Phi = scale (V^T (x) W^H)(conj(A_u) (x) A_x (x) A_y), applied through its
    // Kronecker structure. Without a user side V = [1] and A_u = [1].
    class SensingOperator
    {
    public:
        SensingOperator(std::shared_ptr<const cmat> combiner, cmat ax, cmat ay, double scale);
        SensingOperator(std::shared_ptr<const cmat> combiner, cmat ax, cmat ay, std::shared_ptr<const cmat> user_pilots,
                        cmat au, double scale);

        Index rows() const;
        Index cols() const;
        Index bs_size() const { return ax_.cols() * ay_.cols(); }

        cvec adjoint(const cvec &r) const;
        cvec column(Index g) const;
        cvec atom(Index g) const; // dictionary column, vec(H) for multi-antenna users
        cmat atoms(const std::vector<Index> &support) const;
        cmat dense() const;

    private:
        std::shared_ptr<const cmat> w_;
        std::shared_ptr<const cmat> v_;
        cmat ax_, ay_, au_;
        double scale_;
    };

    std::vector<SensingOperator> sensing_operators(const TrainingEnsemble &ens, const WidebandDictionary &dict);
    std::vector<SensingOperator> sensing_operators(const TrainingEnsemble &ens, const WidebandDictionary &dict,
                                                   std::shared_ptr<const cmat> user_pilots,
                                                   const std::vector<cmat> &user_dict);

    struct SolverOptions
    {
        double threshold = 0.0;   // epsilon on the (averaged) residual change
        int expected_paths = 0;   // caps iterations at 4 L when positive
        bool prune = false;       // drop atoms whose measured power is below the noise
        double noise_variance = 0.0;
    };

    struct EstimateResult
    {
        std::vector<Index> support;
        std::vector<cvec> gains;    // per subcarrier, restricted to support
        std::vector<cvec> channel;  // reconstruction per subcarrier
        int iterations = 0;
        bool cap_hit = false;
        std::vector<double> residual_trace; // residual-change MSE per iteration
    };

    EstimateResult omp(const SensingOperator &phi, const cvec &y, const SolverOptions &opt);
    EstimateResult gsomp(const std::vector<SensingOperator> &phi, const std::vector<cvec> &y, const SolverOptions &opt);

    // Support detection on a subset, gains on every subcarrier
    EstimateResult gsomp_ss(const std::vector<SensingOperator> &phi, const std::vector<cvec> &y,
                            const std::vector<int> &detection, const SolverOptions &opt);

    // One pilot subcarrier per stride, centered in each block
    std::vector<int> pilot_subset(int subcarriers, int stride);

    // Per-subcarrier LS on a fixed support and the reconstruction A(I) beta
    void fit_support(const std::vector<SensingOperator> &phi, const std::vector<cvec> &y, EstimateResult &res);

    // R_e = A(I) (Phi(I)^H Phi(I))^-1 A(I)^H sigma^2; throws std::domain_error on rank deficiency
    cmat error_covariance(const cmat &sensing_support, const cmat &atoms_support, double noise_variance);
    double crlb_mse(const cmat &sensing_support, const cmat &atoms_support, double noise_variance);

    // sum over ordered pairs i != j of normalized |<phi_i, phi_j>|; throws on zero columns
    double total_coherence(const cmat &phi);

    // Paths whose directions sit on dictionary grid points inside the visible disk,
    // at least min_separation grid cells apart along one axis. A positive user_grid
    // also snaps departure angles to the user dictionary.
    PathSet draw_on_grid_paths(const StatConfig &cfg, const WidebandDictionary &dict, int min_separation, Rng &rng,
                               int user_grid = 0, double user_spacing_ratio = 0.5);
}

#endif
