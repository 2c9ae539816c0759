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

#include "thz/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "thz/kernels.hpp"

namespace thz
{
    namespace
    {
        constexpr double kMaxCondition = 1e12;
        constexpr double kRankTolerance = 1e-10;

        double hermitian_condition(const cmat &gram)
        {
            const Eigen::SelfAdjointEigenSolver<cmat> eig(gram, Eigen::EigenvaluesOnly);
            const rvec &ev = eig.eigenvalues();
            if (!(ev[0] > 0.0))
                return std::numeric_limits<double>::infinity();
            return ev[ev.size() - 1] / ev[0];
        }

        cvec solve_least_squares(const cmat &a, const cvec &y)
        {
            Eigen::ColPivHouseholderQR<cmat> qr(a);
            qr.setThreshold(kRankTolerance);
            return qr.solve(y);
        }

        cmat axis_dictionary(int count, int grid, double cycles_scale)
        {
            cmat a(count, grid);
            for (int q = 0; q < grid; ++q)
            {
                const double nu = cycles_scale * grid_value(grid, q);
                for (int n = 0; n < count; ++n)
                    a(n, q) = phasor(n * nu);
            }
            return a;
        }

        int nearest_index(int grid, double value)
        {
            const int half = (grid - 1) / 2;
            const long i = std::lround(value * grid) + half;
            return int(std::clamp<long>(i, 0, grid - 1));
        }

        void check_odd(int g, const char *what)
        {
            if (g < 1 || g % 2 == 0)
                throw std::invalid_argument(std::string("build_dictionary: ") + what + " must be a positive odd number");
        }
    }

    TrainingEnsemble build_training(int antennas, int rf_chains, int slots, double pilot_power, Rng &rng)
    {
        if (antennas < 1 || rf_chains < 1 || slots < 1)
            throw std::invalid_argument("build_training: antennas, chains and slots must be positive");
        if (rf_chains > antennas)
            throw std::invalid_argument("build_training: more RF chains than antennas");
        if (!(pilot_power > 0.0))
            throw std::invalid_argument("build_training: pilot power must be positive");

        TrainingEnsemble ens;
        ens.antennas = antennas;
        ens.rf_chains = rf_chains;
        ens.slots = slots;
        ens.pilot_power = pilot_power;
        ens.rf.resize(antennas, ens.beams());
        ens.baseband.resize(slots);
        auto combiner = std::make_shared<cmat>(antennas, ens.beams());

        const double amp = 1.0 / std::sqrt(double(antennas));
        std::bernoulli_distribution coin(0.5);
        for (int t = 0; t < slots; ++t)
        {
            auto blk = ens.rf.middleCols(Index(t) * rf_chains, rf_chains);
            cmat gram;
            do
            {
                for (Index c = 0; c < blk.cols(); ++c)
                    for (Index r = 0; r < blk.rows(); ++r)
                        blk(r, c) = coin(rng) ? amp : -amp;
                gram = blk.adjoint() * blk;
            } while (hermitian_condition(gram) > kMaxCondition);

            // gram = L L^H = D^H D with D = L^H
            const Eigen::LLT<cmat> llt(gram);
            const cmat d = llt.matrixU();
            ens.baseband[t] = d.triangularView<Eigen::Upper>().solve(cmat::Identity(rf_chains, rf_chains));
            combiner->middleCols(Index(t) * rf_chains, rf_chains) = blk * ens.baseband[t];
        }
        ens.combiner = std::move(combiner);
        return ens;
    }

    TrainingEnsemble dft_training(int antennas, double pilot_power)
    {
        if (antennas < 1)
            throw std::invalid_argument("dft_training: antennas must be positive");
        if (!(pilot_power > 0.0))
            throw std::invalid_argument("dft_training: pilot power must be positive");

        TrainingEnsemble ens;
        ens.antennas = antennas;
        ens.rf_chains = 1;
        ens.slots = antennas;
        ens.pilot_power = pilot_power;
        ens.rf.resize(antennas, antennas);
        const double amp = 1.0 / std::sqrt(double(antennas));
        for (int k = 0; k < antennas; ++k)
            for (int n = 0; n < antennas; ++n)
            {
                // reduce the product first so large arrays keep full phase accuracy
                const long long prod = (static_cast<long long>(n) * k) % antennas;
                ens.rf(n, k) = amp * phasor(double(prod) / antennas);
            }
        ens.baseband.assign(antennas, cmat::Identity(1, 1));
        ens.combiner = std::make_shared<const cmat>(ens.rf);
        return ens;
    }

    cvec effective_noise(const TrainingEnsemble &ens, double variance, Rng &rng)
    {
        const cmat &w = *ens.combiner;
        cvec out(ens.beams());
        cvec n(ens.antennas);
        for (int t = 0; t < ens.slots; ++t)
        {
            for (Index i = 0; i < n.size(); ++i)
                n[i] = complex_normal(rng, variance);
            out.segment(Index(t) * ens.rf_chains, ens.rf_chains).noalias() =
                w.middleCols(Index(t) * ens.rf_chains, ens.rf_chains).adjoint() * n;
        }
        return out;
    }

    cvec measure(const TrainingEnsemble &ens, const cvec &h, double variance, Rng &rng)
    {
        if (h.size() != ens.antennas)
            throw std::invalid_argument("measure: channel length does not match the ensemble");
        cvec y = std::sqrt(ens.pilot_power) * (ens.combiner->adjoint() * h);
        if (variance > 0.0)
            y += effective_noise(ens, variance, rng);
        return y;
    }

    cvec measure(const TrainingEnsemble &ens, const cmat &h, const cmat &user_pilots, double variance, Rng &rng)
    {
        if (h.rows() != ens.antennas || h.cols() != user_pilots.rows())
            throw std::invalid_argument("measure: channel, ensemble and user pilots disagree in size");
        const Index beams = ens.beams();
        const cmat clean = std::sqrt(ens.pilot_power) * (ens.combiner->adjoint() * h * user_pilots);
        cvec y(beams * user_pilots.cols());
        for (Index i = 0; i < user_pilots.cols(); ++i)
        {
            y.segment(i * beams, beams) = clean.col(i);
            if (variance > 0.0)
                y.segment(i * beams, beams) += effective_noise(ens, variance, rng);
        }
        return y;
    }

    cmat user_pilot_beams(int antennas, int count, Rng &rng)
    {
        if (antennas < 1 || count < 1)
            throw std::invalid_argument("user_pilot_beams: sizes must be positive");
        const double amp = 1.0 / std::sqrt(double(antennas));
        std::bernoulli_distribution coin(0.5);
        cmat v(antennas, count);
        // Redraw until V has full rank; a singular V aliases user-side atoms
        for (int attempt = 0; attempt < 1000; ++attempt)
        {
            for (Index c = 0; c < v.cols(); ++c)
                for (Index r = 0; r < v.rows(); ++r)
                    v(r, c) = coin(rng) ? amp : -amp;
            const rvec sv = Eigen::JacobiSVD<cmat>(v).singularValues();
            if (sv[sv.size() - 1] > 1e-12 * sv[0])
                return v;
        }
        throw std::runtime_error("user_pilot_beams: no full-rank draw");
    }

    cvec ls_estimate(const cvec &y, const TrainingEnsemble &ens)
    {
        if (ens.beams() < ens.antennas)
            throw std::invalid_argument("ls_estimate: underdetermined system, need N_beam >= N_B");
        if (y.size() != ens.beams())
            throw std::invalid_argument("ls_estimate: measurement length does not match the ensemble");
        const cmat q = std::sqrt(ens.pilot_power) * ens.combiner->adjoint();
        return solve_least_squares(q, y);
    }

    double ls_mse(int antennas, double pilot_power, double noise_variance)
    {
        if (antennas < 1 || !(pilot_power > 0.0) || noise_variance < 0.0)
            throw std::invalid_argument("ls_mse: invalid arguments");
        return noise_variance * antennas / pilot_power;
    }

    double grid_value(int size, int i) { return (i - 0.5 * (size - 1)) / size; }

    SpatialFrequency WidebandDictionary::grid_point(Index g) const
    {
        return {grid_value(grid_x, int(g / grid_y)), grid_value(grid_y, int(g % grid_y))};
    }

    Index WidebandDictionary::nearest(const SpatialFrequency &sf) const
    {
        return Index(nearest_index(grid_x, sf.x)) * grid_y + nearest_index(grid_y, sf.y);
    }

    cvec WidebandDictionary::column(int s, Index g) const { return kernels::kron_column(ax.at(s), ay.at(s), g); }

    cmat WidebandDictionary::matrix(int s) const { return kernels::kron(ax.at(s), ay.at(s)); }

    std::optional<Direction> WidebandDictionary::direction(Index g) const
    {
        const SpatialFrequency nu = grid_point(g);
        const double to_spatial = 0.5 / spacing_ratio;
        const SpatialFrequency sf{nu.x * to_spatial, nu.y * to_spatial};
        if (sf.x * sf.x + sf.y * sf.y > 0.25)
            return std::nullopt;
        return spatial_to_angles(sf);
    }

    WidebandDictionary build_dictionary(const ArrayGeometry &geom, const OfdmGrid &grid, int gx, int gy,
                                        bool frequency_flat)
    {
        geom.validate();
        grid.validate();
        check_odd(gx, "G_x");
        check_odd(gy, "G_y");

        WidebandDictionary dict;
        dict.rows = geom.rows;
        dict.cols = geom.cols;
        dict.grid_x = gx;
        dict.grid_y = gy;
        dict.spacing_ratio = geom.spacing / geom.wavelength();
        dict.ax.resize(grid.subcarriers);
        dict.ay.resize(grid.subcarriers);
        for (int s = 0; s < grid.subcarriers; ++s)
        {
            const double rel = frequency_flat ? 1.0 : 1.0 + grid.frequency(s) / geom.carrier;
            dict.ax[s] = axis_dictionary(geom.rows, gx, rel);
            dict.ay[s] = axis_dictionary(geom.cols, gy, rel);
        }
        return dict;
    }

    std::vector<cmat> build_user_dictionary(const UserArray &user, double carrier, const OfdmGrid &grid, int gu,
                                            bool frequency_flat)
    {
        if (user.count < 1 || !(user.spacing > 0.0) || !(carrier > 0.0))
            throw std::invalid_argument("build_user_dictionary: invalid user array");
        grid.validate();
        check_odd(gu, "G_u");
        std::vector<cmat> out(grid.subcarriers);
        for (int s = 0; s < grid.subcarriers; ++s)
        {
            const double rel = frequency_flat ? 1.0 : 1.0 + grid.frequency(s) / carrier;
            out[s] = axis_dictionary(user.count, gu, rel);
        }
        return out;
    }

    SensingOperator::SensingOperator(std::shared_ptr<const cmat> combiner, cmat ax, cmat ay, double scale)
        : SensingOperator(std::move(combiner), std::move(ax), std::move(ay), nullptr, cmat::Ones(1, 1), scale)
    {
    }

    SensingOperator::SensingOperator(std::shared_ptr<const cmat> combiner, cmat ax, cmat ay,
                                     std::shared_ptr<const cmat> user_pilots, cmat au, double scale)
        : w_(std::move(combiner)), v_(std::move(user_pilots)), ax_(std::move(ax)), ay_(std::move(ay)),
          au_(std::move(au)), scale_(scale)
    {
        if (!w_ || w_->rows() != ax_.rows() * ay_.rows())
            throw std::invalid_argument("SensingOperator: combiner rows do not match the BS dictionary");
        const Index nu = v_ ? v_->rows() : 1;
        if (au_.rows() != nu)
            throw std::invalid_argument("SensingOperator: user pilots do not match the user dictionary");
    }

    Index SensingOperator::rows() const { return w_->cols() * (v_ ? v_->cols() : 1); }

    Index SensingOperator::cols() const { return bs_size() * au_.cols(); }

    cvec SensingOperator::adjoint(const cvec &r) const
    {
        if (r.size() != rows())
            throw std::invalid_argument("SensingOperator::adjoint: length mismatch");
        if (!v_)
            return scale_ * kernels::kron_adjoint(ax_, ay_, *w_ * r);

        const Index beams = w_->cols();
        const Eigen::Map<const cmat> rm(r.data(), beams, v_->cols());
        const cmat x = *w_ * rm * v_->adjoint(); // N_B x N_U
        cmat bs(bs_size(), x.cols());
        for (Index u = 0; u < x.cols(); ++u)
            bs.col(u) = kernels::kron_adjoint(ax_, ay_, x.col(u));
        const cmat z = bs * au_;
        return scale_ * Eigen::Map<const cvec>(z.data(), z.size());
    }

    cvec SensingOperator::column(Index g) const
    {
        const Index gb = g % bs_size(), gu = g / bs_size();
        const cvec b = w_->adjoint() * kernels::kron_column(ax_, ay_, gb);
        if (!v_)
            return scale_ * b;
        const cvec u = v_->transpose() * au_.col(gu).conjugate();
        cvec out(rows());
        for (Index i = 0; i < u.size(); ++i)
            out.segment(i * b.size(), b.size()) = scale_ * u[i] * b;
        return out;
    }

    cvec SensingOperator::atom(Index g) const
    {
        const Index gb = g % bs_size(), gu = g / bs_size();
        const cvec a = kernels::kron_column(ax_, ay_, gb);
        if (!v_)
            return a;
        const Index nb = a.size();
        cvec out(nb * au_.rows());
        for (Index i = 0; i < au_.rows(); ++i)
            out.segment(i * nb, nb) = std::conj(au_(i, gu)) * a;
        return out;
    }

    cmat SensingOperator::atoms(const std::vector<Index> &support) const
    {
        cmat out(w_->rows() * au_.rows(), Index(support.size()));
        for (size_t k = 0; k < support.size(); ++k)
            out.col(Index(k)) = atom(support[k]);
        return out;
    }

    cmat SensingOperator::dense() const
    {
        if (!v_)
            return kernels::structured_product(*w_, ax_, ay_, scale_);
        cmat out(rows(), cols());
#pragma omp parallel for schedule(static)
        for (Index g = 0; g < out.cols(); ++g)
            out.col(g) = column(g);
        return out;
    }

    std::vector<SensingOperator> sensing_operators(const TrainingEnsemble &ens, const WidebandDictionary &dict)
    {
        std::vector<SensingOperator> ops;
        ops.reserve(dict.subcarriers());
        for (int s = 0; s < dict.subcarriers(); ++s)
            ops.emplace_back(ens.combiner, dict.ax[s], dict.ay[s], std::sqrt(ens.pilot_power));
        return ops;
    }

    std::vector<SensingOperator> sensing_operators(const TrainingEnsemble &ens, const WidebandDictionary &dict,
                                                   std::shared_ptr<const cmat> user_pilots,
                                                   const std::vector<cmat> &user_dict)
    {
        if (int(user_dict.size()) != dict.subcarriers())
            throw std::invalid_argument("sensing_operators: dictionaries disagree on the subcarrier count");
        std::vector<SensingOperator> ops;
        ops.reserve(dict.subcarriers());
        for (int s = 0; s < dict.subcarriers(); ++s)
            ops.emplace_back(ens.combiner, dict.ax[s], dict.ay[s], user_pilots, user_dict[s],
                             std::sqrt(ens.pilot_power));
        return ops;
    }

    namespace
    {
        void check_problem(const std::vector<SensingOperator> &phi, const std::vector<cvec> &y)
        {
            if (phi.empty() || phi.size() != y.size())
                throw std::invalid_argument("gsomp: need one measurement per sensing operator");
            for (size_t s = 0; s < phi.size(); ++s)
                if (phi[s].rows() != y[s].size() || phi[s].cols() != phi.front().cols())
                    throw std::invalid_argument("gsomp: measurement or dictionary size mismatch");
        }

        double mean_of(const std::vector<double> &v)
        {
            return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
        }

        // Greedy common-support detection on the given subcarriers
        EstimateResult detect_support(const std::vector<SensingOperator> &phi, const std::vector<cvec> &y,
                                      const std::vector<int> &detection, const SolverOptions &opt)
        {
            const Index nd = Index(detection.size());
            const Index rows = phi.front().rows();
            Index cap = std::min(rows, phi.front().cols());
            if (opt.expected_paths > 0)
                cap = std::min<Index>(cap, 4 * Index(opt.expected_paths));

            EstimateResult res;
            std::vector<cvec> residual(nd);
            std::vector<cmat> basis(nd);
            std::vector<double> change(nd);
            for (Index d = 0; d < nd; ++d)
            {
                residual[d] = y[detection[d]];
                change[d] = residual[d].squaredNorm();
                basis[d].resize(rows, 0);
            }
            double mse = mean_of(change);

            cmat corr(phi.front().cols(), nd);
            while (mse > opt.threshold && Index(res.support.size()) < cap)
            {
#pragma omp parallel for schedule(static)
                for (Index d = 0; d < nd; ++d)
                    corr.col(d) = phi[detection[d]].adjoint(residual[d]);

                const rvec score = kernels::summed_magnitude(corr, res.support);
                const Index g = kernels::argmax_first(score);
                if (score[g] < 0.0)
                    break;
                res.support.push_back(g);

#pragma omp parallel for schedule(static)
                for (Index d = 0; d < nd; ++d)
                {
                    const SensingOperator &op = phi[detection[d]];
                    basis[d].conservativeResize(Eigen::NoChange, basis[d].cols() + 1);
                    basis[d].col(basis[d].cols() - 1) = op.column(g);
                    const cvec &yd = y[detection[d]];
                    const cvec next = yd - basis[d] * solve_least_squares(basis[d], yd);
                    change[d] = (next - residual[d]).squaredNorm();
                    residual[d] = next;
                }
                mse = mean_of(change);
                res.residual_trace.push_back(mse);
                ++res.iterations;
            }

            if (mse <= opt.threshold)
            {
                // the newest atom moved the residual by no more than the noise floor
                if (res.iterations > 0)
                    res.support.pop_back();
            }
            else
                res.cap_hit = Index(res.support.size()) >= cap;
            return res;
        }

        void prune_support(const std::vector<SensingOperator> &phi, const std::vector<cvec> &y,
                           const SolverOptions &opt, EstimateResult &res)
        {
            fit_support(phi, y, res);
            std::vector<Index> kept;
            for (size_t k = 0; k < res.support.size(); ++k)
            {
                double power = 0.0;
                for (size_t s = 0; s < phi.size(); ++s)
                {
                    const double col = phi[s].column(res.support[k]).squaredNorm();
                    power += std::norm(res.gains[s][Index(k)]) * col / double(phi[s].rows());
                }
                if (power / double(phi.size()) > opt.noise_variance)
                    kept.push_back(res.support[k]);
            }
            res.support = std::move(kept);
        }
    }

    void fit_support(const std::vector<SensingOperator> &phi, const std::vector<cvec> &y, EstimateResult &res)
    {
        const Index ns = Index(phi.size());
        res.gains.assign(ns, cvec());
        res.channel.assign(ns, cvec());
#pragma omp parallel for schedule(static)
        for (Index s = 0; s < ns; ++s)
        {
            const SensingOperator &op = phi[s];
            const cmat atoms = op.atoms(res.support);
            if (res.support.empty())
            {
                res.gains[s] = cvec(0);
                res.channel[s] = cvec::Zero(atoms.rows());
                continue;
            }
            cmat restricted(op.rows(), Index(res.support.size()));
            for (size_t k = 0; k < res.support.size(); ++k)
                restricted.col(Index(k)) = op.column(res.support[k]);
            res.gains[s] = solve_least_squares(restricted, y[s]);
            res.channel[s] = atoms * res.gains[s];
        }
    }

    EstimateResult gsomp_ss(const std::vector<SensingOperator> &phi, const std::vector<cvec> &y,
                            const std::vector<int> &detection, const SolverOptions &opt)
    {
        check_problem(phi, y);
        if (detection.empty())
            throw std::invalid_argument("gsomp_ss: empty detection subset");
        for (int d : detection)
            if (d < 0 || d >= int(phi.size()))
                throw std::out_of_range("gsomp_ss: detection subcarrier out of range");
        if (!(opt.threshold > 0.0))
            throw std::invalid_argument("gsomp: threshold must be positive");

        EstimateResult res = detect_support(phi, y, detection, opt);
        if (opt.prune)
            prune_support(phi, y, opt, res);
        fit_support(phi, y, res);
        return res;
    }

    EstimateResult gsomp(const std::vector<SensingOperator> &phi, const std::vector<cvec> &y, const SolverOptions &opt)
    {
        std::vector<int> all(phi.size());
        std::iota(all.begin(), all.end(), 0);
        return gsomp_ss(phi, y, all, opt);
    }

    EstimateResult omp(const SensingOperator &phi, const cvec &y, const SolverOptions &opt)
    {
        return gsomp({phi}, {y}, opt);
    }

    std::vector<int> pilot_subset(int subcarriers, int stride)
    {
        if (subcarriers < 1 || stride < 1)
            throw std::invalid_argument("pilot_subset: subcarriers and stride must be positive");
        std::vector<int> out;
        for (int start = 0; start < subcarriers; start += stride)
            out.push_back(start + (std::min(stride, subcarriers - start) - 1) / 2);
        return out;
    }

    cmat error_covariance(const cmat &sensing_support, const cmat &atoms_support, double noise_variance)
    {
        if (sensing_support.cols() != atoms_support.cols())
            throw std::invalid_argument("error_covariance: support sizes differ");
        if (sensing_support.cols() == 0)
            return cmat::Zero(atoms_support.rows(), atoms_support.rows());
        Eigen::ColPivHouseholderQR<cmat> qr(sensing_support);
        qr.setThreshold(kRankTolerance);
        if (qr.rank() < sensing_support.cols())
            throw std::domain_error("error_covariance: restricted sensing matrix is rank deficient");
        const cmat fisher = sensing_support.adjoint() * sensing_support;
        const cmat inv_at = fisher.llt().solve(atoms_support.adjoint());
        cmat r = noise_variance * atoms_support * inv_at;
        return 0.5 * (r + r.adjoint());
    }

    double crlb_mse(const cmat &sensing_support, const cmat &atoms_support, double noise_variance)
    {
        if (sensing_support.cols() != atoms_support.cols())
            throw std::invalid_argument("crlb_mse: support sizes differ");
        if (sensing_support.cols() == 0)
            return 0.0;
        Eigen::ColPivHouseholderQR<cmat> qr(sensing_support);
        qr.setThreshold(kRankTolerance);
        if (qr.rank() < sensing_support.cols())
            throw std::domain_error("crlb_mse: restricted sensing matrix is rank deficient");
        const cmat fisher = sensing_support.adjoint() * sensing_support;
        const cmat gram = atoms_support.adjoint() * atoms_support;
        // tr(A F^-1 A^H) = tr(F^-1 A^H A)
        return noise_variance * fisher.llt().solve(gram).trace().real();
    }

    double total_coherence(const cmat &phi)
    {
        cmat unit = phi;
        for (Index j = 0; j < unit.cols(); ++j)
        {
            const double n = unit.col(j).norm();
            if (!(n > 0.0))
                throw std::invalid_argument("total_coherence: zero column");
            unit.col(j) /= n;
        }
        const cmat gram = unit.adjoint() * unit;
        double sum = 0.0;
        for (Index j = 0; j < gram.cols(); ++j)
            for (Index i = 0; i < gram.rows(); ++i)
                if (i != j)
                    sum += std::abs(gram(i, j));
        return sum;
    }

    PathSet draw_on_grid_paths(const StatConfig &cfg, const WidebandDictionary &dict, int min_separation, Rng &rng,
                               int user_grid, double user_spacing_ratio)
    {
        PathSet paths = sample_random_channel(cfg, rng);
        std::uniform_real_distribution<double> azimuth(-kPi, kPi);
        std::uniform_real_distribution<double> polar(-0.5 * kPi, 0.5 * kPi);
        const double ratio = dict.spacing_ratio;

        std::vector<std::pair<int, int>> taken;
        for (auto &p : paths)
        {
            for (int attempt = 0;; ++attempt)
            {
                if (attempt > 100000)
                    throw std::runtime_error("draw_on_grid_paths: cannot place separated paths on the grid");
                const SpatialFrequency sf = angles_to_spatial(p.doa);
                const int q = nearest_index(dict.grid_x, 2.0 * ratio * sf.x);
                const int r = nearest_index(dict.grid_y, 2.0 * ratio * sf.y);
                const SpatialFrequency snapped{grid_value(dict.grid_x, q) * 0.5 / ratio,
                                               grid_value(dict.grid_y, r) * 0.5 / ratio};
                const bool visible = snapped.x * snapped.x + snapped.y * snapped.y <= 0.25;
                const bool apart = std::all_of(taken.begin(), taken.end(), [&](const auto &t) {
                    return std::abs(t.first - q) >= min_separation || std::abs(t.second - r) >= min_separation;
                });
                if (visible && apart)
                {
                    const Direction d = spatial_to_angles(snapped);
                    p.doa = p.doa.polar < 0.0 ? Direction{std::remainder(d.azimuth + kPi, 2.0 * kPi), -d.polar} : d;
                    taken.emplace_back(q, r);
                    break;
                }
                const double phi = azimuth(rng);
                p.doa = {phi, polar(rng)};
            }
            if (user_grid > 0)
            {
                const int u = nearest_index(user_grid, user_spacing_ratio * std::sin(p.aod));
                p.aod = std::asin(std::clamp(grid_value(user_grid, u) / user_spacing_ratio, -1.0, 1.0));
            }
        }
        return paths;
    }
}
