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

#include "thz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <stdexcept>

#include "thz/combining.hpp"
#include "thz/estimation.hpp"
#include "thz/metrics.hpp"

namespace thz
{
    namespace
    {
        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

        // One independent stream per trial, seed + trial index; results keep trial order
        template <class R, class F>
        std::vector<R> parallel_trials(int trials, std::uint64_t seed, F &&body)
        {
            std::vector<R> out(trials);
            std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
            for (int t = 0; t < trials; ++t)
            {
                try
                {
                    Rng rng(seed + std::uint64_t(t));
                    out[t] = body(rng);
                }
                catch (...)
                {
#pragma omp critical(thz_trial_error)
                    if (!error)
                        error = std::current_exception();
                }
            }
            if (error)
                std::rethrow_exception(error);
            return out;
        }

        ArrayGeometry bs_geometry(const ExperimentConfig &cfg)
        {
            return ArrayGeometry::half_wavelength(cfg.rows, cfg.cols, cfg.carrier);
        }

        OfdmGrid ofdm_grid(const ExperimentConfig &cfg) { return {cfg.subcarriers, cfg.bandwidth}; }

        VirtualPartition partition_of(const ExperimentConfig &cfg, const ArrayGeometry &geom)
        {
            VirtualPartition p = choose_partition(geom, cfg.bandwidth);
            if (cfg.nsb > 0)
                p.nsb = cfg.nsb;
            if (cfg.msb > 0)
                p.msb = cfg.msb;
            p.validate(geom);
            return p;
        }

        LinkSetup link_of(const ExperimentConfig &cfg, bool multi_user)
        {
            LinkSetup link;
            link.bs = bs_geometry(cfg);
            link.grid = ofdm_grid(cfg);
            if (cfg.element_gain)
                link.pattern = ElementPattern{};
            if (multi_user)
                link.user = UserArray{cfg.user_antennas, 0.5 * link.bs.wavelength()};
            return link;
        }

        double noise_power(const ExperimentConfig &cfg)
        {
            return cfg.bandwidth / cfg.subcarriers * dbm_to_watt(cfg.noise_dbm_per_hz);
        }

        Direction uniform_direction(Rng &rng)
        {
            std::uniform_real_distribution<double> az(-kPi, kPi), pol(-0.5 * kPi, 0.5 * kPi);
            const double phi = az(rng);
            return {phi, pol(rng)};
        }

        Path los_path(const Direction &doa, double distance)
        {
            Path p;
            p.kind = PathKind::los;
            p.gain = PhysicalGain{distance, 0.0};
            p.toa = distance / kSpeedOfLight;
            p.doa = doa;
            return p;
        }

        std::vector<cvec> columns_of(const ChannelRealization &ch)
        {
            std::vector<cvec> out(ch.subcarriers());
            for (int s = 0; s < ch.subcarriers(); ++s)
                out[s] = Eigen::Map<const cvec>(ch.response[s].data(), ch.response[s].size());
            return out;
        }

        cmat restricted_sensing(const SensingOperator &op, const std::vector<Index> &support)
        {
            cmat m(op.rows(), Index(support.size()));
            for (size_t k = 0; k < support.size(); ++k)
                m.col(Index(k)) = op.column(support[k]);
            return m;
        }

        bool same_support(std::vector<Index> a, const std::vector<Index> &sorted_truth)
        {
            std::sort(a.begin(), a.end());
            return a == sorted_truth;
        }

        int pilot_beams(const ExperimentConfig &cfg)
        {
            const int nb = cfg.rows * cfg.cols;
            return int(std::floor(cfg.training_fraction * nb / cfg.rf_chains)) * cfg.rf_chains;
        }
    }

    GainSweep run_gain(const ExperimentConfig &cfg)
    {
        validate(cfg);
        const ArrayGeometry geom = bs_geometry(cfg);
        const OfdmGrid grid = ofdm_grid(cfg);
        const Direction dir{cfg.azimuth_deg * kPi / 180.0, cfg.polar_deg * kPi / 180.0};
        const TtdCombiner ttd(geom, dir, partition_of(cfg, geom));
        const cvec narrow = narrowband_combiner(geom, dir);

        GainSweep out;
        out.frequency = grid.frequencies();
        for (double f : out.frequency)
        {
            const cvec a = upa_response(geom, dir, f);
            out.gain["digital"].push_back(normalized_array_gain(digital_combiner(geom, dir, f), a));
            out.gain["proposed"].push_back(normalized_array_gain(ttd.evaluate(f), a));
            out.gain["narrowband"].push_back(normalized_array_gain(narrow, a));
        }
        return out;
    }

    DictionaryCdf run_cdf_dict(const ExperimentConfig &cfg)
    {
        validate(cfg);
        const ArrayGeometry geom = bs_geometry(cfg);
        const OfdmGrid grid = ofdm_grid(cfg);
        const int gx = cfg.grid_factor * cfg.rows + 1, gy = cfg.grid_factor * cfg.cols + 1;
        const int s = cfg.cdf_subcarrier < 0 ? cfg.subcarriers / 2 : cfg.cdf_subcarrier;
        const double rel = grid.frequency(s) / cfg.carrier;
        const double nb = geom.size();

        struct Sample
        {
            double gain = 0.0, ex = 0.0, ey = 0.0;
        };
        const auto samples = parallel_trials<Sample>(cfg.trials, cfg.seed, [&](Rng &rng) {
            const SpatialFrequency sf = angles_to_spatial(uniform_direction(rng));
            const double qx = std::clamp(std::round(sf.x * gx), -0.5 * (gx - 1), 0.5 * (gx - 1)) / gx;
            const double qy = std::clamp(std::round(sf.y * gy), -0.5 * (gy - 1), 0.5 * (gy - 1)) / gy;
            const cvec a = upa_response_spatial(cfg.rows, cfg.cols, sf, rel);
            const cvec b = upa_response_spatial(cfg.rows, cfg.cols, {qx, qy}, rel);
            return Sample{std::norm(b.dot(a)) / (nb * nb), std::abs(sf.x - qx), std::abs(sf.y - qy)};
        });

        DictionaryCdf out;
        for (const auto &smp : samples)
        {
            out.array_gain.push_back(smp.gain);
            out.error_x.push_back(smp.ex);
            out.error_y.push_back(smp.ey);
        }
        return out;
    }

    NmseSweep run_nmse(const ExperimentConfig &cfg)
    {
        validate(cfg);
        const bool multi = cfg.subcommand == "nmse-mu";
        const int nu = multi ? cfg.user_antennas : 1;
        const LinkSetup link = link_of(cfg, multi);
        const ArrayGeometry &geom = link.bs;
        const OfdmGrid &grid = link.grid;
        const int S = grid.subcarriers;
        const int nb = geom.size();

        auto uses = [&](const char *name) {
            return std::find(cfg.estimators.begin(), cfg.estimators.end(), name) != cfg.estimators.end();
        };
        const int gx = cfg.grid_factor * cfg.rows + 1, gy = cfg.grid_factor * cfg.cols + 1;
        const int gu = cfg.user_grid_factor * nu + 1;
        const WidebandDictionary dict = build_dictionary(geom, grid, gx, gy);
        const WidebandDictionary flat = uses("nbomp") ? build_dictionary(geom, grid, gx, gy, true) : WidebandDictionary{};
        std::vector<cmat> udict, uflat;
        if (multi)
        {
            udict = build_user_dictionary(*link.user, cfg.carrier, grid, gu);
            if (uses("nbomp"))
                uflat = build_user_dictionary(*link.user, cfg.carrier, grid, gu, true);
        }

        const int beams = pilot_beams(cfg);
        const double pp = dbm_to_watt(cfg.power_dbm) / S;
        const double pn = noise_power(cfg);
        SolverOptions opt;
        opt.threshold = cfg.epsilon_fraction * beams * nu * pn;
        opt.expected_paths = cfg.paths;
        opt.prune = cfg.prune;
        opt.noise_variance = pn;

        const auto &names = cfg.estimators;
        const Index ne = Index(names.size()), nk = Index(cfg.snr_db.size());
        struct TrialOut
        {
            Eigen::MatrixXd nmse, recovery, caps;
        };

        const auto trials = parallel_trials<TrialOut>(cfg.trials, cfg.seed, [&](Rng &rng) {
            const TrainingEnsemble ens = build_training(nb, cfg.rf_chains, beams / cfg.rf_chains, pp, rng);
            std::shared_ptr<const cmat> pilots;
            if (multi)
                pilots = std::make_shared<const cmat>(user_pilot_beams(nu, nu, rng));

            StatConfig sc;
            sc.paths = cfg.paths;
            sc.gain_variance = 1.0;
            sc.draw_aod = multi;
            const PathSet paths = cfg.on_grid ? draw_on_grid_paths(sc, dict, cfg.min_separation, rng, multi ? gu : 0)
                                              : sample_random_channel(sc, rng);
            const ChannelRealization ch = synth_channel(paths, link);
            const std::vector<cvec> shape = columns_of(ch);

            std::vector<cvec> clean(S), noise(S);
            for (int s = 0; s < S; ++s)
            {
                if (multi)
                {
                    clean[s] = measure(ens, ch.response[s], *pilots, 0.0, rng);
                    noise[s] = measure(ens, cmat::Zero(nb, nu), *pilots, pn, rng);
                }
                else
                {
                    clean[s] = measure(ens, shape[s], 0.0, rng);
                    noise[s] = effective_noise(ens, pn, rng);
                }
            }

            const auto ops = multi ? sensing_operators(ens, dict, pilots, udict) : sensing_operators(ens, dict);
            std::vector<SensingOperator> flat_ops;
            if (uses("nbomp"))
                flat_ops = multi ? sensing_operators(ens, flat, pilots, uflat) : sensing_operators(ens, flat);

            std::vector<Index> truth;
            for (const auto &p : paths)
            {
                const SpatialFrequency sf = angles_to_spatial(p.doa);
                Index g = dict.nearest({2.0 * dict.spacing_ratio * sf.x, 2.0 * dict.spacing_ratio * sf.y});
                if (multi)
                {
                    const double nu_u = 0.5 * std::sin(p.aod);
                    const long iu = std::clamp<long>(std::lround(nu_u * gu) + (gu - 1) / 2, 0, gu - 1);
                    g += Index(iu) * dict.size();
                }
                truth.push_back(g);
            }
            std::sort(truth.begin(), truth.end());
            truth.erase(std::unique(truth.begin(), truth.end()), truth.end());

            TrialOut out{Eigen::MatrixXd::Constant(ne, nk, kNaN), Eigen::MatrixXd::Constant(ne, nk, kNaN),
                         Eigen::MatrixXd::Zero(ne, nk)};
            for (Index k = 0; k < nk; ++k)
            {
                const double gain_var = db_to_linear(cfg.snr_db[k]) * pn / pp;
                const double amp = std::sqrt(gain_var);
                std::vector<cvec> h(S), y(S);
                for (int s = 0; s < S; ++s)
                {
                    h[s] = amp * shape[s];
                    y[s] = amp * clean[s] + noise[s];
                }

                for (Index e = 0; e < ne; ++e)
                {
                    const std::string &name = names[e];
                    if (name == "ls" || name == "crlb")
                    {
                        double sum = 0.0;
                        for (int s = 0; s < S; ++s)
                        {
                            double mse = 0.0;
                            if (name == "ls")
                                mse = ls_mse(nb * nu, pp, pn);
                            else
                                mse = crlb_mse(restricted_sensing(ops[s], truth), ops[s].atoms(truth), pn);
                            sum += mse / h[s].squaredNorm();
                        }
                        out.nmse(e, k) = sum / S;
                    }
                    else if (name == "omp" || name == "nbomp")
                    {
                        const auto &use = name == "omp" ? ops : flat_ops;
                        std::vector<cvec> est(S);
                        int hits = 0, caps = 0;
                        for (int s = 0; s < S; ++s)
                        {
                            const EstimateResult r = omp(use[s], y[s], opt);
                            est[s] = r.channel[0];
                            hits += same_support(r.support, truth);
                            caps += r.cap_hit;
                        }
                        out.nmse(e, k) = nmse(h, est);
                        out.recovery(e, k) = double(hits) / S;
                        out.caps(e, k) = double(caps) / S;
                    }
                    else
                    {
                        const EstimateResult r = name == "gsomp" ? gsomp(ops, y, opt)
                                                                 : gsomp_ss(ops, y, pilot_subset(S, cfg.stride), opt);
                        out.nmse(e, k) = nmse(h, r.channel);
                        out.recovery(e, k) = same_support(r.support, truth);
                        out.caps(e, k) = r.cap_hit;
                    }
                }
            }
            return out;
        });

        NmseSweep sweep;
        sweep.snr_db = cfg.snr_db;
        sweep.estimators = names;
        for (Index e = 0; e < ne; ++e)
        {
            auto &nm = sweep.nmse[names[e]];
            auto &rc = sweep.recovery[names[e]];
            auto &cp = sweep.cap_hits[names[e]];
            for (Index k = 0; k < nk; ++k)
            {
                double sn = 0.0, sr = 0.0, sc = 0.0;
                for (const auto &t : trials)
                {
                    sn += t.nmse(e, k);
                    sr += t.recovery(e, k);
                    sc += t.caps(e, k);
                }
                nm.push_back(sn / cfg.trials);
                rc.push_back(sr / cfg.trials);
                cp.push_back(int(std::lround(sc)));
            }
        }
        return sweep;
    }

    RateSummary run_rate_los(const ExperimentConfig &cfg)
    {
        validate(cfg);
        const LinkSetup link = link_of(cfg, false);
        const ArrayGeometry &geom = link.bs;
        const VirtualPartition part = partition_of(cfg, geom);
        const RateConfig rc = make_rate_config(link.grid, dbm_to_watt(cfg.power_dbm), cfg.noise_dbm_per_hz);
        const auto freqs = link.grid.frequencies();

        const auto trials = parallel_trials<std::array<double, 3>>(cfg.trials, cfg.seed, [&](Rng &rng) {
            const Path los = los_path(uniform_direction(rng), cfg.distance);
            const ChannelRealization ch = synth_channel({los}, link);
            const std::vector<cvec> h = columns_of(ch);
            const TtdCombiner ttd(geom, los.doa, part);
            const cvec narrow = narrowband_combiner(geom, los.doa);
            std::vector<cvec> wd, wp, wn;
            for (double f : freqs)
            {
                wd.push_back(digital_combiner(geom, los.doa, f));
                wp.push_back(ttd.evaluate(f));
                wn.push_back(narrow);
            }
            return std::array<double, 3>{rate_perfect_csi(h, wd, rc), rate_perfect_csi(h, wp, rc),
                                         rate_perfect_csi(h, wn, rc)};
        });

        std::array<double, 3> sum{};
        for (const auto &t : trials)
            for (int i = 0; i < 3; ++i)
                sum[i] += t[i];
        RateSummary out;
        out.rate["digital"] = sum[0] / cfg.trials;
        out.rate["proposed"] = sum[1] / cfg.trials;
        out.rate["narrowband"] = sum[2] / cfg.trials;
        return out;
    }

    RateSweep run_rate_icsi(const ExperimentConfig &cfg)
    {
        validate(cfg);
        const LinkSetup link = link_of(cfg, false);
        const ArrayGeometry &geom = link.bs;
        const int S = link.grid.subcarriers;
        const int nb = geom.size();
        const WidebandDictionary dict =
            build_dictionary(geom, link.grid, cfg.grid_factor * cfg.rows + 1, cfg.grid_factor * cfg.cols + 1);
        const int beams = pilot_beams(cfg);
        const double pn = noise_power(cfg);
        const Index np = Index(cfg.pt_dbm.size());
        const std::vector<std::string> series{"perfect", "imperfect", "estimated_mrc"};

        const auto trials = parallel_trials<Eigen::MatrixXd>(cfg.trials, cfg.seed, [&](Rng &rng) {
            TrainingEnsemble ens = build_training(nb, cfg.rf_chains, beams / cfg.rf_chains, 1.0, rng);
            StatConfig sc;
            sc.paths = cfg.paths;
            sc.include_los = cfg.los;
            sc.gain_model = GainModel::physical;
            sc.distance = cfg.distance;
            const PathSet paths = cfg.on_grid ? draw_on_grid_paths(sc, dict, cfg.min_separation, rng)
                                              : sample_random_channel(sc, rng);
            const std::vector<cvec> h = columns_of(synth_channel(paths, link));
            std::vector<cvec> noise(S);
            for (int s = 0; s < S; ++s)
                noise[s] = effective_noise(ens, pn, rng);

            Eigen::MatrixXd out(Index(series.size()), np);
            for (Index k = 0; k < np; ++k)
            {
                const RateConfig rc = make_rate_config(link.grid, dbm_to_watt(cfg.pt_dbm[k]), cfg.noise_dbm_per_hz);
                ens.pilot_power = rc.data_power();
                const auto ops = sensing_operators(ens, dict);
                std::vector<cvec> y(S);
                for (int s = 0; s < S; ++s)
                    y[s] = std::sqrt(ens.pilot_power) * (ens.combiner->adjoint() * h[s]) + noise[s];

                SolverOptions opt;
                opt.threshold = cfg.epsilon_fraction * beams * pn;
                opt.expected_paths = cfg.paths;
                opt.prune = cfg.prune;
                opt.noise_variance = pn;
                const EstimateResult est = gsomp(ops, y, opt);

                double imperfect = 0.0;
                std::vector<cvec> used(S);
                for (int s = 0; s < S; ++s)
                {
                    const cvec &hh = est.channel[s];
                    used[s] = hh;
                    if (hh.squaredNorm() == 0.0)
                        continue;
                    const cmat re = error_covariance(restricted_sensing(ops[s], est.support),
                                                     ops[s].atoms(est.support), pn);
                    imperfect += rate_imperfect_csi({hh}, std::vector<double>{error_power(hh, re)}, rc);
                }
                out(0, k) = rate_perfect_csi(h, h, rc);
                out(1, k) = imperfect;
                out(2, k) = rate_perfect_csi(h, used, rc);
            }
            return out;
        });

        RateSweep sweep;
        sweep.pt_dbm = cfg.pt_dbm;
        for (size_t i = 0; i < series.size(); ++i)
            for (Index k = 0; k < np; ++k)
            {
                double sum = 0.0;
                for (const auto &t : trials)
                    sum += t(Index(i), k);
                sweep.rate[series[i]].push_back(sum / cfg.trials);
            }
        return sweep;
    }

    RateSweep run_rate_svd(const ExperimentConfig &cfg)
    {
        validate(cfg);
        const LinkSetup link = link_of(cfg, true);
        const ArrayGeometry &geom = link.bs;
        const VirtualPartition part = partition_of(cfg, geom);
        const Index np = Index(cfg.pt_dbm.size());
        const std::vector<std::pair<std::string, SvdScheme>> schemes{
            {"digital", SvdScheme::digital}, {"proposed", SvdScheme::proposed}, {"narrowband", SvdScheme::narrowband}};

        const auto trials = parallel_trials<Eigen::MatrixXd>(cfg.trials, cfg.seed, [&](Rng &rng) {
            StatConfig sc;
            sc.paths = cfg.paths;
            sc.include_los = cfg.los;
            sc.gain_model = GainModel::physical;
            sc.distance = cfg.distance;
            sc.draw_aod = true;
            const PathSet paths = sample_random_channel(sc, rng);
            const ChannelRealization ch = synth_channel(paths, link);
            std::vector<Direction> dirs;
            for (const auto &p : paths)
                dirs.push_back(p.doa);

            Eigen::MatrixXd out(Index(schemes.size()), np);
            for (size_t i = 0; i < schemes.size(); ++i)
            {
                const SvdTransmission tx =
                    hybrid_svd_design(ch, geom, dirs, cfg.paths, schemes[i].second, part);
                for (Index k = 0; k < np; ++k)
                {
                    const RateConfig rc =
                        make_rate_config(link.grid, dbm_to_watt(cfg.pt_dbm[k]), cfg.noise_dbm_per_hz);
                    out(Index(i), k) = rate_svd(tx, svd_power_allocation(tx, rc), rc);
                }
            }
            return out;
        });

        RateSweep sweep;
        sweep.pt_dbm = cfg.pt_dbm;
        for (size_t i = 0; i < schemes.size(); ++i)
            for (Index k = 0; k < np; ++k)
            {
                double sum = 0.0;
                for (const auto &t : trials)
                    sum += t(Index(i), k);
                sweep.rate[schemes[i].first].push_back(sum / cfg.trials);
            }
        return sweep;
    }

    NearFieldSweep run_nearfield(const ExperimentConfig &cfg)
    {
        validate(cfg);
        const LinkSetup link = link_of(cfg, false);
        const ArrayGeometry &geom = link.bs;
        const VirtualPartition part = partition_of(cfg, geom);
        const RateConfig rc = make_rate_config(link.grid, dbm_to_watt(cfg.power_dbm), cfg.noise_dbm_per_hz);
        const auto freqs = link.grid.frequencies();
        const Index nf = Index(cfg.distance_factors.size());

        NearFieldSweep out;
        out.fraunhofer = fraunhofer_distance(geom);
        out.factors = cfg.distance_factors;

        const auto trials = parallel_trials<Eigen::MatrixXd>(cfg.trials, cfg.seed, [&](Rng &rng) {
            const Direction doa = uniform_direction(rng);
            const TtdCombiner ttd(geom, doa, part);
            std::vector<cvec> w;
            for (double f : freqs)
                w.push_back(ttd.evaluate(f));
            Eigen::MatrixXd r(2, nf);
            for (Index i = 0; i < nf; ++i)
            {
                const Path los = los_path(doa, cfg.distance_factors[i] * out.fraunhofer);
                r(0, i) = rate_perfect_csi(columns_of(synth_channel({los}, link)), w, rc);
                r(1, i) = rate_perfect_csi(columns_of(synth_spherical_los(los, link)), w, rc);
            }
            return r;
        });

        for (Index i = 0; i < nf; ++i)
        {
            double sp = 0.0, ss = 0.0;
            for (const auto &t : trials)
            {
                sp += t(0, i);
                ss += t(1, i);
            }
            out.plane.push_back(sp / cfg.trials);
            out.spherical.push_back(ss / cfg.trials);
        }
        return out;
    }

    CsvTable run_experiment(const ExperimentConfig &cfg)
    {
        const std::string &sub = cfg.subcommand;
        auto with_metadata = [&](CsvTable t) {
            t.add_metadata("thzsim " + sub);
            for (const auto &[k, v] : describe(cfg))
                t.add_metadata(k + " = " + v);
            return t;
        };
        auto cdf_rows = [](CsvTable &t, const std::string &kind, const std::vector<double> &v) {
            for (const auto &[value, prob] : empirical_cdf(v))
                t.add(CsvTable::Row() << kind << value << prob);
        };

        if (sub == "gain")
        {
            const GainSweep g = run_gain(cfg);
            CsvTable t = with_metadata(CsvTable({"scheme", "subcarrier", "frequency_hz", "gain"}));
            for (const char *scheme : {"digital", "proposed", "narrowband"})
                for (size_t s = 0; s < g.frequency.size(); ++s)
                    t.add(CsvTable::Row() << scheme << int(s) << g.frequency[s] << g.gain.at(scheme)[s]);
            return t;
        }
        if (sub == "cdf-dict")
        {
            const DictionaryCdf d = run_cdf_dict(cfg);
            CsvTable t = with_metadata(CsvTable({"quantity", "value", "probability"}));
            cdf_rows(t, "array_gain", d.array_gain);
            cdf_rows(t, "error_x", d.error_x);
            cdf_rows(t, "error_y", d.error_y);
            return t;
        }
        if (sub == "nmse" || sub == "nmse-mu")
        {
            const NmseSweep n = run_nmse(cfg);
            CsvTable t = with_metadata(
                CsvTable({"snr_db", "estimator", "nmse_db", "nmse", "support_recovery", "cap_hits"}));
            for (size_t k = 0; k < n.snr_db.size(); ++k)
                for (const auto &e : n.estimators)
                    t.add(CsvTable::Row() << n.snr_db[k] << e << linear_to_db(n.nmse.at(e)[k]) << n.nmse.at(e)[k]
                                          << n.recovery.at(e)[k] << n.cap_hits.at(e)[k]);
            return t;
        }
        if (sub == "rate-los")
        {
            const RateSummary r = run_rate_los(cfg);
            CsvTable t = with_metadata(CsvTable({"scheme", "rate_bps", "rate_gbps"}));
            for (const char *scheme : {"digital", "proposed", "narrowband"})
                t.add(CsvTable::Row() << scheme << r.rate.at(scheme) << r.rate.at(scheme) / 1e9);
            return t;
        }
        if (sub == "rate-icsi" || sub == "rate-svd")
        {
            const RateSweep r = sub == "rate-icsi" ? run_rate_icsi(cfg) : run_rate_svd(cfg);
            CsvTable t = with_metadata(CsvTable({"pt_dbm", "scheme", "rate_bps", "rate_gbps"}));
            for (size_t k = 0; k < r.pt_dbm.size(); ++k)
                for (const auto &[scheme, v] : r.rate)
                    t.add(CsvTable::Row() << r.pt_dbm[k] << scheme << v[k] << v[k] / 1e9);
            return t;
        }
        if (sub == "nearfield")
        {
            const NearFieldSweep n = run_nearfield(cfg);
            CsvTable t = with_metadata(CsvTable({"distance_m", "distance_over_df", "model", "rate_bps", "rate_gbps"}));
            for (size_t i = 0; i < n.factors.size(); ++i)
            {
                const double d = n.factors[i] * n.fraunhofer;
                t.add(CsvTable::Row() << d << n.factors[i] << "plane" << n.plane[i] << n.plane[i] / 1e9);
                t.add(CsvTable::Row() << d << n.factors[i] << "spherical" << n.spherical[i] << n.spherical[i] / 1e9);
            }
            return t;
        }
        throw ConfigError("subcommand", "unknown subcommand '" + sub + "'");
    }
}
