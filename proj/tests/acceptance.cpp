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

// Acceptance report: one PASS/FAIL line per criterion.
// Usage: acceptance [--only=1,4,...] [--known-fail=8,...]
// Exit status is non-zero when a criterion fails that is not listed in --known-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "thz/combining.hpp"
#include "thz/config.hpp"
#include "thz/estimation.hpp"
#include "thz/experiments.hpp"
#include "thz/metrics.hpp"

using namespace thz;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    std::string fmt(const char *pattern, auto... args)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, pattern, args...);
        return buf;
    }

    double dirichlet_sq(int order, double x)
    {
        const double s = std::sin(0.5 * x);
        const double v = std::abs(s) < 1e-300 ? 1.0 : std::sin(0.5 * order * x) / (order * s);
        return v * v;
    }

    double to_db(double v) { return 10.0 * std::log10(v); }

    Outcome gain_identities()
    {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<int> side(1, 64);
        std::uniform_real_distribution<double> az(-kPi, kPi), pol(0.0, kPi / 2), freq(-20e9, 20e9);
        auto divisor = [&](int n) {
            std::vector<int> d;
            for (int k = 1; k <= n; ++k)
                if (n % k == 0)
                    d.push_back(k);
            return d[std::uniform_int_distribution<size_t>(0, d.size() - 1)(rng)];
        };
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i)
        {
            const auto g = ArrayGeometry::half_wavelength(side(rng), side(rng), 300e9);
            const Direction dir{az(rng), pol(rng)};
            const double f = freq(rng);
            const VirtualPartition part{divisor(g.rows), divisor(g.cols)};
            const cvec a = upa_response(g, dir, f);
            const double dx = delay_step_x(g, dir), dy = delay_step_y(g, dir);

            const double nb = normalized_array_gain(narrowband_combiner(g, dir), a);
            const double nb_ref = dirichlet_sq(g.rows, 2 * kPi * f * dx) * dirichlet_sq(g.cols, 2 * kPi * f * dy);
            const double ttd = normalized_array_gain(TtdCombiner(g, dir, part).evaluate(f), a);
            const double ttd_ref = dirichlet_sq(part.sub_rows(g), 2 * kPi * f * dx) *
                                   dirichlet_sq(part.sub_cols(g), 2 * kPi * f * dy);
            worst = std::max({worst, std::abs(nb - nb_ref), std::abs(nb - narrowband_gain_closed_form(g, dir, f)),
                              std::abs(ttd - ttd_ref), std::abs(ttd - ttd_gain_closed_form(g, dir, part, f)),
                              std::abs(normalized_array_gain(digital_combiner(g, dir, f), a) - 1.0)});
        }
        return {worst < 1e-9, fmt("1000 tuples, max |direct - closed form| = %.3g", worst)};
    }

    Outcome ls_closed_form()
    {
        Rng rng(7);
        const int nb = 64;
        const double pp = 1.0, noise = 0.01;
        const TrainingEnsemble full = dft_training(nb, pp);
        cvec h(nb);
        for (auto &v : h)
            v = complex_normal(rng);
        double mse = 0.0;
        for (int t = 0; t < 1000; ++t)
            mse += (ls_estimate(measure(full, h, noise, rng), full) - h).squaredNorm();
        mse /= 1000.0;
        const double expected = ls_mse(nb, pp, noise);
        const double rel = std::abs(mse / expected - 1.0);
        return {rel < 0.03, fmt("empirical %.5g vs sigma^2 N_B / P_p = %.5g (%.2f%%)", mse, expected, 100 * rel)};
    }

    Outcome whitening()
    {
        Rng rng(8);
        const TrainingEnsemble ens = build_training(64, 4, 4, 1.0, rng);
        const double var = 0.5;
        const Index m = ens.beams();
        cmat cov = cmat::Zero(m, m);
        for (int i = 0; i < 10000; ++i)
        {
            const cvec n = effective_noise(ens, var, rng);
            cov += n * n.adjoint();
        }
        cov /= 1e4;
        double diag = 0.0, off = 0.0;
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j)
                if (i == j)
                    diag = std::max(diag, std::abs(cov(i, i).real() / var - 1.0));
                else
                    off = std::max(off, std::abs(cov(i, j)));
        return {diag < 0.05 && off < 4 * var / 100,
                fmt("max diagonal deviation %.2f%%, max off-diagonal %.3g sigma^2", 100 * diag, off / var)};
    }

    Outcome noiseless_recovery()
    {
        const auto geom = ArrayGeometry::half_wavelength(16, 16, 300e9);
        const OfdmGrid grid{8, 40e9};
        LinkSetup link;
        link.bs = geom;
        link.grid = grid;
        const auto dict = build_dictionary(geom, grid, 33, 33);
        int omp_ok = 0, gsomp_ok = 0, omp_cells = 0;
        double worst = 0.0;
        for (int t = 0; t < 100; ++t)
        {
            Rng rng(1000 + t);
            const TrainingEnsemble ens = build_training(256, 2, 102, 1.0, rng); // 204 beams
            const auto ops = sensing_operators(ens, dict);
            StatConfig sc;
            sc.paths = 1 + t % 4;
            sc.gain_variance = 1.0;
            const PathSet paths = draw_on_grid_paths(sc, dict, 3, rng);
            std::vector<Index> truth;
            for (const auto &p : paths)
                truth.push_back(dict.nearest(angles_to_spatial(p.doa)));
            std::sort(truth.begin(), truth.end());

            const auto ch = synth_channel(paths, link);
            std::vector<cvec> h, y;
            for (int s = 0; s < grid.subcarriers; ++s)
            {
                h.push_back(ch.vector(s));
                y.push_back(measure(ens, h.back(), 0.0, rng));
            }
            SolverOptions opt;
            opt.threshold = 1e-24;
            opt.expected_paths = sc.paths;

            const auto g = gsomp(ops, y, opt);
            auto supp = g.support;
            std::sort(supp.begin(), supp.end());
            const double g_err = nmse(h, g.channel);
            if (supp == truth && g_err < 1e-12)
                ++gsomp_ok;
            worst = std::max(worst, g_err);

            bool all = true;
            std::vector<cvec> est;
            for (int s = 0; s < grid.subcarriers; ++s)
            {
                const auto o = omp(ops[s], y[s], opt);
                auto os = o.support;
                std::sort(os.begin(), os.end());
                all = all && os == truth;
                omp_cells += os == truth;
                est.push_back(o.channel[0]);
            }
            const double o_err = nmse(h, est);
            worst = std::max(worst, o_err);
            if (all && o_err < 1e-12)
                ++omp_ok;
        }
        return {omp_ok == 100 && gsomp_ok == 100,
                fmt("exact on every subcarrier: OMP %d/100, GSOMP %d/100; OMP exact on %d/%d subcarrier problems; "
                    "worst NMSE %.3g",
                    omp_ok, gsomp_ok, omp_cells, 100 * grid.subcarriers, worst)};
    }

    ExperimentConfig desk(const std::string &sub)
    {
        ExperimentConfig c = defaults_for(sub);
        apply_desk(c);
        return c;
    }

    // threshold as a fraction of N_beam sigma^2; 1 is the default
    NmseSweep desk_nmse_sweep(double epsilon_fraction)
    {
        static std::map<double, NmseSweep> cache;
        if (auto it = cache.find(epsilon_fraction); it != cache.end())
            return it->second;
        const NmseSweep sweep = [&] {
            ExperimentConfig c = desk("nmse");
            c.epsilon_fraction = epsilon_fraction;
            c.paths = 3;
            c.trials = 100;
            c.snr_db = {-10, -5, 0, 5, 10};
            c.estimators = {"omp", "gsomp", "gsomp-ss", "crlb"};
            validate(c);
            return run_nmse(c);
        }();
        return cache[epsilon_fraction] = sweep;
    }

    constexpr double kLowThreshold = 0.2;

    bool attains(const NmseSweep &s, std::string &detail)
    {
        bool ok = true;
        for (size_t i = 0; i < s.snr_db.size(); ++i)
        {
            const double g = to_db(s.nmse.at("gsomp")[i]), c = to_db(s.nmse.at("crlb")[i]),
                         o = to_db(s.nmse.at("omp")[i]);
            if (s.snr_db[i] == -10)
                ok = ok && s.nmse.at("gsomp")[i] < s.nmse.at("omp")[i];
            else
                ok = ok && std::abs(g - c) <= 1.0;
            detail += fmt("%s%g dB: gsomp %.2f crlb %.2f omp %.2f", i ? "; " : "", s.snr_db[i], g, c, o);
        }
        return ok;
    }

    Outcome crlb_attainment()
    {
        std::string detail, alt;
        const bool ok = attains(desk_nmse_sweep(1.0), detail);
        const bool alt_ok = attains(desk_nmse_sweep(kLowThreshold), alt);
        return {ok, detail + fmt(" | informational, epsilon = %g N_beam sigma^2: %s [%s]", kLowThreshold, alt.c_str(),
                                 alt_ok ? "would pass" : "would fail")};
    }

    Outcome narrowband_vs_ttd()
    {
        ExperimentConfig c = defaults_for("gain");
        c.azimuth_deg = 60.0;
        c.polar_deg = 45.0;
        c.nsb = c.msb = 10;
        validate(c);
        const GainSweep s = run_gain(c);
        const auto &nb = s.gain.at("narrowband");
        const auto &ttd = s.gain.at("proposed");
        const double edge = std::max(nb.front(), nb.back());
        const double worst_ttd = *std::min_element(ttd.begin(), ttd.end());
        return {edge < 0.05 && worst_ttd > 0.8,
                fmt("narrowband at band edges %.4f, %.4f; min TTD gain %.4f over %zu subcarriers", nb.front(),
                    nb.back(), worst_ttd, ttd.size())};
    }

    Outcome los_rates()
    {
        ExperimentConfig c = defaults_for("rate-los");
        c.trials = 100;
        validate(c);
        const RateSummary r = run_rate_los(c);
        const double d = r.rate.at("digital") / 1e9, p = r.rate.at("proposed") / 1e9, n = r.rate.at("narrowband") / 1e9;
        auto near = [](double v, double ref) { return std::abs(v / ref - 1.0) <= 0.10; };
        const bool ok = near(d, 517) && near(p, 514) && near(n, 303) && d >= p && p > n && p / d >= 0.98;
        return {ok, fmt("digital %.1f, proposed %.1f, narrowband %.1f Gbps (targets 517/514/303 +-10%%), "
                        "proposed/digital %.4f",
                        d, p, n, p / d)};
    }

    Outcome imperfect_csi()
    {
        auto ratio = [](double epsilon_fraction, std::string &detail) {
            ExperimentConfig c = defaults_for("rate-icsi");
            apply_desk(c);
            c.rows = c.cols = 32;
            c.paths = 2;
            c.trials = 20;
            c.epsilon_fraction = epsilon_fraction;
            validate(c);
            const RateSweep r = run_rate_icsi(c);
            const size_t top = std::max_element(r.pt_dbm.begin(), r.pt_dbm.end()) - r.pt_dbm.begin();
            const double perfect = r.rate.at("perfect")[top], imperfect = r.rate.at("imperfect")[top];
            detail = fmt("P_t %g dBm: imperfect %.1f of perfect %.1f Gbps (%.1f%%); estimated-MRC %.1f%%",
                         r.pt_dbm[top], imperfect / 1e9, perfect / 1e9, 100 * imperfect / perfect,
                         100 * r.rate.at("estimated_mrc")[top] / perfect);
            return imperfect / perfect;
        };
        std::string detail, alt;
        const double main_ratio = ratio(1.0, detail);
        const double alt_ratio = ratio(kLowThreshold, alt);
        return {main_ratio >= 0.9, detail + fmt(" | informational, epsilon = %g N_beam sigma^2: %s [%s]",
                                                kLowThreshold, alt.c_str(), alt_ratio >= 0.9 ? "would pass" : "would fail")};
    }

    bool selection_matches(const NmseSweep &s, std::string &detail)
    {
        bool ok = true;
        for (size_t i = 0; i < s.snr_db.size(); ++i)
        {
            if (s.snr_db[i] < 0)
                continue;
            const double gap = to_db(s.nmse.at("gsomp-ss")[i]) - to_db(s.nmse.at("gsomp")[i]);
            ok = ok && std::abs(gap) <= 0.5;
            detail += fmt("%s%g dB: gap %.3f dB", detail.empty() ? "" : "; ", s.snr_db[i], gap);
        }
        return ok;
    }

    Outcome subcarrier_selection()
    {
        std::string detail, alt;
        const bool ok = selection_matches(desk_nmse_sweep(1.0), detail);
        const bool alt_ok = selection_matches(desk_nmse_sweep(kLowThreshold), alt);
        const auto detection = pilot_subset(desk("nmse").subcarriers, desk("nmse").stride);
        return {ok, fmt("%zu detection subcarrier(s); ", detection.size()) + detail +
                        fmt(" | informational, epsilon = %g N_beam sigma^2: %s [%s]", kLowThreshold, alt.c_str(),
                            alt_ok ? "would pass" : "would fail")};
    }

    Outcome near_field()
    {
        ExperimentConfig c = defaults_for("nearfield");
        c.rows = c.cols = 32;
        c.distance_factors = {0.5, 2.0};
        validate(c);
        const NearFieldSweep s = run_nearfield(c);
        const double near = s.spherical[0] / s.plane[0] - 1.0, far = s.spherical[1] / s.plane[1] - 1.0;
        return {std::abs(far) <= 0.02, fmt("D_f = %.3g m; 2 D_f gap %.3f%%; 0.5 D_f gap %.3f%% (informational)",
                                           s.fraunhofer, 100 * far, 100 * near)};
    }

    Outcome determinism()
    {
        std::string detail;
        bool ok = true;
        for (const auto &sub : subcommands())
        {
            ExperimentConfig c = desk(sub);
            c.trials = 2;
            c.seed = 99;
            if (sub == "nmse" || sub == "nmse-mu")
                c.snr_db = {0.0};
            validate(c);
            std::ostringstream a, b;
            run_experiment(c).write(a);
            run_experiment(c).write(b);
            const bool same = a.str() == b.str();
            ok = ok && same;
            if (!same)
                detail += sub + " differs; ";
        }
        return {ok, detail.empty() ? fmt("%zu subcommands byte-identical on repeat", subcommands().size()) : detail};
    }

    std::set<int> parse_ids(const std::string &text)
    {
        std::set<int> ids;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ','))
            if (!item.empty())
                ids.insert(std::stoi(item));
        return ids;
    }
}

int main(int argc, char **argv)
{
    std::set<int> only, known;
    for (int i = 1; i < argc; ++i)
    {
        const std::string arg = argv[i];
        if (arg.rfind("--only=", 0) == 0)
            only = parse_ids(arg.substr(7));
        else if (arg.rfind("--known-fail=", 0) == 0)
            known = parse_ids(arg.substr(13));
        else
        {
            std::fprintf(stderr, "usage: acceptance [--only=1,2] [--known-fail=8]\n");
            return 2;
        }
    }

    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"array gain closed forms", gain_identities},
        {"LS closed-form MSE", ls_closed_form},
        {"noise whitening", whitening},
        {"noiseless exact recovery", noiseless_recovery},
        {"GSOMP attains the CRLB", crlb_attainment},
        {"narrowband collapse vs TTD", narrowband_vs_ttd},
        {"LoS rates", los_rates},
        {"imperfect-CSI rate", imperfect_csi},
        {"GSOMP subcarrier selection", subcarrier_selection},
        {"near-field match", near_field},
        {"determinism", determinism},
    };

    int unexpected = 0;
    for (size_t k = 0; k < criteria.size(); ++k)
    {
        const int id = int(k) + 1;
        if (!only.empty() && !only.count(id))
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try
        {
            out = criteria[k].second();
        }
        catch (const std::exception &e)
        {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool tolerated = !out.pass && known.count(id);
        if (!out.pass && !tolerated)
            ++unexpected;
        std::printf("[%s] %2d %s: %s (%.1f s)%s\n", out.pass ? "PASS" : "FAIL", id, criteria[k].first,
                    out.detail.c_str(), secs, tolerated ? " [known failure]" : "");
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
