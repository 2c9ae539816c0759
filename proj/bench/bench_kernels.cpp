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

#include <benchmark/benchmark.h>

#include <numeric>

#include "thz/estimation.hpp"
#include "thz/kernels.hpp"

using namespace thz;

namespace
{
    cmat random_matrix(Index rows, Index cols, Rng &rng)
    {
        cmat m(rows, cols);
        for (auto &v : m.reshaped())
            v = complex_normal(rng);
        return m;
    }

    cvec random_vector(Index n, Rng &rng) { return random_matrix(n, 1, rng).col(0); }

    // (N_beam x N_B) combiner against G_x x G_y dictionary axes for an N x N array
    struct Problem
    {
        cmat w, ax, ay;
        cvec r;
        explicit Problem(int side)
        {
            Rng rng(5);
            const int grid = 2 * side + 1;
            const int nb = side * side;
            w = random_matrix(nb, (nb * 4 / 5) & ~1, rng);
            ax = random_matrix(side, grid, rng);
            ay = random_matrix(side, grid, rng);
            r = random_vector(nb, rng);
        }
    };

    void BM_KronAdjoint(benchmark::State &state)
    {
        const Problem p(int(state.range(0)));
        for (auto _ : state)
            benchmark::DoNotOptimize(kernels::kron_adjoint(p.ax, p.ay, p.r));
    }

    void BM_KronAdjointReference(benchmark::State &state)
    {
        const Problem p(int(state.range(0)));
        for (auto _ : state)
            benchmark::DoNotOptimize(kernels::kron_adjoint_reference(p.ax, p.ay, p.r));
    }

    void BM_StructuredProduct(benchmark::State &state)
    {
        const Problem p(int(state.range(0)));
        for (auto _ : state)
            benchmark::DoNotOptimize(kernels::structured_product(p.w, p.ax, p.ay, 1.0));
    }

    void BM_StructuredProductReference(benchmark::State &state)
    {
        const Problem p(int(state.range(0)));
        for (auto _ : state)
            benchmark::DoNotOptimize(kernels::structured_product_reference(p.w, p.ax, p.ay, 1.0));
    }

    void BM_SummedMagnitude(benchmark::State &state)
    {
        Rng rng(6);
        const cmat corr = random_matrix(state.range(0), 32, rng);
        const std::vector<Index> excluded{1, 7, 42};
        for (auto _ : state)
            benchmark::DoNotOptimize(kernels::summed_magnitude(corr, excluded));
    }

    void BM_Gsomp(benchmark::State &state)
    {
        const int side = int(state.range(0));
        Rng rng(7);
        const auto geom = ArrayGeometry::half_wavelength(side, side, 300e9);
        const OfdmGrid grid{32, 40e9};
        LinkSetup link;
        link.bs = geom;
        link.grid = grid;
        const auto dict = build_dictionary(geom, grid, 2 * side + 1, 2 * side + 1);
        const TrainingEnsemble ens = build_training(side * side, 2, side * side * 2 / 5, 1.0, rng);
        const auto ops = sensing_operators(ens, dict);
        StatConfig sc;
        sc.gain_variance = 1.0;
        const auto ch = synth_channel(draw_on_grid_paths(sc, dict, 2, rng), link);
        std::vector<cvec> y;
        for (int s = 0; s < grid.subcarriers; ++s)
            y.push_back(measure(ens, ch.vector(s), 1e-3, rng));
        SolverOptions opt;
        opt.threshold = ens.beams() * 1e-3;
        opt.expected_paths = sc.paths;
        for (auto _ : state)
            benchmark::DoNotOptimize(gsomp(ops, y, opt));
    }
}

BENCHMARK(BM_KronAdjoint)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_KronAdjointReference)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_StructuredProduct)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StructuredProductReference)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SummedMagnitude)->Arg(1089)->Arg(4225)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Gsomp)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
