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

#ifndef THZ_KERNELS_HPP
#define THZ_KERNELS_HPP

#include <vector>

#include "thz/types.hpp"

// Hot loops of the estimators. Each kernel has a plain serial reference that the
// tests compare against and an optimized version (Kronecker structure and/or OpenMP).
namespace thz::kernels
{
    // (Ax (x) Ay)^H x for x of length rows(Ax) * rows(Ay), y-index fastest
    cvec kron_adjoint(const cmat &ax, const cmat &ay, const cvec &x);
    cvec kron_adjoint_reference(const cmat &ax, const cmat &ay, const cvec &x);

    // Column g = q * cols(Ay) + p of Ax (x) Ay
    cvec kron_column(const cmat &ax, const cmat &ay, Index g);

    // Dense Ax (x) Ay
    cmat kron(const cmat &a, const cmat &b);

    // scale * W^H (Ax (x) Ay), rows of W^H in parallel using the Kronecker structure
    cmat structured_product(const cmat &w, const cmat &ax, const cmat &ay, double scale);
    cmat structured_product_reference(const cmat &w, const cmat &ax, const cmat &ay, double scale);

    // sum_s |c_s| over columns of a G x |S| correlation table, with excluded
    // entries forced to -1. The sum runs in subcarrier order.
    rvec summed_magnitude(const cmat &correlations, const std::vector<Index> &excluded);

    // Index of the largest entry; the lowest index wins ties
    Index argmax_first(const rvec &v);
}

#endif
