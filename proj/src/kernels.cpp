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

#include "thz/kernels.hpp"

#include <stdexcept>

namespace thz::kernels
{
    cvec kron_adjoint(const cmat &ax, const cmat &ay, const cvec &x)
    {
        const Index n = ax.rows(), m = ay.rows();
        if (x.size() != n * m)
            throw std::invalid_argument("kron_adjoint: length mismatch");
        const Eigen::Map<const cmat> xm(x.data(), m, n);
        const cmat z = ay.adjoint() * (xm * ax.conjugate());
        return Eigen::Map<const cvec>(z.data(), z.size());
    }

    cvec kron_adjoint_reference(const cmat &ax, const cmat &ay, const cvec &x)
    {
        return kron(ax, ay).adjoint() * x;
    }

    cvec kron_column(const cmat &ax, const cmat &ay, Index g)
    {
        const Index gy = ay.cols();
        const Index q = g / gy, p = g % gy;
        const Index m = ay.rows();
        cvec out(ax.rows() * m);
        for (Index n = 0; n < ax.rows(); ++n)
            out.segment(n * m, m) = ax(n, q) * ay.col(p);
        return out;
    }

    cmat kron(const cmat &a, const cmat &b)
    {
        cmat out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    }

    cmat structured_product(const cmat &w, const cmat &ax, const cmat &ay, double scale)
    {
        if (w.rows() != ax.rows() * ay.rows())
            throw std::invalid_argument("structured_product: combiner rows do not match the dictionary");
        const Index beams = w.cols();
        cmat out(beams, ax.cols() * ay.cols());
#pragma omp parallel for schedule(static)
        for (Index k = 0; k < beams; ++k)
            out.row(k) = scale * kron_adjoint(ax, ay, w.col(k)).adjoint();
        return out;
    }

    cmat structured_product_reference(const cmat &w, const cmat &ax, const cmat &ay, double scale)
    {
        return scale * (w.adjoint() * kron(ax, ay));
    }

    rvec summed_magnitude(const cmat &correlations, const std::vector<Index> &excluded)
    {
        rvec sum = rvec::Zero(correlations.rows());
        for (Index s = 0; s < correlations.cols(); ++s)
            sum += correlations.col(s).cwiseAbs();
        for (Index g : excluded)
            sum[g] = -1.0;
        return sum;
    }

    Index argmax_first(const rvec &v)
    {
        if (v.size() == 0)
            throw std::invalid_argument("argmax_first: empty vector");
        Index best = 0;
        for (Index i = 1; i < v.size(); ++i)
            if (v[i] > v[best])
                best = i;
        return best;
    }
}
