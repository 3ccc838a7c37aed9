// Copyright 2026 The qsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Independent reference computations used to check library results.

#ifndef QSEP_TESTS_ORACLES_HPP
#define QSEP_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include <Eigen/QR>

#include "qsep/linalg.hpp"
#include "qsep/random.hpp"

namespace qsep::oracle {

/// Orthonormal columns spanning the columns of m (Householder QR).
inline CMatrix orthonormalize(const CMatrix &m) {
    Eigen::HouseholderQR<CMatrix> qr(m);
    return qr.householderQ() * CMatrix::Identity(m.rows(), m.cols());
}

/// Minimum distance from the unit vector with coefficient matrix `target` to
/// any unit vector of Schmidt rank <= r, found by alternating maximization of
/// the overlap over left/right r-dimensional subspaces from random starts.
/// The distance is evaluated directly as ‖ψ - φ‖ for the best φ found.
inline double rank_r_distance(const CMatrix &target, std::size_t r, Rng &rng, int restarts = 8, int sweeps = 400) {
    const auto rank = static_cast<Eigen::Index>(r);
    if (rank >= std::min(target.rows(), target.cols())) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < restarts; ++s) {
        CMatrix B = orthonormalize(random_unitary(target.cols(), rng).leftCols(rank));
        CMatrix A;
        for (int k = 0; k < sweeps; ++k) {
            A = orthonormalize(target * B);
            B = orthonormalize(target.adjoint() * A);
        }
        const CMatrix core = A.adjoint() * target * B;
        CMatrix phi = A * core * B.adjoint();
        phi /= phi.norm();
        // Optimal global phase.
        const Complex ov = (phi.adjoint() * target).trace();
        if (std::abs(ov) > 0) phi *= ov / std::abs(ov);
        best = std::min(best, (target - phi).norm());
    }
    return best;
}

/// Largest value of α a0 + a0 b0 + a0 b1 + a1 b0 - a1 b1 over a, b ∈ {±1}.
inline double classical_tilted_max(double alpha) {
    double best = -std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 16; ++mask) {
        const double a0 = mask & 1 ? -1 : 1, a1 = mask & 2 ? -1 : 1;
        const double b0 = mask & 4 ? -1 : 1, b1 = mask & 8 ? -1 : 1;
        best = std::max(best, alpha * a0 + a0 * b0 + a0 * b1 + a1 * b0 - a1 * b1);
    }
    return best;
}

/// p(a, b | x, y) of the ideal tilted-CHSH strategy on cos θ|00> + sin θ|11>,
/// from its closed-form one- and two-body expectations. Index [x][y][2a + b].
inline std::array<std::array<std::array<double, 4>, 2>, 2> tilted_tables(double theta) {
    const double c2 = std::cos(2 * theta), s2 = std::sin(2 * theta);
    const double mu = std::atan(s2);
    const double ea[2] = {c2, 0.0};
    const double eb[2] = {std::cos(mu) * c2, std::cos(mu) * c2};
    const double eab[2][2] = {{std::cos(mu), std::cos(mu)}, {std::sin(mu) * s2, -std::sin(mu) * s2}};
    std::array<std::array<std::array<double, 4>, 2>, 2> t{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double sa = a ? -1 : 1, sb = b ? -1 : 1;
                    t[x][y][2 * a + b] = (1 + sa * ea[x] + sb * eb[y] + sa * sb * eab[x][y]) / 4;
                }
    return t;
}

}  // namespace qsep::oracle

#endif
