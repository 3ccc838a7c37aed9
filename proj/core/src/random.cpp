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

#include "qsep/random.hpp"

#include <bit>
#include <cmath>

namespace qsep {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t k : key) h = mix64(h ^ mix64(k));
    return h;
}

std::uint64_t double_bits(double x) {
    return std::bit_cast<std::uint64_t>(x);
}

namespace {

Complex gaussian(Rng &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

}  // namespace

CVector random_unit_vector(Eigen::Index dim, Rng &rng) {
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = gaussian(rng);
    return v / v.norm();
}

CMatrix random_hermitian(Eigen::Index dim, Rng &rng) {
    CMatrix g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = gaussian(rng);
    CMatrix h = (g + g.adjoint()) / 2.0;
    return h / operator_norm(h);
}

CMatrix random_unitary(Eigen::Index dim, Rng &rng) {
    CMatrix g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = gaussian(rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        Complex d = r(i, i);
        double a = std::abs(d);
        if (a > 0) q.col(i) *= d / a;
    }
    return q;
}

CMatrix unitary_exp(const CMatrix &hermitian, double t) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian);
    const CMatrix &v = es.eigenvectors();
    CVector phases(v.cols());
    for (Eigen::Index i = 0; i < v.cols(); ++i) phases(i) = std::polar(1.0, t * es.eigenvalues()(i));
    return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace qsep
