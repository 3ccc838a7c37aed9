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

#include "qsep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qsep {

void ResourceLimits::check(std::size_t dim, const char *what) const {
    if (dim > max_dim) {
        throw ResourceError(std::string(what) + ": dimension " + std::to_string(dim) +
                            " exceeds the configured cap of " + std::to_string(max_dim));
    }
}

bool all_finite(const CMatrix &m) {
    return m.allFinite();
}

bool is_hermitian(const CMatrix &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMatrix &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    CMatrix id = CMatrix::Identity(m.rows(), m.cols());
    return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

bool is_projector(const CMatrix &m, double tol) {
    if (!is_hermitian(m, tol)) {
        return false;
    }
    if (m.size() == 0) {
        return true;
    }
    return (m * m - m).cwiseAbs().maxCoeff() <= tol;
}

bool is_psd(const CMatrix &m, double tol) {
    if (!is_hermitian(m, tol)) {
        return false;
    }
    if (m.size() == 0) {
        return true;
    }
    CMatrix h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

double operator_norm(const CMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

CMatrix tensor(const CMatrix &a, const CMatrix &b, const ResourceLimits &limits) {
    auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
    auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
    limits.check(std::max(rows, cols), "tensor");
    CMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix range_basis(const CMatrix &projector) {
    CMatrix h = (projector + projector.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
        if (es.eigenvalues()(i) > 0.5) {
            keep.push_back(i);
        }
    }
    CMatrix out(projector.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    }
    return out;
}

CMatrix span_basis(std::span<const CMatrix> bases, double tol) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto &b : bases) {
        rows = std::max(rows, b.rows());
        cols += b.cols();
    }
    if (cols == 0) {
        return CMatrix(rows, 0);
    }
    CMatrix stacked(rows, cols);
    Eigen::Index at = 0;
    for (const auto &b : bases) {
        stacked.middleCols(at, b.cols()) = b;
        at += b.cols();
    }
    Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeThinU);
    Eigen::Index r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()(r) > tol) {
        ++r;
    }
    return svd.matrixU().leftCols(r);
}

CMatrix projector_onto(const CMatrix &basis, Eigen::Index dim) {
    if (basis.cols() == 0) {
        return CMatrix::Zero(dim, dim);
    }
    return basis * basis.adjoint();
}

PureState::PureState(std::vector<std::size_t> dims, CVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    std::size_t total = std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
    if (dims_.empty() || total != static_cast<std::size_t>(amplitudes_.size())) {
        throw ValidationError("PureState: amplitude count does not match the product of subsystem dimensions");
    }
    if (!amplitudes_.allFinite()) {
        throw ValidationError("PureState: non-finite amplitude");
    }
    double n = amplitudes_.norm();
    if (std::abs(n - 1.0) > kStateNormTol) {
        throw ValidationError("PureState: norm " + std::to_string(n) + " is not 1");
    }
}

PureState PureState::from_coefficients(const CMatrix &coefficients) {
    CVector amps(coefficients.size());
    for (Eigen::Index i = 0; i < coefficients.rows(); ++i) {
        for (Eigen::Index j = 0; j < coefficients.cols(); ++j) {
            amps(i * coefficients.cols() + j) = coefficients(i, j);
        }
    }
    return PureState({static_cast<std::size_t>(coefficients.rows()), static_cast<std::size_t>(coefficients.cols())},
                     std::move(amps));
}

CMatrix PureState::as_matrix(std::span<const std::size_t> left) const {
    const std::size_t n = dims_.size();
    std::vector<bool> is_left(n, false);
    for (std::size_t s : left) {
        if (s >= n || is_left[s]) {
            throw ValidationError("PureState::as_matrix: invalid bipartition");
        }
        is_left[s] = true;
    }
    std::vector<std::size_t> order;
    for (std::size_t s = 0; s < n; ++s) {
        if (is_left[s]) order.push_back(s);
    }
    const std::size_t n_left = order.size();
    for (std::size_t s = 0; s < n; ++s) {
        if (!is_left[s]) order.push_back(s);
    }
    std::size_t d_left = 1;
    for (std::size_t k = 0; k < n_left; ++k) d_left *= dims_[order[k]];
    const std::size_t d_right = dim() / d_left;

    // Strides of the original row-major layout.
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t s = n - 1; s > 0; --s) stride[s - 1] = stride[s] * dims_[s];

    CMatrix out(static_cast<Eigen::Index>(d_left), static_cast<Eigen::Index>(d_right));
    std::vector<std::size_t> digit(n, 0);
    for (std::size_t flat = 0; flat < dim(); ++flat) {
        // `digit` indexes subsystems in permuted order.
        std::size_t src = 0;
        for (std::size_t k = 0; k < n; ++k) src += digit[k] * stride[order[k]];
        std::size_t row = flat / d_right;
        std::size_t col = flat % d_right;
        out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = amplitudes_(static_cast<Eigen::Index>(src));
        for (std::size_t k = n; k-- > 0;) {
            if (++digit[k] < dims_[order[k]]) break;
            digit[k] = 0;
        }
    }
    return out;
}

CMatrix PureState::as_matrix() const {
    if (dims_.size() != 2) {
        throw ValidationError("PureState::as_matrix: state is not bipartite");
    }
    const std::size_t left[] = {0};
    return as_matrix(left);
}

std::size_t SchmidtSpectrum::rank() const {
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
        if (coefficients(i) > kRankThreshold) ++r;
    }
    return r;
}

CVector SchmidtSpectrum::reconstruct() const {
    CMatrix m = CMatrix::Zero(left.rows(), right.rows());
    for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
        m += coefficients(i) * left.col(i) * right.col(i).transpose();
    }
    CVector out(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i * m.cols() + j) = m(i, j);
    }
    return out;
}

SchmidtSpectrum SchmidtSpectrum::from_coefficients(std::span<const double> coefficients) {
    const auto n = static_cast<Eigen::Index>(coefficients.size());
    std::vector<std::size_t> order(coefficients.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return coefficients[a] > coefficients[b]; });
    SchmidtSpectrum out;
    out.coefficients.resize(n);
    out.left = CMatrix::Zero(n, n);
    out.right = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        double c = coefficients[order[static_cast<std::size_t>(k)]];
        if (!(c >= 0.0)) {
            throw ValidationError("SchmidtSpectrum: coefficients must be nonnegative");
        }
        out.coefficients(k) = c;
        out.left(static_cast<Eigen::Index>(order[static_cast<std::size_t>(k)]), k) = 1.0;
        out.right(static_cast<Eigen::Index>(order[static_cast<std::size_t>(k)]), k) = 1.0;
    }
    return out;
}

SchmidtSpectrum schmidt(const PureState &state, std::span<const std::size_t> left) {
    CMatrix m = state.as_matrix(left);
    Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtSpectrum out;
    out.coefficients = svd.singularValues();
    out.left = svd.matrixU();
    // M = U Σ V^†, so the right Schmidt vectors are the conjugated columns of V.
    out.right = svd.matrixV().conjugate();
    return out;
}

SchmidtSpectrum schmidt(const PureState &state) {
    if (state.dims().size() != 2) {
        throw ValidationError("schmidt: state is not bipartite; pass an explicit cut");
    }
    const std::size_t left[] = {0};
    return schmidt(state, left);
}

double low_rank_distance(const SchmidtSpectrum &target, std::size_t r) {
    if (r == 0) {
        throw RangeError("low_rank_distance: rank bound must be at least 1");
    }
    if (r >= target.rank()) {
        return 0.0;
    }
    const Eigen::Index n = target.coefficients.size();
    double head = 0.0;
    double tail = 0.0;
    // Summing from the smallest coefficient keeps the tail accurate.
    for (Eigen::Index i = n; i-- > 0;) {
        double sq = target.coefficients(i) * target.coefficients(i);
        if (static_cast<std::size_t>(i) >= r) {
            tail += sq;
        } else {
            head += sq;
        }
    }
    const double total = head + tail;
    // 2 - 2 sqrt(h) = 2 (1 - h) / (1 + sqrt(h)) with 1 - h = tail on the unit sphere.
    return std::sqrt(2.0 * (tail / total) / (1.0 + std::sqrt(head / total)));
}

}  // namespace qsep
