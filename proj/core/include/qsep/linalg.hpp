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

#ifndef QSEP_LINALG_HPP
#define QSEP_LINALG_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qsep/errors.hpp"

namespace qsep {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Absolute tolerance for structural checks (projector, unitary, normalization).
inline constexpr double kStructuralTol = 1e-10;
/// Schmidt coefficients at or below this value count as zero.
inline constexpr double kRankThreshold = 1e-10;
/// Tolerance on the norm of a PureState.
inline constexpr double kStateNormTol = 1e-12;

/// Caps the total Hilbert-space dimension of a single computation.
struct ResourceLimits {
    std::size_t max_dim = std::size_t{1} << 14;

    /// Throws ResourceError when `dim` exceeds the cap.
    void check(std::size_t dim, const char *what) const;
};

bool all_finite(const CMatrix &m);
bool is_hermitian(const CMatrix &m, double tol = kStructuralTol);
bool is_unitary(const CMatrix &m, double tol = kStructuralTol);
bool is_projector(const CMatrix &m, double tol = kStructuralTol);
/// Hermitian with spectrum >= -tol.
bool is_psd(const CMatrix &m, double tol = kStructuralTol);

/// Largest singular value.
double operator_norm(const CMatrix &m);

/// Kronecker product `a ⊗ b`.
CMatrix tensor(const CMatrix &a, const CMatrix &b, const ResourceLimits &limits = {});

/// Orthonormal basis (as columns) for the range of a projector.
CMatrix range_basis(const CMatrix &projector);
/// Orthonormal basis for the sum of the column spaces of `bases`.
CMatrix span_basis(std::span<const CMatrix> bases, double tol = kStructuralTol);
/// Orthogonal projector onto the column space of an orthonormal `basis`.
CMatrix projector_onto(const CMatrix &basis, Eigen::Index dim);

/// A normalized vector on a tensor product of subsystems.
///
/// Amplitudes are stored in row-major order: the last subsystem varies fastest.
class PureState {
   public:
    PureState(std::vector<std::size_t> dims, CVector amplitudes);

    /// Bipartite state with amplitude `coefficients(i, j)` on |i>|j>.
    static PureState from_coefficients(const CMatrix &coefficients);

    const std::vector<std::size_t> &dims() const {
        return dims_;
    }
    const CVector &amplitudes() const {
        return amplitudes_;
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(amplitudes_.size());
    }

    /// Reshape into a (left subsystems) x (remaining subsystems) matrix.
    CMatrix as_matrix(std::span<const std::size_t> left) const;
    /// Reshape of a two-subsystem state into its coefficient matrix.
    CMatrix as_matrix() const;

   private:
    std::vector<std::size_t> dims_;
    CVector amplitudes_;
};

/// Schmidt decomposition across a bipartition.
struct SchmidtSpectrum {
    /// Nonincreasing, nonnegative.
    RVector coefficients;
    /// Orthonormal columns; the state is Σ_i λ_i left.col(i) ⊗ right.col(i).
    CMatrix left;
    CMatrix right;

    /// Number of coefficients above kRankThreshold.
    std::size_t rank() const;
    /// Σ_i λ_i left_i ⊗ right_i, in (left, right) ordering.
    CVector reconstruct() const;
    /// Spectrum of a state already in Schmidt form with the given coefficients.
    static SchmidtSpectrum from_coefficients(std::span<const double> coefficients);
};

/// Schmidt decomposition of `state` with subsystems `left` on one side.
SchmidtSpectrum schmidt(const PureState &state, std::span<const std::size_t> left);
/// Schmidt decomposition of a two-subsystem state.
SchmidtSpectrum schmidt(const PureState &state);

/// Minimum Euclidean distance from any unit vector of Schmidt rank <= r to the
/// state with spectrum `target`: sqrt(2 - 2 sqrt(Σ_{i<r} λ_i²)).
///
/// Evaluated through the discarded tail so that tiny distances keep full
/// relative precision.
double low_rank_distance(const SchmidtSpectrum &target, std::size_t r);

}  // namespace qsep

#endif
