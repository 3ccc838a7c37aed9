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

#ifndef QSEP_EXTRACTION_HPP
#define QSEP_EXTRACTION_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qsep/linalg.hpp"
#include "qsep/states.hpp"
#include "qsep/strategy.hpp"
#include "qsep/types.hpp"

namespace qsep {

/// Operators feeding the swap isometry.
struct ExtractionKit {
    std::size_t d = 0;
    Family family = Family::kGeneric;
    /// Level projections built from the measurements; not necessarily orthogonal.
    std::vector<CMatrix> P_A;
    std::vector<CMatrix> P_B;
    /// Exactly orthogonal replacements for P_A / P_B (see orthogonalize).
    std::vector<CMatrix> Q_A;
    std::vector<CMatrix> Q_B;
    /// Flip unitaries: entry k-1 carries level k to level k-1.
    std::vector<CMatrix> flip_A;
    std::vector<CMatrix> flip_B;
    /// chainX_A[k] = flip_A[0] ⋯ flip_A[k-1]; chainX_A[0] = identity.
    std::vector<CMatrix> chainX_A;
    std::vector<CMatrix> chainX_B;
    /// Σ_k ω^k Q^{(k)} + 1 - Σ_k Q^{(k)}.
    CMatrix Z_A;
    CMatrix Z_B;
    Complex omega;
};

/// Maximum residuals of the four Yang–Navascués conditions.
struct ResidualReport {
    /// eps[0]: overlaps, eps[1]: completeness, eps[2]: A/B agreement, eps[3]: flips.
    std::array<double, 4> eps{};
    double overall = 0.0;
};

/// 1 - support + op. Requires op = support·op·support and op†op = support
/// (both within 1e-8).
CMatrix unitarize(const CMatrix &op, const CMatrix &support);

/// Sign of a Hermitian operator with eigenvalues |λ| < 1e-12 mapped to +1.
CMatrix polar_fix(const CMatrix &op);

/// Reduced density operator of one party.
CMatrix reduced_density(const PureState &psi, Party party);

/// Pairwise orthogonal projectors close to `projectors` on the support of ρ.
///
/// Range vectors of every input, taken in the eigenbasis of P ρ P and ordered
/// by state weight, are accepted greedily when at least half of their norm lies
/// outside the span of the vectors accepted so far. The accepted family is then
/// orthonormalized symmetrically and Q_i collects the vectors that came from P_i.
std::vector<CMatrix> orthogonalize(std::span<const CMatrix> projectors, const CMatrix &rho);
std::vector<CMatrix> orthogonalize(std::span<const CMatrix> projectors, const PureState &psi, Party party);

/// Σ_{i≠j} Tr(P_i P_j P_i ρ).
double overlap_weight(std::span<const CMatrix> projectors, const CMatrix &rho);
/// Σ_i Tr((P_i - Q_i)² ρ).
double replacement_weight(std::span<const CMatrix> p, std::span<const CMatrix> q, const CMatrix &rho);

/// Builds the extraction operators of a strategy with the question labels of
/// `family` for the ideal state `state`.
ExtractionKit build_kit(const Strategy &strategy, Family family, const SchmidtState &state);
/// Uses strategy.family and strategy.target.
ExtractionKit build_kit(const Strategy &strategy);

ResidualReport yn_residuals(const ExtractionKit &kit, const PureState &psi, const SchmidtState &c);
/// Same with coefficients that need not be normalized; only ratios c_k / c_0 enter.
ResidualReport yn_residuals(const ExtractionKit &kit, const PureState &psi, std::span<const double> c);

struct SwapResult {
    /// Φ(ψ ⊗ |00>) on A ⊗ B ⊗ A' ⊗ B'.
    PureState output{{1, 1}, CVector::Ones(1)};
    /// (1/c_0) Q_A^{(0)} ψ on A ⊗ B; not normalized.
    CVector junk;
    /// ‖Φ(ψ ⊗ |00>) - junk ⊗ Σ_j c_j |jj>‖.
    double error = 0.0;
    /// ‖Φ(ψ ⊗ |00>)‖ before the output is stored; 1 for an isometry.
    double output_norm = 0.0;
};

SwapResult swap_isometry(const ExtractionKit &kit, const PureState &psi, const SchmidtState &c,
                         const ResourceLimits &limits = {});

std::string kit_to_json(const ExtractionKit &kit);

}  // namespace qsep

#endif
