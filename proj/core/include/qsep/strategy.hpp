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

#ifndef QSEP_STRATEGY_HPP
#define QSEP_STRATEGY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsep/linalg.hpp"
#include "qsep/states.hpp"
#include "qsep/types.hpp"

namespace qsep {

/// Labeled projective measurement on one party's space.
struct Measurement {
    Question question;
    std::vector<Answer> outcomes;
    std::vector<CMatrix> projectors;

    Eigen::Index dim() const {
        return projectors.empty() ? 0 : projectors.front().rows();
    }
    const CMatrix &projector(Answer a) const;
    /// Σ_a sign(a)·P_a with outcome 0 ↦ +1 and outcome 1 ↦ -1, other outcomes 0.
    CMatrix binary_observable() const;

    /// Largest violation of projectivity, orthogonality or completeness.
    double invariant_residual() const;
    /// Throws ValidationError when invariant_residual() exceeds `tol`.
    void validate(double tol = kStructuralTol) const;
};

/// A shared pure state on H_A ⊗ H_B with one measurement per question on each side.
struct Strategy {
    Family family = Family::kGeneric;
    /// Schmidt coefficients of the ideal state this strategy implements, when known.
    std::vector<double> target;
    PureState state{{1, 1}, CVector::Ones(1)};
    std::vector<Answer> answers_a;
    std::vector<Answer> answers_b;
    std::vector<Measurement> alice;
    std::vector<Measurement> bob;

    std::size_t dim_a() const {
        return state.dims().at(0);
    }
    std::size_t dim_b() const {
        return state.dims().at(1);
    }
    std::vector<Question> questions_a() const;
    std::vector<Question> questions_b() const;

    /// Measurement for question `q`, or nullptr.
    const Measurement *find(Party party, Question q) const;
    const Measurement &at(Party party, Question q) const;

    /// Checks every structural invariant; throws ValidationError.
    void validate(double tol = kStructuralTol) const;
};

/// Labeled POVM on one party's space.
struct Povm {
    Question question;
    std::vector<Answer> outcomes;
    std::vector<CMatrix> elements;

    /// Largest violation of positivity or completeness.
    double invariant_residual() const;
};

struct PovmStrategy {
    PureState state{{1, 1}, CVector::Ones(1)};
    std::vector<Answer> answers_a;
    std::vector<Answer> answers_b;
    std::vector<Povm> alice;
    std::vector<Povm> bob;
};

/// cos θ|00> + sin θ|11> with A_0 = σ_z, A_1 = σ_x, B_{0,1} = cos μ σ_z ± sin μ σ_x.
/// Outcome 0 is the +1 eigenspace.
Strategy tilted_chsh_ideal(double theta);

/// Ideal strategy of the many-answers family (odd d).
Strategy many_answers_ideal(const SchmidtState &state);

/// Ideal strategy of the many-questions family (even d).
Strategy many_questions_ideal(const SchmidtState &state);

/// Ideal strategy for |Ψ_N> of the given family.
Strategy truncated_separating_strategy(Family family, std::size_t N);

/// Conjugates every measurement by exp(i·eps·H) with a seeded random Hermitian H
/// of unit norm and moves the state to normalize(ψ + eps·φ) for a seeded random
/// unit φ. eps == 0 returns the input unchanged.
Strategy perturb(const Strategy &strategy, double eps, std::uint64_t seed);

/// Reduces to POVMs on the local supports of the state (dimension = Schmidt rank).
PovmStrategy povm_reduce(const Strategy &strategy);

/// Enlarges both local spaces by `extra` unpopulated levels, assigns them to
/// outcomes so that every measurement stays complete, and rotates each side by a
/// seeded Haar-random unitary. The correlation is unchanged.
Strategy embed(const Strategy &strategy, std::size_t extra, std::uint64_t seed);

std::string strategy_to_json(const Strategy &strategy);
Strategy strategy_from_json(const std::string &text);

}  // namespace qsep

#endif
