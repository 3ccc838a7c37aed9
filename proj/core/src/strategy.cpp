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

#include "qsep/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "qsep/ideal_layout.hpp"
#include "qsep/random.hpp"

namespace qsep {

namespace {

using Outcome = RankOneOutcome<double>;

Measurement materialize(const MeasurementLayout<double> &layout, std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    Measurement out;
    out.question = layout.question;
    std::vector<bool> covered(d, false);
    for (const auto &o : layout.outcomes) {
        if (o.kind != Outcome::Kind::kVector) continue;
        for (const auto &[level, amp] : o.entries) covered[level] = true;
    }
    for (const auto &o : layout.outcomes) {
        CMatrix p = CMatrix::Zero(n, n);
        switch (o.kind) {
            case Outcome::Kind::kVector: {
                CVector v = CVector::Zero(n);
                for (const auto &[level, amp] : o.entries) v(static_cast<Eigen::Index>(level)) = amp;
                p = v * v.adjoint();
                break;
            }
            case Outcome::Kind::kComplement:
                for (std::size_t i = 0; i < d; ++i) {
                    if (!covered[i]) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
                }
                break;
            case Outcome::Kind::kZero:
                break;
        }
        out.outcomes.push_back(o.label);
        out.projectors.push_back(std::move(p));
    }
    return out;
}

Strategy from_layout(const FamilyLayout<double> &layout, const SchmidtState &state) {
    Strategy s;
    s.family = layout.family;
    s.target = state.c();
    s.state = state.pure_state();
    s.answers_a = layout.answers_a;
    s.answers_b = layout.answers_b;
    for (const auto &m : layout.alice) s.alice.push_back(materialize(m, layout.d));
    for (const auto &m : layout.bob) s.bob.push_back(materialize(m, layout.d));
    return s;
}

Measurement binary_measurement(int x, const CMatrix &observable) {
    CMatrix id = CMatrix::Identity(observable.rows(), observable.cols());
    return {Question::index(x), {0, 1}, {(id + observable) / 2.0, (id - observable) / 2.0}};
}

const std::vector<Measurement> &side(const Strategy &s, Party p) {
    return p == Party::kAlice ? s.alice : s.bob;
}

std::vector<Question> question_list(const std::vector<Measurement> &ms) {
    std::vector<Question> out;
    out.reserve(ms.size());
    for (const auto &m : ms) out.push_back(m.question);
    return out;
}

CMatrix conjugate_by(const CMatrix &u, const CMatrix &p) {
    CMatrix r = u * p * u.adjoint();
    return (r + r.adjoint()) / 2.0;
}

}  // namespace

const CMatrix &Measurement::projector(Answer a) const {
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i] == a) return projectors[i];
    }
    throw ValidationError("measurement " + question.label() + " has no outcome " + answer_label(a));
}

CMatrix Measurement::binary_observable() const {
    CMatrix o = CMatrix::Zero(dim(), dim());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i] == 0) o += projectors[i];
        if (outcomes[i] == 1) o -= projectors[i];
    }
    return o;
}

// Frobenius norms throughout: they bound the operator norm from above.
double Measurement::invariant_residual() const {
    if (projectors.empty() || projectors.size() != outcomes.size()) {
        throw ValidationError("measurement " + question.label() + ": outcome/projector count mismatch");
    }
    const Eigen::Index n = dim();
    double worst = 0.0;
    CMatrix sum = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const CMatrix &p = projectors[i];
        if (p.rows() != n || p.cols() != n) {
            throw ValidationError("measurement " + question.label() + ": projector shapes differ");
        }
        if (!all_finite(p)) return INFINITY;
        worst = std::max(worst, (p - p.adjoint()).norm());
        worst = std::max(worst, (p * p - p).norm());
        for (std::size_t j = 0; j < i; ++j) worst = std::max(worst, (p * projectors[j]).norm());
        sum += p;
    }
    worst = std::max(worst, (sum - CMatrix::Identity(n, n)).norm());
    return worst;
}

void Measurement::validate(double tol) const {
    double r = invariant_residual();
    if (!(r <= tol)) {
        throw ValidationError("measurement " + question.label() + " violates projective invariants (residual " +
                              std::to_string(r) + ")");
    }
}

std::vector<Question> Strategy::questions_a() const {
    return question_list(alice);
}

std::vector<Question> Strategy::questions_b() const {
    return question_list(bob);
}

const Measurement *Strategy::find(Party party, Question q) const {
    for (const auto &m : side(*this, party)) {
        if (m.question == q) return &m;
    }
    return nullptr;
}

const Measurement &Strategy::at(Party party, Question q) const {
    const Measurement *m = find(party, q);
    if (m == nullptr) throw ValidationError("strategy has no measurement for question " + q.label());
    return *m;
}

void Strategy::validate(double tol) const {
    if (state.dims().size() != 2) throw ValidationError("strategy state must be bipartite");
    auto check_side = [&](const std::vector<Measurement> &ms, const std::vector<Answer> &answers, std::size_t dim,
                          const char *who) {
        if (ms.empty()) throw ValidationError(std::string(who) + " has no questions");
        if (answers.empty()) throw ValidationError(std::string(who) + " has no answers");
        std::set<Question> seen;
        for (const auto &m : ms) {
            if (!seen.insert(m.question).second) {
                throw ValidationError(std::string(who) + " repeats question " + m.question.label());
            }
            if (m.outcomes != answers) {
                throw ValidationError(std::string(who) + " question " + m.question.label() +
                                      " does not use the declared answer set");
            }
            if (static_cast<std::size_t>(m.dim()) != dim) {
                throw ValidationError(std::string(who) + " question " + m.question.label() +
                                      " acts on the wrong space");
            }
            m.validate(tol);
        }
    };
    check_side(alice, answers_a, dim_a(), "alice");
    check_side(bob, answers_b, dim_b(), "bob");
}

double Povm::invariant_residual() const {
    if (elements.empty() || elements.size() != outcomes.size()) {
        throw ValidationError("povm " + question.label() + ": outcome/element count mismatch");
    }
    const Eigen::Index n = elements.front().rows();
    double worst = 0.0;
    CMatrix sum = CMatrix::Zero(n, n);
    for (const auto &e : elements) {
        worst = std::max(worst, (e - e.adjoint()).norm());
        Eigen::SelfAdjointEigenSolver<CMatrix> es((e + e.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
        worst = std::max(worst, -es.eigenvalues().minCoeff());
        sum += e;
    }
    return std::max(worst, (sum - CMatrix::Identity(n, n)).norm());
}

Strategy tilted_chsh_ideal(double theta) {
    const BlockParams bp = block_params_from_theta(theta);
    CMatrix sz(2, 2), sx(2, 2);
    sz << 1, 0, 0, -1;
    sx << 0, 1, 1, 0;
    const double cm = std::cos(bp.mu), sm = std::sin(bp.mu);

    Strategy s;
    s.family = Family::kTiltedChsh;
    s.target = {std::cos(theta), std::sin(theta)};
    CVector amp = CVector::Zero(4);
    amp(0) = std::cos(theta);
    amp(3) = std::sin(theta);
    s.state = PureState({2, 2}, amp);
    s.answers_a = {0, 1};
    s.answers_b = {0, 1};
    s.alice = {binary_measurement(0, sz), binary_measurement(1, sx)};
    s.bob = {binary_measurement(0, cm * sz + sm * sx), binary_measurement(1, cm * sz - sm * sx)};
    return s;
}

Strategy many_answers_ideal(const SchmidtState &state) {
    return from_layout(many_answers_layout<double>(std::span<const double>(state.c())), state);
}

Strategy many_questions_ideal(const SchmidtState &state) {
    return from_layout(many_questions_layout<double>(std::span<const double>(state.c())), state);
}

Strategy truncated_separating_strategy(Family family, std::size_t N) {
    switch (family) {
        case Family::kManyAnswers:
            if (N % 2 == 0) throw UnsupportedParityError("many-answers truncation requires odd N");
            return many_answers_ideal(psi_N(N));
        case Family::kManyQuestions:
            if (N % 2 != 0) throw UnsupportedParityError("many-questions truncation requires even N");
            return many_questions_ideal(psi_N(N));
        default:
            throw ValidationError("truncated strategies exist only for the many-answers and many-questions families");
    }
}

Strategy perturb(const Strategy &strategy, double eps, std::uint64_t seed) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw ValidationError("perturbation strength must be finite and >= 0");
    if (eps == 0.0) return strategy;
    Rng rng(mix64(seed));
    Strategy out = strategy;
    for (auto *ms : {&out.alice, &out.bob}) {
        for (auto &m : *ms) {
            CMatrix u = unitary_exp(random_hermitian(m.dim(), rng), eps);
            for (auto &p : m.projectors) p = conjugate_by(u, p);
        }
    }
    CVector psi = strategy.state.amplitudes() + eps * random_unit_vector(strategy.state.amplitudes().size(), rng);
    out.state = PureState(strategy.state.dims(), psi / psi.norm());
    return out;
}

PovmStrategy povm_reduce(const Strategy &strategy) {
    const SchmidtSpectrum sp = schmidt(strategy.state);
    const auto r = static_cast<Eigen::Index>(sp.rank());
    const CMatrix u = sp.left.leftCols(r);
    const CMatrix w = sp.right.leftCols(r);
    RVector lambda = sp.coefficients.head(r);
    lambda /= lambda.norm();

    PovmStrategy out;
    out.state = PureState::from_coefficients(lambda.cast<Complex>().asDiagonal().toDenseMatrix());
    out.answers_a = strategy.answers_a;
    out.answers_b = strategy.answers_b;
    auto reduce = [](const std::vector<Measurement> &ms, const CMatrix &basis, std::vector<Povm> &dst) {
        for (const auto &m : ms) {
            Povm p{m.question, m.outcomes, {}};
            for (const auto &proj : m.projectors) {
                CMatrix e = basis.adjoint() * proj * basis;
                p.elements.push_back((e + e.adjoint()) / 2.0);
            }
            dst.push_back(std::move(p));
        }
    };
    reduce(strategy.alice, u, out.alice);
    reduce(strategy.bob, w, out.bob);
    return out;
}

Strategy embed(const Strategy &strategy, std::size_t extra, std::uint64_t seed) {
    const auto da = static_cast<Eigen::Index>(strategy.dim_a());
    const auto db = static_cast<Eigen::Index>(strategy.dim_b());
    const auto e = static_cast<Eigen::Index>(extra);
    Rng rng(mix64(seed));
    const CMatrix ua = random_unitary(da + e, rng);
    const CMatrix ub = random_unitary(db + e, rng);

    Strategy out = strategy;
    CMatrix coeff = CMatrix::Zero(da + e, db + e);
    coeff.topLeftCorner(da, db) = strategy.state.as_matrix();
    out.state = PureState::from_coefficients(ua * coeff * ub.transpose());

    auto grow = [&](std::vector<Measurement> &ms, Eigen::Index d0, const CMatrix &u) {
        for (auto &m : ms) {
            for (std::size_t i = 0; i < m.projectors.size(); ++i) {
                CMatrix p = CMatrix::Zero(d0 + e, d0 + e);
                p.topLeftCorner(d0, d0) = m.projectors[i];
                for (Eigen::Index k = 0; k < e; ++k) {
                    if (static_cast<std::size_t>(k) % m.projectors.size() == i) p(d0 + k, d0 + k) = 1.0;
                }
                m.projectors[i] = conjugate_by(u, p);
            }
        }
    };
    grow(out.alice, da, ua);
    grow(out.bob, db, ub);
    return out;
}

}  // namespace qsep
