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

#ifndef QSEP_IDEAL_LAYOUT_HPP
#define QSEP_IDEAL_LAYOUT_HPP

// Rank-one descriptions of the ideal measurement families.
//
// Every ideal measurement used here is a list of outcomes that are either a
// real unit vector supported on at most two computational levels, the zero
// operator, or the complement of the listed vectors. Describing them this way
// lets the same conventions drive the projector builders (in double) and the
// extended-precision correlation synthesis.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qsep/errors.hpp"
#include "qsep/types.hpp"

namespace qsep {

template <class Real>
struct RankOneOutcome {
    enum class Kind { kVector, kZero, kComplement };

    Answer label = 0;
    Kind kind = Kind::kVector;
    /// (level, amplitude) pairs of the unit vector when kind == kVector.
    std::vector<std::pair<std::size_t, Real>> entries;
};

template <class Real>
struct MeasurementLayout {
    Question question;
    std::vector<RankOneOutcome<Real>> outcomes;
};

template <class Real>
struct FamilyLayout {
    Family family = Family::kGeneric;
    std::size_t d = 0;
    std::vector<Answer> answers_a;
    std::vector<Answer> answers_b;
    std::vector<MeasurementLayout<Real>> alice;
    std::vector<MeasurementLayout<Real>> bob;
};

namespace layout_detail {

template <class Real>
RankOneOutcome<Real> basis(Answer label, std::size_t level) {
    return {label, RankOneOutcome<Real>::Kind::kVector, {{level, Real(1)}}};
}

template <class Real>
RankOneOutcome<Real> zero(Answer label) {
    return {label, RankOneOutcome<Real>::Kind::kZero, {}};
}

template <class Real>
RankOneOutcome<Real> complement(Answer label) {
    return {label, RankOneOutcome<Real>::Kind::kComplement, {}};
}

/// +1 / -1 eigenvectors of σ_x on levels {lo, lo+1}.
template <class Real>
std::pair<RankOneOutcome<Real>, RankOneOutcome<Real>> sigma_x_pair(Answer plus, Answer minus, std::size_t lo) {
    using std::sqrt;
    const Real h = Real(1) / sqrt(Real(2));
    return {{plus, RankOneOutcome<Real>::Kind::kVector, {{lo, h}, {lo + 1, h}}},
            {minus, RankOneOutcome<Real>::Kind::kVector, {{lo, h}, {lo + 1, -h}}}};
}

/// +1 / -1 eigenvectors of cos μ σ_z + sign · sin μ σ_x on levels {lo, lo+1},
/// where μ = arctan(sin 2θ) and tan θ = c_hi / c_lo.
template <class Real>
std::pair<RankOneOutcome<Real>, RankOneOutcome<Real>> tilted_pair(Answer plus, Answer minus, std::size_t lo,
                                                                    Real c_lo, Real c_hi, int sign) {
    using std::sqrt;
    const Real mass = c_lo * c_lo + c_hi * c_hi;
    const Real s = Real(2) * c_lo * c_hi / mass;  // sin 2θ = tan μ
    const Real cos_mu = Real(1) / sqrt(Real(1) + s * s);
    const Real ch = sqrt((Real(1) + cos_mu) / Real(2));  // cos(μ/2)
    const Real sh = sqrt((Real(1) - cos_mu) / Real(2));  // sin(μ/2)
    const Real sg = Real(sign);
    return {{plus, RankOneOutcome<Real>::Kind::kVector, {{lo, ch}, {lo + 1, sg * sh}}},
            {minus, RankOneOutcome<Real>::Kind::kVector, {{lo, -sg * sh}, {lo + 1, ch}}}};
}

template <class Real>
void push_pair(std::vector<RankOneOutcome<Real>> &out,
               std::pair<RankOneOutcome<Real>, RankOneOutcome<Real>> pair) {
    out.push_back(std::move(pair.first));
    out.push_back(std::move(pair.second));
}

template <class Real>
void check_positive(std::span<const Real> c) {
    for (const auto &x : c) {
        if (!(x > Real(0))) {
            throw ValidationError("ideal layout: every Schmidt coefficient must be positive");
        }
    }
}

}  // namespace layout_detail

/// Ideal measurements of the many-answers family, d odd.
///
/// Within block m the +1 eigenvector carries label 2m and the -1 eigenvector
/// label 2m+1 (primed blocks: 2m+1 and 2m+2).
template <class Real>
FamilyLayout<Real> many_answers_layout(std::span<const Real> c) {
    using namespace layout_detail;
    const std::size_t d = c.size();
    if (d % 2 == 0) {
        throw UnsupportedParityError("many-answers family requires odd d");
    }
    check_positive(c);
    const std::size_t blocks = (d - 1) / 2;

    FamilyLayout<Real> out;
    out.family = Family::kManyAnswers;
    out.d = d;
    for (std::size_t a = 0; a < d; ++a) {
        out.answers_a.push_back(static_cast<Answer>(a));
        out.answers_b.push_back(static_cast<Answer>(a));
    }
    auto lab = [](std::size_t i) { return static_cast<Answer>(i); };

    MeasurementLayout<Real> a0{Question::index(0), {}};
    for (std::size_t a = 0; a < d; ++a) a0.outcomes.push_back(basis<Real>(lab(a), a));

    MeasurementLayout<Real> a1{Question::index(1), {}};
    for (std::size_t m = 0; m < blocks; ++m) push_pair(a1.outcomes, sigma_x_pair<Real>(lab(2 * m), lab(2 * m + 1), 2 * m));
    a1.outcomes.push_back(basis<Real>(lab(d - 1), d - 1));

    MeasurementLayout<Real> a2{Question::index(2), {}};
    a2.outcomes.push_back(basis<Real>(0, 0));
    for (std::size_t m = 0; m < blocks; ++m) {
        push_pair(a2.outcomes, sigma_x_pair<Real>(lab(2 * m + 1), lab(2 * m + 2), 2 * m + 1));
    }
    out.alice = {a0, a1, a2};

    for (int y = 0; y < 4; ++y) {
        const bool primed = y >= 2;
        const int sign = (y % 2 == 0) ? 1 : -1;
        MeasurementLayout<Real> b{Question::index(y), {}};
        if (primed) b.outcomes.push_back(basis<Real>(0, 0));
        for (std::size_t m = 0; m < blocks; ++m) {
            const std::size_t lo = primed ? 2 * m + 1 : 2 * m;
            push_pair(b.outcomes, tilted_pair<Real>(lab(lo), lab(lo + 1), lo, c[lo], c[lo + 1], sign));
        }
        if (!primed) b.outcomes.push_back(basis<Real>(lab(d - 1), d - 1));
        out.bob.push_back(std::move(b));
    }
    return out;
}

/// Ideal measurements of the many-questions family, d even.
///
/// Alice answers {0, 1, 2, ⊥}; Bob answers {0, 1, ⊥}. Bob's primed questions act
/// on levels {2m+1, 2m+2}. In the last block (m = d/2 - 1) level 2m+2 does not
/// exist: outcomes referring to it are the zero operator, Alice's (m, X') keeps
/// |2m>, |2m+1> on outcomes 0, 1, and Bob's primed questions take the c_{2m+2} → 0
/// limit, |2m+1> on outcome 0.
template <class Real>
FamilyLayout<Real> many_questions_layout(std::span<const Real> c) {
    using namespace layout_detail;
    const std::size_t d = c.size();
    if (d % 2 != 0 || d == 0) {
        throw UnsupportedParityError("many-questions family requires even d");
    }
    check_positive(c);
    const std::size_t blocks = d / 2;

    FamilyLayout<Real> out;
    out.family = Family::kManyQuestions;
    out.d = d;
    out.answers_a = {0, 1, 2, kBottom};
    out.answers_b = {0, 1, kBottom};

    for (std::size_t m = 0; m < blocks; ++m) {
        const bool last = (m + 1 == blocks);
        const int mi = static_cast<int>(m);
        const std::size_t lo = 2 * m;
        auto level2 = [&](Answer label) { return last ? zero<Real>(label) : basis<Real>(label, lo + 2); };

        MeasurementLayout<Real> z{{mi, Tag::kZ}, {}};
        z.outcomes = {basis<Real>(0, lo), basis<Real>(1, lo + 1), level2(2), complement<Real>(kBottom)};

        MeasurementLayout<Real> x{{mi, Tag::kX}, {}};
        push_pair(x.outcomes, sigma_x_pair<Real>(0, 1, lo));
        x.outcomes.push_back(level2(2));
        x.outcomes.push_back(complement<Real>(kBottom));

        MeasurementLayout<Real> xp{{mi, Tag::kXp}, {}};
        xp.outcomes.push_back(basis<Real>(0, lo));
        if (last) {
            xp.outcomes.push_back(basis<Real>(1, lo + 1));
            xp.outcomes.push_back(zero<Real>(2));
        } else {
            push_pair(xp.outcomes, sigma_x_pair<Real>(1, 2, lo + 1));
        }
        xp.outcomes.push_back(complement<Real>(kBottom));
        out.alice.push_back(std::move(z));
        out.alice.push_back(std::move(x));
        out.alice.push_back(std::move(xp));

        MeasurementLayout<Real> bz{{mi, Tag::kZ}, {}};
        push_pair(bz.outcomes, tilted_pair<Real>(0, 1, lo, c[lo], c[lo + 1], 1));
        bz.outcomes.push_back(complement<Real>(kBottom));

        MeasurementLayout<Real> bx{{mi, Tag::kX}, {}};
        push_pair(bx.outcomes, tilted_pair<Real>(0, 1, lo, c[lo], c[lo + 1], -1));
        bx.outcomes.push_back(complement<Real>(kBottom));

        auto primed = [&](Tag tag, int sign) {
            MeasurementLayout<Real> b{{mi, tag}, {}};
            if (last) {
                b.outcomes = {basis<Real>(0, lo + 1), zero<Real>(1)};
            } else {
                push_pair(b.outcomes, tilted_pair<Real>(0, 1, lo + 1, c[lo + 1], c[lo + 2], sign));
            }
            b.outcomes.push_back(complement<Real>(kBottom));
            return b;
        };

        MeasurementLayout<Real> aux{{mi, Tag::kAux}, {}};
        aux.outcomes = {basis<Real>(0, lo), basis<Real>(1, lo + 1), complement<Real>(kBottom)};

        out.bob.push_back(std::move(bz));
        out.bob.push_back(primed(Tag::kZp, 1));
        out.bob.push_back(std::move(bx));
        out.bob.push_back(primed(Tag::kXp, -1));
        out.bob.push_back(std::move(aux));
    }
    return out;
}

}  // namespace qsep

#endif
