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

#ifndef QSEP_CORRELATION_HPP
#define QSEP_CORRELATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsep/errors.hpp"
#include "qsep/ideal_layout.hpp"
#include "qsep/linalg.hpp"
#include "qsep/states.hpp"
#include "qsep/strategy.hpp"
#include "qsep/types.hpp"

namespace qsep {

/// Conditional distributions p(a, b | x, y) over finite question and answer lists.
///
/// Tables are stored per question pair in row-major (a, b) order; the table for
/// (questions_a[i], questions_b[j]) is tables[i * |Y| + j].
template <class Real>
struct BasicCorrelation {
    std::vector<Question> questions_a;
    std::vector<Question> questions_b;
    std::vector<Answer> answers_a;
    std::vector<Answer> answers_b;
    std::vector<std::vector<Real>> tables;

    static BasicCorrelation zeros(std::vector<Question> xs, std::vector<Question> ys, std::vector<Answer> as,
                                  std::vector<Answer> bs) {
        BasicCorrelation p{std::move(xs), std::move(ys), std::move(as), std::move(bs), {}};
        p.tables.assign(p.questions_a.size() * p.questions_b.size(),
                        std::vector<Real>(p.answers_a.size() * p.answers_b.size(), Real(0)));
        return p;
    }

    std::vector<Real> &table(std::size_t xi, std::size_t yi) {
        return tables[xi * questions_b.size() + yi];
    }
    const std::vector<Real> &table(std::size_t xi, std::size_t yi) const {
        return tables[xi * questions_b.size() + yi];
    }
    Real &at(std::size_t xi, std::size_t yi, std::size_t ai, std::size_t bi) {
        return table(xi, yi)[ai * answers_b.size() + bi];
    }
    const Real &at(std::size_t xi, std::size_t yi, std::size_t ai, std::size_t bi) const {
        return table(xi, yi)[ai * answers_b.size() + bi];
    }

    std::optional<std::size_t> index_a(Question x) const {
        return find_index(questions_a, x);
    }
    std::optional<std::size_t> index_b(Question y) const {
        return find_index(questions_b, y);
    }
    std::optional<std::size_t> answer_index_a(Answer a) const {
        return find_index(answers_a, a);
    }
    std::optional<std::size_t> answer_index_b(Answer b) const {
        return find_index(answers_b, b);
    }

    /// p(a, b | x, y) by label; throws RangeError for unknown labels.
    Real p(Answer a, Answer b, Question x, Question y) const {
        return at(require(index_a(x), "question", x.label()), require(index_b(y), "question", y.label()),
                  require(answer_index_a(a), "answer", answer_label(a)),
                  require(answer_index_b(b), "answer", answer_label(b)));
    }
    /// Σ_b p(a, b | x, y).
    Real marginal_a(Answer a, Question x, Question y) const {
        const auto &t = table(require(index_a(x), "question", x.label()), require(index_b(y), "question", y.label()));
        const std::size_t ai = require(answer_index_a(a), "answer", answer_label(a));
        Real s(0);
        for (std::size_t bi = 0; bi < answers_b.size(); ++bi) s += t[ai * answers_b.size() + bi];
        return s;
    }
    /// Σ_a p(a, b | x, y).
    Real marginal_b(Answer b, Question x, Question y) const {
        const auto &t = table(require(index_a(x), "question", x.label()), require(index_b(y), "question", y.label()));
        const std::size_t bi = require(answer_index_b(b), "answer", answer_label(b));
        Real s(0);
        for (std::size_t ai = 0; ai < answers_a.size(); ++ai) s += t[ai * answers_b.size() + bi];
        return s;
    }

   private:
    template <class T>
    static std::optional<std::size_t> find_index(const std::vector<T> &v, const T &x) {
        auto it = std::find(v.begin(), v.end(), x);
        if (it == v.end()) return std::nullopt;
        return static_cast<std::size_t>(it - v.begin());
    }
    static std::size_t require(std::optional<std::size_t> i, const char *what, const std::string &label) {
        if (!i) throw RangeError(std::string("correlation has no ") + what + " '" + label + "'");
        return *i;
    }
};

using Correlation = BasicCorrelation<double>;

/// Largest violation of the entry range [0, 1] and of unit table sums.
double normalization_residual(const Correlation &p);
/// Throws ValidationError when normalization_residual(p) exceeds `tol`.
void validate(const Correlation &p, double tol = 1e-10);

/// p(a, b | x, y) = <ψ| A^a_x ⊗ B^b_y |ψ>.
Correlation evaluate(const Strategy &strategy);
/// Same for a POVM strategy.
Correlation evaluate(const PovmStrategy &strategy);

template <class Real>
struct BasicDistanceReport {
    Real value = Real(0);
    Question argmax_x;
    Question argmax_y;
    /// L1 distance per question pair, in the first argument's table order.
    std::vector<Real> per_pair;
};

using DistanceReport = BasicDistanceReport<double>;

namespace correlation_detail {

template <class T>
std::vector<std::size_t> match(const std::vector<T> &from, const std::vector<T> &to, const char *what) {
    if (from.size() != to.size()) throw ValidationError(std::string("correlations have different ") + what);
    std::vector<std::size_t> out;
    for (const auto &v : from) {
        auto it = std::find(to.begin(), to.end(), v);
        if (it == to.end()) throw ValidationError(std::string("correlations have different ") + what);
        out.push_back(static_cast<std::size_t>(it - to.begin()));
    }
    return out;
}

}  // namespace correlation_detail

/// sup_{x,y} Σ_{a,b} |p(a,b|x,y) - q(a,b|x,y)|. Labels are matched, so the two
/// correlations may list questions and answers in different orders.
template <class Real>
BasicDistanceReport<Real> distance(const BasicCorrelation<Real> &p, const BasicCorrelation<Real> &q) {
    using std::abs;
    using correlation_detail::match;
    const auto mx = match(p.questions_a, q.questions_a, "question sets");
    const auto my = match(p.questions_b, q.questions_b, "question sets");
    const auto ma = match(p.answers_a, q.answers_a, "answer sets");
    const auto mb = match(p.answers_b, q.answers_b, "answer sets");

    BasicDistanceReport<Real> r;
    r.per_pair.reserve(p.tables.size());
    bool first = true;
    for (std::size_t xi = 0; xi < p.questions_a.size(); ++xi) {
        for (std::size_t yi = 0; yi < p.questions_b.size(); ++yi) {
            Real s(0);
            for (std::size_t ai = 0; ai < p.answers_a.size(); ++ai) {
                for (std::size_t bi = 0; bi < p.answers_b.size(); ++bi) {
                    s += abs(p.at(xi, yi, ai, bi) - q.at(mx[xi], my[yi], ma[ai], mb[bi]));
                }
            }
            r.per_pair.push_back(s);
            if (first || s > r.value) {
                r.value = s;
                r.argmax_x = p.questions_a[xi];
                r.argmax_y = p.questions_b[yi];
                first = false;
            }
        }
    }
    return r;
}

/// Zero-pads the answer sets to {0, ..., cutoff-1}, keeping ⊥ (if present) last.
template <class Real>
BasicCorrelation<Real> lift_answers(const BasicCorrelation<Real> &p, std::size_t cutoff) {
    auto grow = [cutoff](const std::vector<Answer> &as) {
        std::vector<Answer> out;
        bool bottom = false;
        for (Answer a : as) {
            if (a == kBottom) {
                bottom = true;
            } else if (a < 0 || static_cast<std::size_t>(a) >= cutoff) {
                throw RangeError("lift_answers: cutoff " + std::to_string(cutoff) + " below answer " +
                                 answer_label(a));
            }
        }
        for (std::size_t i = 0; i < cutoff; ++i) out.push_back(static_cast<Answer>(i));
        if (bottom) out.push_back(kBottom);
        return out;
    };
    auto out = BasicCorrelation<Real>::zeros(p.questions_a, p.questions_b, grow(p.answers_a), grow(p.answers_b));
    std::vector<std::size_t> ia, ib;
    for (Answer a : p.answers_a) ia.push_back(*out.answer_index_a(a));
    for (Answer b : p.answers_b) ib.push_back(*out.answer_index_b(b));
    for (std::size_t xi = 0; xi < p.questions_a.size(); ++xi)
        for (std::size_t yi = 0; yi < p.questions_b.size(); ++yi)
            for (std::size_t ai = 0; ai < ia.size(); ++ai)
                for (std::size_t bi = 0; bi < ib.size(); ++bi) out.at(xi, yi, ia[ai], ib[bi]) = p.at(xi, yi, ai, bi);
    return out;
}

/// Keeps only the listed answers (in the given order); other entries are dropped.
template <class Real>
BasicCorrelation<Real> restrict_answers(const BasicCorrelation<Real> &p, std::vector<Answer> as,
                                        std::vector<Answer> bs) {
    std::vector<std::size_t> ia, ib;
    for (Answer a : as) {
        auto i = p.answer_index_a(a);
        if (!i) throw RangeError("restrict_answers: unknown answer " + answer_label(a));
        ia.push_back(*i);
    }
    for (Answer b : bs) {
        auto i = p.answer_index_b(b);
        if (!i) throw RangeError("restrict_answers: unknown answer " + answer_label(b));
        ib.push_back(*i);
    }
    auto out = BasicCorrelation<Real>::zeros(p.questions_a, p.questions_b, std::move(as), std::move(bs));
    for (std::size_t xi = 0; xi < p.questions_a.size(); ++xi)
        for (std::size_t yi = 0; yi < p.questions_b.size(); ++yi)
            for (std::size_t ai = 0; ai < ia.size(); ++ai)
                for (std::size_t bi = 0; bi < ib.size(); ++bi) out.at(xi, yi, ai, bi) = p.at(xi, yi, ia[ai], ib[bi]);
    return out;
}

/// Extends to the target question lists: a party asked a question outside its
/// original set answers ⊥ with probability one. Both answer sets must contain ⊥
/// and the target lists must contain the original questions.
template <class Real>
BasicCorrelation<Real> lift_questions(const BasicCorrelation<Real> &p, std::vector<Question> xs,
                                      std::vector<Question> ys) {
    const auto bot_a = p.answer_index_a(kBottom);
    const auto bot_b = p.answer_index_b(kBottom);
    if (!bot_a || !bot_b) throw ValidationError("lift_questions: both answer sets must contain ⊥");
    for (const auto &x : p.questions_a) {
        if (std::find(xs.begin(), xs.end(), x) == xs.end()) {
            throw ValidationError("lift_questions: target set misses question " + x.label());
        }
    }
    for (const auto &y : p.questions_b) {
        if (std::find(ys.begin(), ys.end(), y) == ys.end()) {
            throw ValidationError("lift_questions: target set misses question " + y.label());
        }
    }
    const std::size_t na = p.answers_a.size(), nb = p.answers_b.size();
    auto out = BasicCorrelation<Real>::zeros(std::move(xs), std::move(ys), p.answers_a, p.answers_b);
    for (std::size_t xi = 0; xi < out.questions_a.size(); ++xi) {
        const auto sx = p.index_a(out.questions_a[xi]);
        for (std::size_t yi = 0; yi < out.questions_b.size(); ++yi) {
            const auto sy = p.index_b(out.questions_b[yi]);
            auto &t = out.table(xi, yi);
            if (sx && sy) {
                t = p.table(*sx, *sy);
            } else if (sx) {
                for (std::size_t ai = 0; ai < na; ++ai) {
                    Real s(0);
                    for (std::size_t bi = 0; bi < nb; ++bi) s += p.at(*sx, 0, ai, bi);
                    t[ai * nb + *bot_b] = s;
                }
            } else if (sy) {
                for (std::size_t bi = 0; bi < nb; ++bi) {
                    Real s(0);
                    for (std::size_t ai = 0; ai < na; ++ai) s += p.at(0, *sy, ai, bi);
                    t[*bot_a * nb + bi] = s;
                }
            } else {
                t[*bot_a * nb + *bot_b] = Real(1);
            }
        }
    }
    return out;
}

/// Merges every integer answer >= N into answer 0 on each side; ⊥ is kept.
Correlation coarse_grain(const Correlation &p, std::size_t N);

/// Correlation of the ideal strategy described by `layout` on Σ c_i|ii>,
/// computed directly from the rank-one outcome descriptions.
template <class Real>
BasicCorrelation<Real> ideal_correlation(const FamilyLayout<Real> &layout, std::span<const Real> c) {
    using Outcome = RankOneOutcome<Real>;
    struct Entry {
        std::size_t i, j;
        Real value;
    };
    // Real symmetric matrix entries of each outcome operator.
    auto expand = [&](const MeasurementLayout<Real> &m) {
        std::vector<bool> covered(layout.d, false);
        for (const auto &o : m.outcomes) {
            if (o.kind != Outcome::Kind::kVector) continue;
            for (const auto &e : o.entries) covered[e.first] = true;
        }
        std::vector<std::vector<Entry>> ops;
        for (const auto &o : m.outcomes) {
            std::vector<Entry> op;
            if (o.kind == Outcome::Kind::kVector) {
                for (const auto &[i, ui] : o.entries)
                    for (const auto &[j, uj] : o.entries) op.push_back({i, j, ui * uj});
            } else if (o.kind == Outcome::Kind::kComplement) {
                for (std::size_t i = 0; i < layout.d; ++i)
                    if (!covered[i]) op.push_back({i, i, Real(1)});
            }
            ops.push_back(std::move(op));
        }
        return ops;
    };
    std::vector<std::vector<std::vector<Entry>>> alice, bob;
    std::vector<Question> xs, ys;
    for (const auto &m : layout.alice) {
        alice.push_back(expand(m));
        xs.push_back(m.question);
    }
    for (const auto &m : layout.bob) {
        bob.push_back(expand(m));
        ys.push_back(m.question);
    }
    auto out = BasicCorrelation<Real>::zeros(xs, ys, layout.answers_a, layout.answers_b);
    // <ψ| A ⊗ B |ψ> = Σ_{ij} c_i c_j A_ij B_ij for real symmetric A, B.
    std::vector<Real> dense(layout.d * layout.d, Real(0));
    for (std::size_t yi = 0; yi < bob.size(); ++yi) {
        for (std::size_t bi = 0; bi < bob[yi].size(); ++bi) {
            for (const auto &e : bob[yi][bi]) dense[e.i * layout.d + e.j] = e.value;
            for (std::size_t xi = 0; xi < alice.size(); ++xi) {
                for (std::size_t ai = 0; ai < alice[xi].size(); ++ai) {
                    Real s(0);
                    for (const auto &e : alice[xi][ai]) s += c[e.i] * c[e.j] * e.value * dense[e.i * layout.d + e.j];
                    out.at(xi, yi, ai, bi) = s;
                }
            }
            for (const auto &e : bob[yi][bi]) dense[e.i * layout.d + e.j] = Real(0);
        }
    }
    return out;
}

/// Question lists of the many-questions family for local dimension d, in builder order.
std::pair<std::vector<Question>, std::vector<Question>> many_questions_question_sets(std::size_t d);

/// Evaluates `strategy` (many-questions labels, d = family_N) and lifts it to the
/// question sets of dimension target_N.
Correlation lift_questions(const Strategy &strategy, std::size_t family_N, std::size_t target_N);

/// Finite proxy for the separating correlation together with a bound on its
/// distance to the limit.
struct SeparatingProxy {
    Family family = Family::kManyAnswers;
    std::size_t cutoff = 0;
    Correlation correlation;
    double tail_bound = 0.0;
};

/// Throws unless the family has a separating correlation and K has its parity.
void check_separating_cutoff(Family family, std::size_t K);

/// Analytic bound on |p̂_K - p_∞|_corr: 3 (K^-16 + K^-15 / 15).
double separating_tail_bound(std::size_t K);

/// p̂ at cutoff K (odd for many-answers, even for many-questions).
SeparatingProxy p_star_infinity(Family family, std::size_t K, const ResourceLimits &limits = {});
/// Smallest admissible cutoff whose tail bound is below `tolerance`; throws
/// ResourceError when that cutoff exceeds the dimension cap.
std::size_t cutoff_for_tolerance(Family family, double tolerance, const ResourceLimits &limits = {});

/// |lift(p̂_N) - p̂_K|_corr evaluated in extended precision from the ideal
/// layouts. Lifts pad answers (many-answers) or questions (many-questions).
double separating_distance(Family family, std::size_t N, std::size_t K);

/// Result of a structural verification.
struct VerifyReport {
    double max_residual = 0.0;
    /// Human-readable location of the largest residual.
    std::string location;
    std::size_t checks = 0;
    double tol = 0.0;

    bool passed() const {
        return max_residual <= tol;
    }
};

VerifyReport verify_many_answers(const Correlation &p, const SchmidtState &state, double tol = 1e-10);
VerifyReport verify_many_questions(const Correlation &p, const SchmidtState &state, double tol = 1e-10);

/// Where a tilted-CHSH block sits inside a larger correlation.
struct BlockQuestions {
    Question x0, x1, y0, y1;
    /// Answers relabeled +1 / -1.
    Answer a_plus = 0, a_minus = 1, b_plus = 0, b_minus = 1;
};

/// Questions and answers of block m of an ideal strategy of the given family.
BlockQuestions block_questions(Family family, std::size_t m, bool primed);

/// α<A_0> + <A_0B_0> + <A_0B_1> + <A_1B_0> - <A_1B_1>, with correlators taken over
/// the block answers and <A_0> over the full marginal of x0 (Bob's question y0).
double bell_value(const Correlation &p, const BlockParams &block, const BlockQuestions &q);

/// Quantum maximum √(8 + 2α²) scaled by the block mass.
double bell_target(const BlockParams &block);
/// Largest value over the 16 deterministic local assignments, scaled by the block mass.
double bell_classical_max(const BlockParams &block);

std::string correlation_to_json(const Correlation &p);
Correlation correlation_from_json(const std::string &text);
/// Columns x,y,a,b,p; one row per entry, 17 significant digits.
std::string correlation_to_csv(const Correlation &p);
Correlation correlation_from_csv(const std::string &text);

}  // namespace qsep

#endif
