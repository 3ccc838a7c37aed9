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

#include "qsep/correlation.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "qsep/parallel.hpp"

namespace qsep {

namespace {

template <class M>
Correlation evaluate_generic(const PureState &state, const std::vector<Answer> &answers_a,
                             const std::vector<Answer> &answers_b, const std::vector<M> &alice,
                             const std::vector<M> &bob, auto &&ops) {
    if (state.dims().size() != 2) throw ValidationError("evaluate: state must be bipartite");
    const CMatrix coeff = state.as_matrix();
    std::vector<Question> xs, ys;
    for (const auto &m : alice) xs.push_back(m.question);
    for (const auto &m : bob) ys.push_back(m.question);
    auto out = Correlation::zeros(xs, ys, answers_a, answers_b);
    for (const auto &m : alice) {
        for (const auto &op : ops(m)) {
            if (op.rows() != coeff.rows()) throw ValidationError("evaluate: alice operator dimension mismatch");
        }
    }
    for (const auto &m : bob) {
        for (const auto &op : ops(m)) {
            if (op.rows() != coeff.cols()) throw ValidationError("evaluate: bob operator dimension mismatch");
        }
    }
    // <ψ|A ⊗ B|ψ> = Σ_ij (M† A M)_ij B_ij with M the coefficient matrix.
    parallel_for(alice.size(), [&](std::size_t xi) {
        const auto &aops = ops(alice[xi]);
        for (std::size_t ai = 0; ai < aops.size(); ++ai) {
            const CMatrix left = coeff.adjoint() * aops[ai] * coeff;
            for (std::size_t yi = 0; yi < bob.size(); ++yi) {
                const auto &bops = ops(bob[yi]);
                for (std::size_t bi = 0; bi < bops.size(); ++bi) {
                    out.at(xi, yi, ai, bi) = (left.array() * bops[bi].array()).sum().real();
                }
            }
        }
    });
    return out;
}

Correlation tilted_tables(double theta) {
    return evaluate(tilted_chsh_ideal(theta));
}

/// Tracks the largest deviation and where it happened.
class ResidualTracker {
   public:
    explicit ResidualTracker(VerifyReport &report) : report_(report) {}

    void expect(double expected, double actual, const std::function<std::string()> &where) {
        ++report_.checks;
        double r = std::abs(actual - expected);
        if (std::isnan(r)) r = INFINITY;
        if (report_.location.empty() || r > report_.max_residual) {
            report_.max_residual = r;
            report_.location = where();
        }
    }

   private:
    VerifyReport &report_;
};

std::string entry_label(Question x, Question y, Answer a, Answer b) {
    return "p(" + answer_label(a) + "," + answer_label(b) + "|" + x.label() + "," + y.label() + ")";
}

void require_sets(const Correlation &p, const std::vector<Question> &xs, const std::vector<Question> &ys,
                  const std::vector<Answer> &as, const std::vector<Answer> &bs, const char *family) {
    auto same = [](auto a, auto b) {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
    };
    if (!same(p.questions_a, xs) || !same(p.questions_b, ys) || !same(p.answers_a, as) ||
        !same(p.answers_b, bs)) {
        throw ValidationError(std::string("correlation does not carry the ") + family + " question and answer sets");
    }
}

}  // namespace

void check_separating_cutoff(Family family, std::size_t K) {
    if (family == Family::kManyAnswers) {
        if (K % 2 == 0) throw UnsupportedParityError("many-answers cutoff must be odd");
    } else if (family == Family::kManyQuestions) {
        if (K % 2 != 0 || K == 0) throw UnsupportedParityError("many-questions cutoff must be even");
    } else {
        throw ValidationError("separating correlations exist only for the many-answers and many-questions families");
    }
}

double normalization_residual(const Correlation &p) {
    double worst = 0.0;
    for (const auto &t : p.tables) {
        double s = 0.0;
        for (double v : t) {
            if (!std::isfinite(v)) return INFINITY;
            worst = std::max({worst, -v, v - 1.0});
            s += v;
        }
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

void validate(const Correlation &p, double tol) {
    if (p.tables.size() != p.questions_a.size() * p.questions_b.size()) {
        throw ValidationError("correlation has the wrong number of tables");
    }
    for (const auto &t : p.tables) {
        if (t.size() != p.answers_a.size() * p.answers_b.size()) {
            throw ValidationError("correlation table has the wrong number of entries");
        }
    }
    const double r = normalization_residual(p);
    if (!(r <= tol)) {
        throw ValidationError("correlation violates normalization (residual " + std::to_string(r) + ")");
    }
}

Correlation evaluate(const Strategy &strategy) {
    return evaluate_generic(strategy.state, strategy.answers_a, strategy.answers_b, strategy.alice, strategy.bob,
                            [](const Measurement &m) -> const std::vector<CMatrix> & { return m.projectors; });
}

Correlation evaluate(const PovmStrategy &strategy) {
    return evaluate_generic(strategy.state, strategy.answers_a, strategy.answers_b, strategy.alice, strategy.bob,
                            [](const Povm &m) -> const std::vector<CMatrix> & { return m.elements; });
}

Correlation coarse_grain(const Correlation &p, std::size_t N) {
    auto target = [N](const std::vector<Answer> &as, std::vector<Answer> &kept) {
        std::vector<std::size_t> map;
        bool bottom = false;
        for (std::size_t i = 0; i < N; ++i) {
            if (std::find(as.begin(), as.end(), static_cast<Answer>(i)) == as.end()) {
                throw RangeError("coarse_grain: answer set lacks " + std::to_string(i));
            }
            kept.push_back(static_cast<Answer>(i));
        }
        for (Answer a : as) bottom = bottom || a == kBottom;
        if (bottom) kept.push_back(kBottom);
        for (Answer a : as) {
            if (a == kBottom) {
                map.push_back(N);
            } else if (static_cast<std::size_t>(a) < N) {
                map.push_back(static_cast<std::size_t>(a));
            } else {
                map.push_back(0);
            }
        }
        return map;
    };
    std::vector<Answer> as, bs;
    const auto ma = target(p.answers_a, as);
    const auto mb = target(p.answers_b, bs);
    auto out = Correlation::zeros(p.questions_a, p.questions_b, as, bs);
    for (std::size_t xi = 0; xi < p.questions_a.size(); ++xi)
        for (std::size_t yi = 0; yi < p.questions_b.size(); ++yi)
            for (std::size_t ai = 0; ai < ma.size(); ++ai)
                for (std::size_t bi = 0; bi < mb.size(); ++bi) out.at(xi, yi, ma[ai], mb[bi]) += p.at(xi, yi, ai, bi);
    return out;
}

std::pair<std::vector<Question>, std::vector<Question>> many_questions_question_sets(std::size_t d) {
    if (d % 2 != 0 || d == 0) throw UnsupportedParityError("many-questions family requires even d");
    std::vector<Question> xs, ys;
    for (int m = 0; m < static_cast<int>(d / 2); ++m) {
        for (Tag t : {Tag::kZ, Tag::kX, Tag::kXp}) xs.push_back({m, t});
        for (Tag t : {Tag::kZ, Tag::kZp, Tag::kX, Tag::kXp, Tag::kAux}) ys.push_back({m, t});
    }
    return {xs, ys};
}

Correlation lift_questions(const Strategy &strategy, std::size_t family_N, std::size_t target_N) {
    if (target_N < family_N) throw RangeError("lift_questions: target below the strategy's question range");
    if (strategy.dim_a() != family_N) throw ValidationError("lift_questions: strategy dimension differs from family_N");
    auto [xs, ys] = many_questions_question_sets(target_N);
    return lift_questions(evaluate(strategy), std::move(xs), std::move(ys));
}

double separating_tail_bound(std::size_t K) {
    const double k = static_cast<double>(K);
    return 3.0 * (std::pow(k, -16.0) + std::pow(k, -15.0) / 15.0);
}

SeparatingProxy p_star_infinity(Family family, std::size_t K, const ResourceLimits &limits) {
    check_separating_cutoff(family, K);
    limits.check(K * K, "separating correlation proxy");
    SeparatingProxy out;
    out.family = family;
    out.cutoff = K;
    out.correlation = evaluate(truncated_separating_strategy(family, K));
    out.tail_bound = separating_tail_bound(K);
    return out;
}

std::size_t cutoff_for_tolerance(Family family, double tolerance, const ResourceLimits &limits) {
    if (!(tolerance > 0.0)) throw ValidationError("cutoff_for_tolerance: tolerance must be positive");
    std::size_t K = family == Family::kManyQuestions ? 4 : 3;
    check_separating_cutoff(family, K);
    while (!(separating_tail_bound(K) < tolerance)) {
        K += 2;
        if (K * K > limits.max_dim) {
            throw ResourceError("tolerance " + std::to_string(tolerance) + " needs a cutoff beyond the dimension cap");
        }
    }
    limits.check(K * K, "separating correlation proxy");
    return K;
}

VerifyReport verify_many_answers(const Correlation &p, const SchmidtState &state, double tol) {
    const std::size_t d = state.d();
    if (d % 2 == 0) throw UnsupportedParityError("many-answers verification requires odd d");
    std::vector<Answer> answers;
    for (std::size_t i = 0; i < d; ++i) answers.push_back(static_cast<Answer>(i));
    const std::vector<Question> xs = {Question::index(0), Question::index(1), Question::index(2)};
    const std::vector<Question> ys = {Question::index(0), Question::index(1), Question::index(2), Question::index(3)};
    require_sets(p, xs, ys, answers, answers, "many-answers");

    VerifyReport report;
    report.tol = tol;
    ResidualTracker track(report);
    const std::size_t blocks = (d - 1) / 2;
    std::vector<Correlation> tilted(blocks), tilted_primed(blocks);
    std::vector<BlockParams> bp(blocks), bpp(blocks);
    for (std::size_t m = 0; m < blocks; ++m) {
        bp[m] = block_params(state, m, false);
        bpp[m] = block_params(state, m, true);
        tilted[m] = tilted_tables(bp[m].theta);
        tilted_primed[m] = tilted_tables(bpp[m].theta);
    }
    const auto c2 = [&](std::size_t i) { return state[i] * state[i]; };

    auto check_table = [&](Question x, Question y, const std::vector<double> &expected) {
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                const auto aa = static_cast<Answer>(a), bb = static_cast<Answer>(b);
                track.expect(expected[a * d + b], p.p(aa, bb, x, y), [&] { return entry_label(x, y, aa, bb); });
            }
        }
    };

    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            std::vector<double> e(d * d, 0.0);
            for (std::size_t m = 0; m < blocks; ++m) {
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j)
                        e[(2 * m + i) * d + 2 * m + j] = bp[m].mass * tilted[m].at(x, y, i, j);
            }
            e[(d - 1) * d + d - 1] = c2(d - 1);
            check_table(Question::index(x), Question::index(y), e);
        }
    }
    const std::array<std::pair<int, std::size_t>, 2> fx = {{{0, 0}, {2, 1}}};
    const std::array<std::pair<int, std::size_t>, 2> gy = {{{2, 0}, {3, 1}}};
    for (const auto &[x, f] : fx) {
        for (const auto &[y, g] : gy) {
            std::vector<double> e(d * d, 0.0);
            e[0] = c2(0);
            for (std::size_t m = 0; m < blocks; ++m) {
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j)
                        e[(2 * m + 1 + i) * d + 2 * m + 1 + j] = bpp[m].mass * tilted_primed[m].at(f, g, i, j);
            }
            check_table(Question::index(x), Question::index(y), e);
        }
    }
    return report;
}

VerifyReport verify_many_questions(const Correlation &p, const SchmidtState &state, double tol) {
    const std::size_t d = state.d();
    const auto [xs, ys] = many_questions_question_sets(d);
    require_sets(p, xs, ys, {0, 1, 2, kBottom}, {0, 1, kBottom}, "many-questions");

    VerifyReport report;
    report.tol = tol;
    ResidualTracker track(report);
    const auto c2 = [&](std::size_t i) { return state[i] * state[i]; };
    const std::size_t blocks = d / 2;

    auto expect = [&](double e, Answer a, Answer b, Question x, Question y) {
        track.expect(e, p.p(a, b, x, y), [&] { return entry_label(x, y, a, b); });
    };

    for (std::size_t m = 0; m < blocks; ++m) {
        const int mi = static_cast<int>(m);
        const BlockParams bp = block_params(state, m, false);
        const Correlation tilted = tilted_tables(bp.theta);
        for (const auto &[xt, f] : {std::pair{Tag::kZ, 0}, std::pair{Tag::kX, 1}}) {
            for (const auto &[yt, g] : {std::pair{Tag::kZ, 0}, std::pair{Tag::kX, 1}}) {
                const Question x{mi, xt}, y{mi, yt};
                for (Answer a : {0, 1}) {
                    for (Answer b : {0, 1}) {
                        expect(bp.mass * tilted.at(f, g, a, b), a, b, x, y);
                        expect(0.0, 2, b, x, y);
                        expect(0.0, kBottom, b, x, y);
                    }
                    expect(0.0, a, kBottom, x, y);
                }
            }
        }
        if (m + 2 > blocks) continue;

        const BlockParams bpp = block_params(state, m, true);
        const Correlation tilted_p = tilted_tables(bpp.theta);
        for (const auto &[xt, f] : {std::pair{Tag::kZ, 0}, std::pair{Tag::kXp, 1}}) {
            for (const auto &[yt, g] : {std::pair{Tag::kZp, 0}, std::pair{Tag::kXp, 1}}) {
                const Question x{mi, xt}, y{mi, yt};
                for (Answer b : {0, 1}) {
                    expect(0.0, 0, b, x, y);
                    expect(0.0, kBottom, b, x, y);
                    for (Answer a : {1, 2}) expect(bpp.mass * tilted_p.at(f, g, a - 1, b), a, b, x, y);
                }
                for (Answer a : {1, 2}) expect(0.0, a, kBottom, x, y);
            }
        }

        const Question z{mi, Tag::kZ}, z1{mi + 1, Tag::kZ}, aux1{mi + 1, Tag::kAux};
        const double target = c2(2 * m + 2);
        track.expect(target, p.marginal_a(2, z, aux1), [&] { return "p_A(2|" + z.label() + ")"; });
        track.expect(target, p.marginal_a(0, z1, aux1), [&] { return "p_A(0|" + z1.label() + ")"; });
        track.expect(target, p.marginal_b(0, z1, aux1), [&] { return "p_B(0|" + aux1.label() + ")"; });
        expect(target, 2, 0, z, aux1);
        expect(target, 0, 0, z1, aux1);
    }

    for (std::size_t m = 0; m < blocks; ++m) {
        for (std::size_t mp = 0; mp < blocks; ++mp) {
            if (m == mp) continue;
            const Question x{static_cast<int>(m), Tag::kZ}, y{static_cast<int>(mp), Tag::kAux};
            for (Answer a : {0, 1})
                for (Answer b : {0, 1}) expect(0.0, a, b, x, y);
        }
    }
    return report;
}

BlockQuestions block_questions(Family family, std::size_t m, bool primed) {
    const int mi = static_cast<int>(m);
    const auto lo = static_cast<Answer>(primed ? 2 * m + 1 : 2 * m);
    switch (family) {
        case Family::kTiltedChsh:
            if (m != 0 || primed) throw RangeError("tilted-CHSH strategies have a single unprimed block");
            return {Question::index(0), Question::index(1), Question::index(0), Question::index(1), 0, 1, 0, 1};
        case Family::kManyAnswers:
            if (primed) {
                return {Question::index(0), Question::index(2), Question::index(2), Question::index(3),
                        lo, lo + 1, lo, lo + 1};
            }
            return {Question::index(0), Question::index(1), Question::index(0), Question::index(1),
                    lo, lo + 1, lo, lo + 1};
        case Family::kManyQuestions:
            if (primed) return {{mi, Tag::kZ}, {mi, Tag::kXp}, {mi, Tag::kZp}, {mi, Tag::kXp}, 1, 2, 0, 1};
            return {{mi, Tag::kZ}, {mi, Tag::kX}, {mi, Tag::kZ}, {mi, Tag::kX}, 0, 1, 0, 1};
        default:
            throw ValidationError("block_questions: family has no block structure");
    }
}

double bell_value(const Correlation &p, const BlockParams &block, const BlockQuestions &q) {
    auto corr = [&](Question x, Question y) {
        return p.p(q.a_plus, q.b_plus, x, y) - p.p(q.a_plus, q.b_minus, x, y) - p.p(q.a_minus, q.b_plus, x, y) +
               p.p(q.a_minus, q.b_minus, x, y);
    };
    const double a0 = p.marginal_a(q.a_plus, q.x0, q.y0) - p.marginal_a(q.a_minus, q.x0, q.y0);
    return block.alpha * a0 + corr(q.x0, q.y0) + corr(q.x0, q.y1) + corr(q.x1, q.y0) - corr(q.x1, q.y1);
}

double bell_target(const BlockParams &block) {
    return std::sqrt(8.0 + 2.0 * block.alpha * block.alpha) * block.mass;
}

double bell_classical_max(const BlockParams &block) {
    double best = -INFINITY;
    for (int bits = 0; bits < 16; ++bits) {
        auto s = [bits](int k) { return (bits >> k) & 1 ? -1.0 : 1.0; };
        const double a0 = s(0), a1 = s(1), b0 = s(2), b1 = s(3);
        best = std::max(best, block.alpha * a0 + a0 * b0 + a0 * b1 + a1 * b0 - a1 * b1);
    }
    return best * block.mass;
}

}  // namespace qsep
