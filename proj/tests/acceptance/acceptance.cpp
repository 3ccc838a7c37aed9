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


// Acceptance harness: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "qsep/correlation.hpp"
#include "qsep/experiments.hpp"
#include "qsep/extraction.hpp"
#include "qsep/strategy.hpp"

namespace qsep::acceptance {
namespace {

constexpr std::uint64_t kSeed = 20261016;
constexpr int kVectorsPerDim = 5;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct IdealCase {
    std::size_t d;
    Family family;
    SchmidtState state;
    Strategy strategy;
};

/// Five random coefficient vectors for each of d = 3, 5, 7 and d = 4, 6, 8.
std::vector<IdealCase> ideal_cases() {
    std::vector<IdealCase> out;
    for (std::size_t d : {3u, 5u, 7u, 4u, 6u, 8u}) {
        const Family f = d % 2 ? Family::kManyAnswers : Family::kManyQuestions;
        for (int k = 0; k < kVectorsPerDim; ++k) {
            Rng rng(derive_seed(kSeed, {1, d, static_cast<std::uint64_t>(k)}));
            SchmidtState s = testgen::random_schmidt(d, rng);
            Strategy st = f == Family::kManyAnswers ? many_answers_ideal(s) : many_questions_ideal(s);
            out.push_back({d, f, std::move(s), std::move(st)});
        }
    }
    return out;
}

Verdict criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (const auto &c : ideal_cases()) {
        const Correlation p = evaluate(c.strategy);
        const VerifyReport r = c.family == Family::kManyAnswers ? verify_many_answers(p, c.state, 1e-10)
                                                                : verify_many_questions(p, c.state, 1e-10);
        worst = std::max(worst, r.max_residual);
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-10 && dt < 10.0, fmt("max residual %.3g (tol 1e-10), %.2f s (limit 10 s)", worst, dt)};
}

Verdict criterion2() {
    double worst_target = 0, worst_classical = -1e300;
    std::size_t blocks = 0;
    for (const auto &c : ideal_cases()) {
        const Correlation p = evaluate(c.strategy);
        auto check = [&](std::size_t m, bool primed) {
            const BlockParams b = block_params(c.state, m, primed);
            const double v = bell_value(p, b, block_questions(c.family, m, primed));
            worst_target = std::max(worst_target, std::abs(v - bell_target(b)));
            // All 16 deterministic assignments on a 2x2 table with the block's functional.
            const BlockQuestions q = block_questions(Family::kTiltedChsh, 0, false);
            for (int mask = 0; mask < 16; ++mask) {
                // Block weight on the assignment, the rest on answer 2 outside the block.
                auto det = Correlation::zeros(testgen::index_questions(2), testgen::index_questions(2),
                                              testgen::index_answers(3), testgen::index_answers(3));
                for (std::size_t x = 0; x < 2; ++x) {
                    for (std::size_t y = 0; y < 2; ++y) {
                        det.at(x, y, (mask >> x) & 1, (mask >> (2 + y)) & 1) = b.mass;
                        det.at(x, y, 2, 2) = 1 - b.mass;
                    }
                }
                const double cv = bell_value(det, b, q);
                worst_classical = std::max(worst_classical, cv - (2 + std::abs(b.alpha)) * b.mass);
            }
            ++blocks;
        };
        for (std::size_t m = 0; m < unprimed_block_count(c.d); ++m) check(m, false);
        const std::size_t primed = c.family == Family::kManyAnswers ? primed_block_count(c.d) : c.d / 2 - 1;
        for (std::size_t m = 0; m < primed; ++m) check(m, true);
    }
    const bool pass = worst_target <= 1e-10 && worst_classical <= 1e-12;
    return {pass, fmt("%zu blocks, max |value - target| %.3g (tol 1e-10), max classical excess %.3g (tol 1e-12)",
                      blocks, worst_target, worst_classical)};
}

Verdict criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_yn = 0, worst_err = 0;
    for (const auto &c : ideal_cases()) {
        const ExtractionKit kit = build_kit(c.strategy, c.family, c.state);
        worst_yn = std::max(worst_yn, yn_residuals(kit, c.strategy.state, c.state).overall);
        worst_err = std::max(worst_err, swap_isometry(kit, c.strategy.state, c.state).error);
    }
    const double dt = seconds_since(t0);
    return {worst_yn <= 1e-8 && worst_err <= 1e-8 && dt < 60.0,
            fmt("max yn %.3g, max extraction error %.3g (tol 1e-8), %.2f s (limit 60 s)", worst_yn, worst_err, dt)};
}

Verdict criterion4() {
    std::vector<RobustnessRow> rows;
    ExperimentTolerances tol;
    for (Family f : {Family::kManyAnswers, Family::kManyQuestions}) {
        ExperimentConfig cfg;
        cfg.experiment = "robustness";
        cfg.family = f;
        cfg.d = f == Family::kManyAnswers ? std::vector<std::size_t>{3, 5} : std::vector<std::size_t>{4, 6};
        cfg.eps = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
        cfg.trials = 5;
        cfg.seed = kSeed;
        tol = cfg.tol;
        const auto r = run_robustness(cfg);
        rows.insert(rows.end(), r.rows.begin(), r.rows.end());
    }
    const RobustnessFit fit = fit_robustness(rows, tol);
    std::size_t outside = 0;
    for (const auto &row : rows) {
        const double envelope = fit.C * std::pow(static_cast<double>(row.d), 3) * std::pow(row.delta, 0.25);
        if (row.eps > 0 && !(row.error <= envelope * (1 + 1e-12))) ++outside;
    }
    const bool pass = std::isfinite(fit.C) && outside == 0 && fit.slope && *fit.slope >= 0.2;
    return {pass, fmt("%zu cells, C = %.4g, cells outside envelope %zu, slope %.3f (min 0.2)", fit.points, fit.C,
                      outside, fit.slope.value_or(NAN))};
}

Verdict criterion5() {
    std::ostringstream detail;
    bool pass = true;
    struct Run {
        Family family;
        std::vector<std::size_t> N;
        std::size_t cutoff;
    };
    std::vector<std::size_t> odd, even;
    for (std::size_t n = 3; n <= 21; n += 2) odd.push_back(n);
    for (std::size_t n = 4; n <= 20; n += 2) even.push_back(n);
    for (const Run &run : {Run{Family::kManyAnswers, odd, 31}, Run{Family::kManyQuestions, even, 32}}) {
        if (run.family == Family::kManyQuestions) detail << "; ";
        ExperimentConfig cfg;
        cfg.experiment = "convergence";
        cfg.family = run.family;
        cfg.N = run.N;
        cfg.cutoff = run.cutoff;
        const ConvergenceReport r = run_convergence(cfg);
        std::size_t outside = 0;
        for (const auto &row : r.rows) outside += !row.within;
        const double slope = r.slope.value_or(NAN);
        const bool ok = outside == 0 && std::abs(slope + 16.0) <= 0.5;
        pass = pass && ok;
        detail << family_name(run.family) << ": alpha " << fmt("%.4g", r.alpha) << ", rows above alpha*N^-16 "
               << outside << "/" << r.rows.size() << ", slope " << fmt("%.3f", slope) << " (window -16 +/- 0.5)";
    }
    return {pass, detail.str()};
}

Verdict criterion6() {
    Rng rng(derive_seed(kSeed, {6}));
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t da = testgen::uniform_size(rng, 2, 9), db = testgen::uniform_size(rng, 2, 9);
        const PureState psi = testgen::random_state(da, db, rng);
        const std::size_t r = testgen::uniform_size(rng, 1, std::min(da, db) - 1);
        const double closed = low_rank_distance(schmidt(psi), r);
        worst = std::max(worst, std::abs(closed - oracle::rank_r_distance(psi.as_matrix(), r, rng)));
    }
    const SchmidtSpectrum spec = psi_N(31).spectrum();
    std::vector<double> ranks, dist;
    for (std::size_t n = 3; n <= 15; n += 2) {
        ranks.push_back(static_cast<double>(n));
        dist.push_back(low_rank_distance(spec, n));
    }
    const double slope = loglog_slope(ranks, dist);
    const bool pass = worst <= 1e-6 && std::abs(slope + 8.0) <= 0.5;
    return {pass, fmt("oracle max deviation %.3g over 20 instances (tol 1e-6); Psi_31 rank-N' slope %.3f over "
                      "N' = 3..15 (window -8 +/- 0.5)",
                      worst, slope)};
}

Verdict criterion7() {
    ExperimentConfig cfg;
    cfg.experiment = "witness";
    cfg.family = Family::kManyAnswers;
    cfg.N = {3, 5, 7, 9};
    cfg.tol.slope_window = 1.0;
    const WitnessReport r = run_witness(cfg);
    std::size_t bad = 0;
    for (const auto &row : r.rows) bad += !(row.lower_bound_ok && row.threshold_ok);
    return {r.passed() && bad == 0, fmt("%zu rows, failing rows %zu, monotone %s, slope %.3f (window -16 +/- 1)",
                                        r.rows.size(), bad, r.monotone ? "yes" : "no", r.slope.value_or(NAN))};
}

Verdict criterion8() {
    std::size_t checks = 0, failures = 0;
    std::ostringstream where;
    auto expect = [&](bool ok, const std::string &what) {
        ++checks;
        if (!ok) {
            if (!failures) where << " first failure: " << what;
            ++failures;
        }
    };
    Rng rng(derive_seed(kSeed, {8}));

    // Measurements: completeness and orthogonality on ideal, perturbed and random strategies.
    std::vector<Strategy> strategies;
    for (const auto &c : ideal_cases()) {
        strategies.push_back(c.strategy);
        strategies.push_back(perturb(c.strategy, 1e-3, derive_seed(kSeed, {8, c.d})));
    }
    for (int k = 0; k < 20; ++k) {
        strategies.push_back(testgen::random_strategy(
            testgen::uniform_size(rng, 1, 5), testgen::uniform_size(rng, 1, 5), testgen::uniform_size(rng, 1, 3),
            testgen::uniform_size(rng, 1, 3), testgen::uniform_size(rng, 1, 4), testgen::uniform_size(rng, 1, 4), rng));
    }
    for (const auto &s : strategies) {
        for (const auto *side : {&s.alice, &s.bob})
            for (const auto &m : *side) expect(m.invariant_residual() <= 1e-10, "measurement " + m.question.label());
        expect(normalization_residual(evaluate(s)) <= 1e-10, "correlation normalization");
    }

    // Distance metric axioms on 100 random triples.
    for (int k = 0; k < 100; ++k) {
        const std::size_t nx = testgen::uniform_size(rng, 1, 3), ny = testgen::uniform_size(rng, 1, 3);
        const std::size_t na = testgen::uniform_size(rng, 1, 4), nb = testgen::uniform_size(rng, 1, 4);
        const auto p = testgen::random_correlation(nx, ny, na, nb, rng);
        const auto q = testgen::random_correlation(nx, ny, na, nb, rng);
        const auto r = testgen::random_correlation(nx, ny, na, nb, rng);
        const double pq = distance(p, q).value;
        expect(distance(p, p).value == 0.0, "identity");
        expect(pq >= 0.0 && pq == distance(q, p).value, "symmetry");
        expect(pq <= distance(p, r).value + distance(r, q).value + 1e-15, "triangle inequality");

        // Lift isometry and coarse-grain contraction on the same pair.
        const std::size_t K = std::max(na, nb) + testgen::uniform_size(rng, 0, 4);
        expect(std::abs(distance(lift_answers(p, K), lift_answers(q, K)).value - pq) <= 1e-15, "lift isometry");
        const std::size_t N = testgen::uniform_size(rng, 1, std::min(na, nb));
        expect(distance(coarse_grain(p, N), coarse_grain(q, N)).value <= pq + 1e-15, "coarse-grain contraction");
    }
    return {failures == 0, fmt("%zu checks, %zu failures", checks, failures) + where.str()};
}

Verdict criterion9() {
    double worst = 0;
    std::size_t fixtures = 0;
    for (std::size_t d : {3u, 4u, 5u, 6u, 7u}) {
        for (std::uint64_t k = 0; k < 2; ++k) {
            const SchmidtState s = psi_N(d);
            const Strategy ideal = d % 2 ? many_answers_ideal(s) : many_questions_ideal(s);
            const Strategy big = embed(ideal, 1 + k, derive_seed(kSeed, {9, d, k}));
            const Correlation reference = evaluate(big);
            worst = std::max(worst, distance(evaluate(povm_reduce(big)), reference).value);
            worst = std::max(worst, distance(reference, evaluate(ideal)).value);
            ++fixtures;
        }
    }
    return {worst <= 1e-10, fmt("%zu embedded fixtures, max distance %.3g (tol 1e-10)", fixtures, worst)};
}

const std::vector<std::function<Verdict()>> &criteria() {
    static const std::vector<std::function<Verdict()>> all{criterion1, criterion2, criterion3,
                                                           criterion4, criterion5, criterion6,
                                                           criterion7, criterion8, criterion9};
    return all;
}

}  // namespace
}  // namespace qsep::acceptance

int main(int argc, char **argv) {
    CLI::App app{"Acceptance checks"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-9); default runs all")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const auto &all = qsep::acceptance::criteria();
    bool ok = true;
    for (int i = 1; i <= static_cast<int>(all.size()); ++i) {
        if (only && i != only) continue;
        qsep::acceptance::Verdict v;
        try {
            v = all[static_cast<std::size_t>(i - 1)]();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << i << ": " << (v.pass ? "PASS" : "FAIL") << " " << v.detail << std::endl;
        ok = ok && v.pass;
    }
    return ok ? 0 : 1;
}
