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


#include "qsep/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "qsep/correlation.hpp"
#include "qsep/extraction.hpp"
#include "qsep/parallel.hpp"
#include "qsep/random.hpp"
#include "qsep/states.hpp"
#include "qsep/strategy.hpp"

#ifndef QSEP_VERSION
#define QSEP_VERSION "0.0.0"
#endif

namespace qsep {

using nlohmann::json;

const char *version() {
    return QSEP_VERSION;
}

namespace {

const std::set<std::string> kExperiments = {"convergence", "robustness", "witness"};

std::string family_str(Family f) {
    return std::string(family_name(f));
}

std::size_t min_truncation(Family family) {
    return family == Family::kManyQuestions ? 4 : 3;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json optional_json(const std::optional<double> &v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::vector<T> list_or_empty(const json &j, const char *key) {
    if (!j.contains(key)) return {};
    return j.at(key).get<std::vector<T>>();
}

void check_config(const ExperimentConfig &cfg) {
    if (!kExperiments.count(cfg.experiment)) {
        throw ValidationError("unknown experiment '" + cfg.experiment + "'");
    }
    if (cfg.family != Family::kManyAnswers && cfg.family != Family::kManyQuestions) {
        throw ValidationError("experiments need family many_answers or many_questions");
    }
    check_separating_cutoff(cfg.family, cfg.effective_cutoff());
    if (cfg.experiment == "robustness") {
        if (cfg.d.empty()) throw ValidationError("robustness: d list is empty");
        if (cfg.eps.empty()) throw ValidationError("robustness: eps grid is empty");
        if (cfg.trials == 0) throw ValidationError("robustness: trials must be positive");
        for (std::size_t d : cfg.d) {
            if (d < min_truncation(cfg.family)) throw RangeError("robustness: d too small");
            check_separating_cutoff(cfg.family, d);
        }
        for (double e : cfg.eps) {
            if (!(e >= 0.0) || !std::isfinite(e)) throw ValidationError("robustness: eps must be finite and >= 0");
        }
        return;
    }
    if (cfg.N.empty()) throw ValidationError(cfg.experiment + ": N list is empty");
    for (std::size_t n : cfg.N) {
        if (n < min_truncation(cfg.family)) throw RangeError(cfg.experiment + ": N too small");
        check_separating_cutoff(cfg.family, n);
        if (n > cfg.effective_cutoff()) throw RangeError(cfg.experiment + ": N exceeds the cutoff");
    }
}

}  // namespace

std::size_t ExperimentConfig::effective_cutoff() const {
    if (cutoff != 0) return cutoff;
    return family == Family::kManyQuestions ? 32 : 31;
}

ExperimentConfig config_from_json(const std::string &text) {
    return jsonio::guarded("experiment config", [&] {
        const json j = json::parse(text);
        if (!j.is_object()) throw ValidationError("experiment config must be a JSON object");
        static const std::set<std::string> known = {"experiment", "family", "N",      "d",         "eps",    "trials",
                                                    "seed",       "cutoff", "tolerances", "output", "max_dim"};
        for (const auto &item : j.items()) {
            if (!known.count(item.key())) throw ValidationError("unknown config key '" + item.key() + "'");
        }
        ExperimentConfig cfg;
        cfg.experiment = j.at("experiment").get<std::string>();
        cfg.family = parse_family(j.value("family", std::string("many_answers")));
        cfg.N = list_or_empty<std::size_t>(j, "N");
        cfg.d = list_or_empty<std::size_t>(j, "d");
        cfg.eps = list_or_empty<double>(j, "eps");
        cfg.trials = j.value("trials", cfg.trials);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.cutoff = j.value("cutoff", cfg.cutoff);
        cfg.output = j.value("output", std::string());
        cfg.max_dim = j.value("max_dim", cfg.max_dim);
        if (cfg.experiment == "witness") cfg.tol.slope_window = 1.0;
        if (j.contains("tolerances")) {
            const auto &t = j.at("tolerances");
            static const std::set<std::string> tkeys = {"slope_center", "slope_window", "min_slope", "exact",
                                                        "budget_scale"};
            for (const auto &item : t.items()) {
                if (!tkeys.count(item.key())) throw ValidationError("unknown tolerance '" + item.key() + "'");
            }
            cfg.tol.slope_center = t.value("slope_center", cfg.tol.slope_center);
            cfg.tol.slope_window = t.value("slope_window", cfg.tol.slope_window);
            cfg.tol.min_slope = t.value("min_slope", cfg.tol.min_slope);
            cfg.tol.exact = t.value("exact", cfg.tol.exact);
            cfg.tol.budget_scale = t.value("budget_scale", cfg.tol.budget_scale);
        }
        check_config(cfg);
        return cfg;
    });
}

namespace {

json config_json(const ExperimentConfig &cfg) {
    return json{{"experiment", cfg.experiment},
                {"family", family_str(cfg.family)},
                {"N", cfg.N},
                {"d", cfg.d},
                {"eps", cfg.eps},
                {"trials", cfg.trials},
                {"seed", cfg.seed},
                {"cutoff", cfg.effective_cutoff()},
                {"max_dim", cfg.max_dim},
                {"tolerances",
                 {{"slope_center", cfg.tol.slope_center},
                  {"slope_window", cfg.tol.slope_window},
                  {"min_slope", cfg.tol.min_slope},
                  {"exact", cfg.tol.exact},
                  {"budget_scale", cfg.tol.budget_scale}}}};
}

}  // namespace

std::string config_to_json(const ExperimentConfig &cfg) {
    return config_json(cfg).dump();
}

std::string config_hash(const ExperimentConfig &cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("loglog_slope: size mismatch");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("loglog_slope: data must be positive");
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - sx / n;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - sy / n);
    }
    if (!(sxx > 0.0)) throw ValidationError("loglog_slope: need two distinct x values");
    return sxy / sxx;
}

ConvergenceReport run_convergence(const ExperimentConfig &cfg) {
    check_config(cfg);
    const std::size_t K = cfg.effective_cutoff();
    cfg.limits().check(K * K, "convergence proxy");
    ConvergenceReport r;
    r.family = cfg.family;
    r.cutoff = K;
    r.tail_bound = separating_tail_bound(K);
    r.rows.resize(cfg.N.size());
    parallel_for(cfg.N.size(), [&](std::size_t i) {
        r.rows[i].N = cfg.N[i];
        r.rows[i].distance = separating_distance(cfg.family, cfg.N[i], K);
    });
    const double n0 = static_cast<double>(r.rows.front().N);
    r.alpha = r.rows.front().distance * std::pow(n0, 16.0);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        auto &row = r.rows[i];
        row.bound = r.alpha * std::pow(static_cast<double>(row.N), -16.0);
        row.within = i == 0 || row.distance <= row.bound;
        r.bounds_ok = r.bounds_ok && row.within;
    }
    std::set<std::size_t> distinct(cfg.N.begin(), cfg.N.end());
    if (distinct.size() >= 2) {
        std::vector<double> x, y;
        for (const auto &row : r.rows) {
            x.push_back(static_cast<double>(row.N));
            y.push_back(row.distance);
        }
        r.slope = loglog_slope(x, y);
        r.slope_ok = std::abs(*r.slope - cfg.tol.slope_center) <= cfg.tol.slope_window;
    }
    return r;
}

RobustnessFit fit_robustness(std::span<const RobustnessRow> rows, const ExperimentTolerances &tol) {
    RobustnessFit fit;
    std::vector<double> x, y;
    for (const auto &row : rows) {
        if (row.eps == 0.0) {
            fit.exact_ok = fit.exact_ok && row.error <= tol.exact;
            continue;
        }
        const double d3 = std::pow(static_cast<double>(row.d), 3.0);
        if (row.delta > 0.0) {
            fit.C = std::max(fit.C, row.error / (d3 * std::pow(row.delta, 0.25)));
            if (row.error > 0.0) {
                x.push_back(row.delta);
                y.push_back(row.error);
            }
        } else if (row.error > tol.exact) {
            // A positive error with no correlation change fits no finite envelope.
            fit.C = std::numeric_limits<double>::infinity();
        }
    }
    fit.points = x.size();
    if (x.size() >= 2 && std::set<double>(x.begin(), x.end()).size() >= 2) {
        fit.slope = loglog_slope(x, y);
        fit.slope_ok = *fit.slope >= tol.min_slope;
    }
    return fit;
}

RobustnessReport run_robustness(const ExperimentConfig &cfg) {
    check_config(cfg);
    const auto fam = static_cast<std::uint64_t>(cfg.family);
    struct Cell {
        std::size_t d, trial;
        double eps;
    };
    std::vector<Cell> cells;
    for (std::size_t d : cfg.d)
        for (double e : cfg.eps)
            for (std::size_t t = 0; t < cfg.trials; ++t) cells.push_back({d, t, e});
    for (std::size_t d : cfg.d) cfg.limits().check(d * d * d * d, "swap isometry");

    RobustnessReport r;
    r.rows.resize(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const Cell &cell = cells[i];
        Rng state_rng(derive_seed(cfg.seed, {fam, cell.d, cell.trial}));
        std::uniform_real_distribution<double> coeff(0.5, 1.5);
        std::vector<double> raw(cell.d);
        for (auto &c : raw) c = coeff(state_rng);
        const SchmidtState state = make_state(raw);
        const Strategy ideal =
            cfg.family == Family::kManyAnswers ? many_answers_ideal(state) : many_questions_ideal(state);

        auto &row = r.rows[i];
        row.family = cfg.family;
        row.d = cell.d;
        row.eps = cell.eps;
        row.trial = cell.trial;
        row.seed = derive_seed(cfg.seed, {fam, cell.d, double_bits(cell.eps), cell.trial});
        const Strategy noisy = perturb(ideal, cell.eps, row.seed);
        row.delta = distance(evaluate(noisy), evaluate(ideal)).value;
        const ExtractionKit kit = build_kit(noisy, cfg.family, state);
        const ResidualReport yn = yn_residuals(kit, noisy.state, state);
        row.yn = yn.eps;
        row.yn_overall = yn.overall;
        const SwapResult swap = swap_isometry(kit, noisy.state, state, cfg.limits());
        row.error = swap.error;
        row.output_norm = swap.output_norm;
    });
    r.fit = fit_robustness(r.rows, cfg.tol);
    return r;
}

bool WitnessReport::passed() const {
    bool ok = monotone && slope_ok;
    for (const auto &row : rows) ok = ok && row.lower_bound_ok && row.threshold_ok;
    return ok;
}

WitnessReport run_witness(const ExperimentConfig &cfg) {
    check_config(cfg);
    const std::size_t K = cfg.effective_cutoff();
    cfg.limits().check(K * K, "witness proxy");
    WitnessReport r;
    r.family = cfg.family;
    r.cutoff = K;
    r.tail_bound = separating_tail_bound(K);
    r.rows.resize(cfg.N.size());
    parallel_for(cfg.N.size(), [&](std::size_t i) {
        const std::size_t rank = cfg.N[i];
        const Strategy s = truncated_separating_strategy(cfg.family, rank);
        const std::size_t realized = schmidt(s.state).rank();
        if (realized != rank) {
            throw ValidationError("witness: truncation of rank " + std::to_string(rank) + " has Schmidt rank " +
                                  std::to_string(realized));
        }
        r.rows[i].rank = rank;
        r.rows[i].delta = separating_distance(cfg.family, rank, K) + r.tail_bound;
    });

    const double n0 = static_cast<double>(r.rows.front().rank);
    const double alpha = (r.rows.front().delta - r.tail_bound) * std::pow(n0, 16.0);
    const std::size_t n_min = min_truncation(cfg.family);
    for (auto &row : r.rows) {
        const double target = std::pow(row.delta, -1.0 / 16.0);
        std::size_t n = n_min;
        while (static_cast<double>(n) < target && n + 2 <= K) n += 2;
        row.n_star = n;
        const SchmidtState psi = psi_N(n);
        row.low_rank = low_rank_distance(psi.spectrum(), row.rank);
        row.lower_bound = n > row.rank ? psi[row.rank] : 0.0;
        row.lower_bound_ok = row.low_rank >= row.lower_bound * (1.0 - 1e-12);
        row.threshold = std::pow(row.delta, -1.0 / 32.0);
        const double ns = static_cast<double>(n);
        row.budget = cfg.tol.budget_scale * ns * ns * ns * std::pow(alpha * std::pow(ns, -16.0) + row.delta, 0.25);
        row.threshold_ok = static_cast<double>(row.rank) >= row.threshold || row.low_rank > row.budget;
    }

    std::vector<std::pair<std::size_t, double>> sorted;
    for (const auto &row : r.rows) sorted.emplace_back(row.rank, row.delta);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].first > sorted[i - 1].first && !(sorted[i].second < sorted[i - 1].second)) r.monotone = false;
    }
    std::set<std::size_t> distinct(cfg.N.begin(), cfg.N.end());
    if (distinct.size() >= 2) {
        std::vector<double> x, y;
        for (const auto &row : r.rows) {
            x.push_back(static_cast<double>(row.rank));
            y.push_back(row.delta);
        }
        r.slope = loglog_slope(x, y);
        r.slope_ok = std::abs(*r.slope - cfg.tol.slope_center) <= cfg.tol.slope_window;
    }
    return r;
}

bool ExperimentReport::passed() const {
    return std::visit([](const auto &r) { return r.passed(); }, result);
}

ExperimentReport run_experiment(const ExperimentConfig &cfg) {
    check_config(cfg);
    ExperimentReport out{cfg, config_hash(cfg), version(), ConvergenceReport{}};
    if (cfg.experiment == "convergence") {
        out.result = run_convergence(cfg);
    } else if (cfg.experiment == "robustness") {
        out.result = run_robustness(cfg);
    } else {
        out.result = run_witness(cfg);
    }
    return out;
}

namespace {

json result_json(const ConvergenceReport &r) {
    json rows = json::array();
    for (const auto &row : r.rows) {
        rows.push_back({{"N", row.N}, {"distance", row.distance}, {"bound", row.bound}, {"within", row.within}});
    }
    return {{"family", family_str(r.family)},
            {"cutoff", r.cutoff},
            {"tail_bound", r.tail_bound},
            {"alpha", r.alpha},
            {"slope", optional_json(r.slope)},
            {"slope_ok", r.slope_ok},
            {"bounds_ok", r.bounds_ok},
            {"rows", rows}};
}

json result_json(const RobustnessReport &r) {
    json rows = json::array();
    for (const auto &row : r.rows) {
        rows.push_back({{"family", family_str(row.family)},
                        {"d", row.d},
                        {"eps", row.eps},
                        {"trial", row.trial},
                        {"seed", row.seed},
                        {"delta_corr", row.delta},
                        {"yn", row.yn},
                        {"yn_overall", row.yn_overall},
                        {"extraction_error", row.error},
                        {"output_norm", row.output_norm}});
    }
    return {{"C", r.fit.C},
            {"slope", optional_json(r.fit.slope)},
            {"fit_points", r.fit.points},
            {"exact_ok", r.fit.exact_ok},
            {"slope_ok", r.fit.slope_ok},
            {"rows", rows}};
}

json result_json(const WitnessReport &r) {
    json rows = json::array();
    for (const auto &row : r.rows) {
        rows.push_back({{"rank", row.rank},
                        {"delta", row.delta},
                        {"n_star", row.n_star},
                        {"low_rank_distance", row.low_rank},
                        {"lower_bound", row.lower_bound},
                        {"lower_bound_ok", row.lower_bound_ok},
                        {"threshold", row.threshold},
                        {"budget", row.budget},
                        {"threshold_ok", row.threshold_ok}});
    }
    return {{"family", family_str(r.family)},
            {"cutoff", r.cutoff},
            {"tail_bound", r.tail_bound},
            {"monotone", r.monotone},
            {"slope", optional_json(r.slope)},
            {"slope_ok", r.slope_ok},
            {"rows", rows}};
}

std::string slope_text(const std::optional<double> &s) {
    return s ? fmt17(*s) : std::string("undefined");
}

}  // namespace

std::string report_to_json(const ExperimentReport &report) {
    json j{{"format", "qsep.report/1"},
           {"experiment", report.config.experiment},
           {"version", report.version},
           {"config_hash", report.config_hash},
           {"config", config_json(report.config)},
           {"passed", report.passed()},
           {"result", std::visit([](const auto &r) { return result_json(r); }, report.result)}};
    return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport &report) {
    std::string out = "# qsep " + report.version + " experiment=" + report.config.experiment +
                      " config_hash=" + report.config_hash + " passed=" + (report.passed() ? "true" : "false") + "\n";
    auto flag = [](bool b) { return b ? "1" : "0"; };
    if (const auto *c = std::get_if<ConvergenceReport>(&report.result)) {
        out += "# family=" + family_str(c->family) + " cutoff=" + std::to_string(c->cutoff) +
               " alpha=" + fmt17(c->alpha) + " slope=" + slope_text(c->slope) + "\n";
        out += "N,distance,bound,within\n";
        for (const auto &row : c->rows) {
            out += std::to_string(row.N) + "," + fmt17(row.distance) + "," + fmt17(row.bound) + "," +
                   flag(row.within) + "\n";
        }
    } else if (const auto *rb = std::get_if<RobustnessReport>(&report.result)) {
        out += "# C=" + fmt17(rb->fit.C) + " slope=" + slope_text(rb->fit.slope) + "\n";
        out += "family,d,eps,trial,seed,delta,yn1,yn2,yn3,yn4,yn_overall,error,output_norm\n";
        for (const auto &row : rb->rows) {
            out += family_str(row.family) + "," + std::to_string(row.d) + "," + fmt17(row.eps) + "," +
                   std::to_string(row.trial) + "," + std::to_string(row.seed) + "," + fmt17(row.delta);
            for (double e : row.yn) out += "," + fmt17(e);
            out += "," + fmt17(row.yn_overall) + "," + fmt17(row.error) + "," + fmt17(row.output_norm) + "\n";
        }
    } else {
        const auto &w = std::get<WitnessReport>(report.result);
        out += "# family=" + family_str(w.family) + " cutoff=" + std::to_string(w.cutoff) +
               " slope=" + slope_text(w.slope) + " monotone=" + flag(w.monotone) + "\n";
        out += "rank,delta,n_star,low_rank_distance,lower_bound,lower_bound_ok,threshold,budget,threshold_ok\n";
        for (const auto &row : w.rows) {
            out += std::to_string(row.rank) + "," + fmt17(row.delta) + "," + std::to_string(row.n_star) + "," +
                   fmt17(row.low_rank) + "," + fmt17(row.lower_bound) + "," + flag(row.lower_bound_ok) + "," +
                   fmt17(row.threshold) + "," + fmt17(row.budget) + "," + flag(row.threshold_ok) + "\n";
        }
    }
    return out;
}

std::optional<std::string> hash_mismatch(const std::string &existing, const ExperimentReport &report) {
    static const std::regex pattern(R"re(config_hash"?\s*[:=]\s*"?([0-9a-f]{16}))re");
    std::smatch m;
    if (!std::regex_search(existing, m, pattern)) return std::nullopt;
    if (m[1].str() == report.config_hash) return std::nullopt;
    return "existing report was produced from config " + m[1].str() + ", current config is " + report.config_hash;
}

}  // namespace qsep
