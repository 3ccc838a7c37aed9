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


#ifndef QSEP_EXPERIMENTS_HPP
#define QSEP_EXPERIMENTS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qsep/linalg.hpp"
#include "qsep/types.hpp"

namespace qsep {

/// Library version embedded in every report.
const char *version();

struct ExperimentTolerances {
    /// Expected log-log slope and half-width of its acceptance window.
    double slope_center = -16.0;
    double slope_window = 0.5;
    /// Lower bound on the fitted robustness exponent.
    double min_slope = 0.2;
    /// Extraction error allowed on unperturbed cells.
    double exact = 1e-8;
    /// Constant multiplying the extraction budget in the witness threshold test.
    double budget_scale = 1.0;
};

struct ExperimentConfig {
    /// "convergence", "robustness" or "witness".
    std::string experiment;
    Family family = Family::kManyAnswers;
    /// Truncation sizes (convergence) or ranks N' (witness).
    std::vector<std::size_t> N;
    /// Local dimensions (robustness).
    std::vector<std::size_t> d;
    /// Perturbation strengths (robustness).
    std::vector<double> eps;
    std::size_t trials = 5;
    std::uint64_t seed = 0;
    /// Cutoff of the limit proxy; 0 selects 31 (many-answers) or 32 (many-questions).
    std::size_t cutoff = 0;
    ExperimentTolerances tol;
    /// Report destination; not part of the hash.
    std::string output;
    std::size_t max_dim = ResourceLimits{}.max_dim;

    std::size_t effective_cutoff() const;
    ResourceLimits limits() const {
        return {max_dim};
    }
};

/// Fills unset fields with the defaults of cfg.experiment and checks parities.
ExperimentConfig config_from_json(const std::string &text);
/// Canonical form: sorted keys, every field present, output omitted.
std::string config_to_json(const ExperimentConfig &cfg);
/// 64-bit FNV-1a of the canonical form, as 16 hex digits.
std::string config_hash(const ExperimentConfig &cfg);

/// Least-squares slope of log y against log x. Requires two distinct x values
/// and positive data.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct ConvergenceRow {
    std::size_t N = 0;
    double distance = 0.0;
    /// alpha · N^-16.
    double bound = 0.0;
    bool within = false;
};

struct ConvergenceReport {
    Family family = Family::kManyAnswers;
    std::size_t cutoff = 0;
    double tail_bound = 0.0;
    /// Fitted at the first N.
    double alpha = 0.0;
    std::optional<double> slope;
    bool slope_ok = true;
    bool bounds_ok = true;
    std::vector<ConvergenceRow> rows;

    bool passed() const {
        return slope_ok && bounds_ok;
    }
};

struct RobustnessRow {
    Family family = Family::kManyAnswers;
    std::size_t d = 0;
    double eps = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    /// Correlation distance between perturbed and ideal strategies.
    double delta = 0.0;
    std::array<double, 4> yn{};
    double yn_overall = 0.0;
    double error = 0.0;
    double output_norm = 0.0;
};

/// Envelope E <= C d³ δ^{1/4} and regression of log E on log δ.
struct RobustnessFit {
    /// Smallest C that places every perturbed row inside the envelope.
    double C = 0.0;
    std::optional<double> slope;
    std::size_t points = 0;
    bool exact_ok = true;
    bool slope_ok = true;
};

RobustnessFit fit_robustness(std::span<const RobustnessRow> rows, const ExperimentTolerances &tol);

struct RobustnessReport {
    std::vector<RobustnessRow> rows;
    RobustnessFit fit;

    bool passed() const {
        return fit.exact_ok && fit.slope_ok;
    }
};

struct WitnessRow {
    std::size_t rank = 0;
    /// Distance of the rank-N' truncation to the limit proxy plus the proxy's tail bound.
    double delta = 0.0;
    /// Odd (even) truncation closest above δ^{-1/16}.
    std::size_t n_star = 0;
    /// Distance from Ψ_{N*} to the rank-N' vectors.
    double low_rank = 0.0;
    /// Schmidt coefficient c_{N'} of Ψ_{N*}, or 0 when N* <= N'.
    double lower_bound = 0.0;
    bool lower_bound_ok = false;
    /// δ^{-1/32}.
    double threshold = 0.0;
    /// N*³ (N*^-16 alpha + δ)^{1/4} scaled by tol.budget_scale.
    double budget = 0.0;
    /// N' >= threshold, or the low-rank distance exceeds the budget.
    bool threshold_ok = false;
};

struct WitnessReport {
    Family family = Family::kManyAnswers;
    std::size_t cutoff = 0;
    double tail_bound = 0.0;
    std::vector<WitnessRow> rows;
    bool monotone = true;
    std::optional<double> slope;
    bool slope_ok = true;

    bool passed() const;
};

ConvergenceReport run_convergence(const ExperimentConfig &cfg);
RobustnessReport run_robustness(const ExperimentConfig &cfg);
WitnessReport run_witness(const ExperimentConfig &cfg);

struct ExperimentReport {
    ExperimentConfig config;
    std::string config_hash;
    std::string version;
    std::variant<ConvergenceReport, RobustnessReport, WitnessReport> result;

    bool passed() const;
};

/// Dispatches on cfg.experiment.
ExperimentReport run_experiment(const ExperimentConfig &cfg);

std::string report_to_json(const ExperimentReport &report);
/// One row per cell with a commented header carrying hash, version and fit.
std::string report_to_csv(const ExperimentReport &report);

/// Warning text when `existing` (a previous JSON or CSV report) was produced
/// from a different configuration; nullopt when the hashes agree or none is found.
std::optional<std::string> hash_mismatch(const std::string &existing, const ExperimentReport &report);

}  // namespace qsep

#endif
