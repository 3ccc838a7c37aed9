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

#include "qsep/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qsep {

SchmidtState::SchmidtState(std::vector<double> c) : c_(std::move(c)) {
    if (c_.empty()) {
        throw ValidationError("SchmidtState: no coefficients");
    }
    double sq = 0.0;
    for (double x : c_) {
        if (!std::isfinite(x) || !(x > 0.0)) {
            throw ValidationError("SchmidtState: every coefficient must be positive and finite");
        }
        sq += x * x;
    }
    if (std::abs(sq - 1.0) > 1e-12) {
        throw ValidationError("SchmidtState: square-sum " + std::to_string(sq) + " is not 1");
    }
}

PureState SchmidtState::pure_state() const {
    const auto d = static_cast<Eigen::Index>(c_.size());
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = c_[static_cast<std::size_t>(i)];
    return PureState::from_coefficients(m);
}

SchmidtSpectrum SchmidtState::spectrum() const {
    return SchmidtSpectrum::from_coefficients(c_);
}

SchmidtState make_state(std::span<const double> c_raw) {
    if (c_raw.empty()) {
        throw ValidationError("make_state: no coefficients");
    }
    double sq = 0.0;
    for (double x : c_raw) {
        if (!std::isfinite(x) || !(x > 0.0)) {
            throw ValidationError("make_state: every coefficient must be positive and finite");
        }
        sq += x * x;
    }
    const double norm = std::sqrt(sq);
    std::vector<double> c(c_raw.begin(), c_raw.end());
    for (double &x : c) x /= norm;
    return SchmidtState(std::move(c));
}

SchmidtState psi_N(std::size_t N) {
    if (N == 0) {
        throw RangeError("psi_N: N must be at least 1");
    }
    return SchmidtState(psi_N_coefficients<double>(N));
}

double harmonic(std::size_t N, double r) {
    if (N == 0 || r < 1.0) {
        throw RangeError("harmonic: requires N >= 1 and r >= 1");
    }
    double sum = 0.0;
    for (std::size_t n = N; n >= 1; --n) sum += std::pow(static_cast<double>(n), -r);
    return sum;
}

BlockParams block_params_from_theta(double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
        throw ValidationError("block_params: theta must lie in (0, pi/2)");
    }
    BlockParams p;
    p.theta = theta;
    const double s = std::sin(2 * theta);
    const double c = std::cos(2 * theta);
    p.mu = std::atan(s);
    // 2/sqrt(1 + 2 tan²2θ) = 2|cos 2θ| / sqrt(cos²2θ + 2 sin²2θ); the signed form
    // stays finite at θ = π/4 and keeps the block maximal beyond it.
    p.alpha = 2.0 * c / std::sqrt(c * c + 2.0 * s * s);
    p.mass = 1.0;
    return p;
}

std::size_t unprimed_block_count(std::size_t d) {
    return d / 2;
}

std::size_t primed_block_count(std::size_t d) {
    return d >= 1 ? (d - 1) / 2 : 0;
}

BlockParams block_params(const SchmidtState &state, std::size_t m, bool primed) {
    const std::size_t lo = primed ? 2 * m + 1 : 2 * m;
    if (lo + 1 >= state.d()) {
        throw RangeError("block_params: block " + std::to_string(m) + (primed ? " (primed)" : "") +
                         " is outside a dimension-" + std::to_string(state.d()) + " state");
    }
    const double a = state[lo];
    const double b = state[lo + 1];
    BlockParams p = block_params_from_theta(std::atan2(b, a));
    p.m = m;
    p.primed = primed;
    p.mass = a * a + b * b;
    return p;
}

ConvergenceParams convergence_params(std::size_t N, double alpha_const) {
    return {N, alpha_const, alpha_const * std::pow(static_cast<double>(N), -16.0)};
}

}  // namespace qsep
