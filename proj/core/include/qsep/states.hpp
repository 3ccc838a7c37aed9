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

#ifndef QSEP_STATES_HPP
#define QSEP_STATES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qsep/linalg.hpp"

namespace qsep {

/// Schmidt coefficients c_i of Σ_i c_i |ii>, in index order.
///
/// Index order is significant: the block structure of every measurement family
/// pairs consecutive indices, so coefficients are never sorted.
class SchmidtState {
   public:
    /// Takes coefficients that already have unit square-sum (within 1e-12).
    explicit SchmidtState(std::vector<double> c);

    std::size_t d() const {
        return c_.size();
    }
    const std::vector<double> &c() const {
        return c_;
    }
    double operator[](std::size_t i) const {
        return c_[i];
    }

    /// Σ_i c_i |i>|i> on C^d ⊗ C^d.
    PureState pure_state() const;
    SchmidtSpectrum spectrum() const;

   private:
    std::vector<double> c_;
};

/// Angles and tilt of one two-level block {lo, lo+1} of a SchmidtState.
struct BlockParams {
    std::size_t m = 0;
    bool primed = false;
    /// arctan(c_hi / c_lo), in (0, π/2).
    double theta = 0.0;
    /// arctan(sin 2θ), in (0, π/2).
    double mu = 0.0;
    /// Tilt of the functional maximally violated by the block. Equals
    /// 2/sqrt(1 + 2 tan²2θ) for θ <= π/4 and carries the sign of cos 2θ.
    double alpha = 0.0;
    /// c_lo² + c_hi².
    double mass = 0.0;

    /// Lower index of the block: 2m, or 2m+1 when primed.
    std::size_t lo() const {
        return primed ? 2 * m + 1 : 2 * m;
    }
};

/// Truncation size and the distance bound alpha_const · N^-16.
struct ConvergenceParams {
    std::size_t N = 0;
    double alpha_const = 0.0;
    double epsilonN = 0.0;
};

/// Normalizes arbitrary positive coefficients to unit square-sum.
SchmidtState make_state(std::span<const double> c_raw);

/// |Ψ_N> with c_i ∝ (i+1)^-8, i < N.
SchmidtState psi_N(std::size_t N);

/// Generalized harmonic number Σ_{n=1}^N n^-r.
double harmonic(std::size_t N, double r);

/// Block parameters of block m (pairing 2m, 2m+1; or 2m+1, 2m+2 when primed).
BlockParams block_params(const SchmidtState &state, std::size_t m, bool primed);
/// Block parameters for a two-level state cos θ|00> + sin θ|11>.
BlockParams block_params_from_theta(double theta);

/// Number of unprimed / primed blocks fully inside a dimension-d state.
std::size_t unprimed_block_count(std::size_t d);
std::size_t primed_block_count(std::size_t d);

ConvergenceParams convergence_params(std::size_t N, double alpha_const);

/// Unit-norm coefficients ∝ (i+1)^-8 for i < N in any floating type that
/// provides sqrt through argument-dependent lookup.
template <class Real>
std::vector<Real> psi_N_coefficients(std::size_t N) {
    using std::sqrt;
    std::vector<Real> c(N);
    Real sq_sum = 0;
    for (std::size_t i = N; i-- > 0;) {
        Real base = Real(1) / Real(i + 1);
        Real b2 = base * base;
        Real b4 = b2 * b2;
        c[i] = b4 * b4;
        sq_sum += c[i] * c[i];
    }
    Real norm = sqrt(sq_sum);
    for (auto &x : c) x /= norm;
    return c;
}

}  // namespace qsep

#endif
