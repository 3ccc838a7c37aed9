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


#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "qsep/states.hpp"

namespace qsep {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(MakeState, Symmetric) {
    const double raw[] = {1, 1};
    const auto s = make_state(raw);
    EXPECT_NEAR(s[0], 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s[1], 1 / std::sqrt(2.0), 1e-15);
}

TEST(MakeState, ThreeFourFive) {
    const double raw[] = {3, 4};
    const auto s = make_state(raw);
    EXPECT_NEAR(s[0], 0.6, 1e-15);
    EXPECT_NEAR(s[1], 0.8, 1e-15);
}

TEST(MakeState, KeepsIndexOrder) {
    const double raw[] = {1, 5, 2};
    const auto s = make_state(raw);
    EXPECT_LT(s[0], s[2]);
    EXPECT_LT(s[2], s[1]);
}

TEST(MakeState, PowerLawMatchesTruncation) {
    const double raw[] = {1, std::pow(2.0, -8), std::pow(3.0, -8)};
    const auto s = make_state(raw);
    double sq = 0;
    for (double c : s.c()) sq += c * c;
    EXPECT_NEAR(sq, 1.0, 1e-15);
    const auto p = psi_N(3);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(s[i], p[i], 1e-16);
}

TEST(MakeState, RejectsNonpositive) {
    const double zero[] = {1, 0};
    const double negative[] = {1, -0.5};
    EXPECT_THROW(make_state(zero), ValidationError);
    EXPECT_THROW(make_state(negative), ValidationError);
    EXPECT_THROW(make_state(std::vector<double>{}), ValidationError);
}

TEST(SchmidtState, RequiresUnitNorm) {
    EXPECT_THROW(SchmidtState({0.5, 0.5}), ValidationError);
    EXPECT_NO_THROW(SchmidtState({0.6, 0.8}));
}

TEST(PsiN, SingleTerm) {
    const auto s = psi_N(1);
    ASSERT_EQ(s.d(), 1u);
    EXPECT_EQ(s[0], 1.0);
}

TEST(PsiN, ThreeTermRatios) {
    const auto s = psi_N(3);
    EXPECT_NEAR(s[1] / s[0], 1.0 / 256, 1e-16);
    EXPECT_NEAR(s[2] / s[0], 1.0 / 6561, 1e-16);
}

TEST(PsiN, NormalizedAndStrictlyDecreasing) {
    for (std::size_t N = 1; N <= 33; ++N) {
        const auto s = psi_N(N);
        double sq = 0;
        for (std::size_t i = 0; i < N; ++i) {
            sq += s[i] * s[i];
            EXPECT_GT(s[i], 0.0);
            if (i > 0) EXPECT_LT(s[i], s[i - 1]);
        }
        EXPECT_NEAR(sq, 1.0, 1e-14) << "N=" << N;
    }
}

TEST(PsiN, NormalizationAgainstHarmonicNumber) {
    // c_0 = 1 / sqrt(H_N^{(16)}).
    for (std::size_t N : {3u, 9u, 21u}) {
        EXPECT_NEAR(psi_N(N)[0], 1 / std::sqrt(harmonic(N, 16)), 1e-15);
    }
}

TEST(PsiN, PaddedDifferenceFollowsTailForm) {
    // Ψ_N and Ψ_M (M > N) are both normalizations of the same prefix, so
    // <Ψ_N|Ψ_M> = sqrt(1 - t) with t the mass of Ψ_M beyond index N.
    const std::size_t M = 31;
    const auto big = psi_N(M);
    std::vector<double> x, y;
    for (std::size_t N = 3; N <= 21; N += 2) {
        const auto small = psi_N(N);
        double diff2 = 0, t = 0;
        for (std::size_t i = 0; i < M; ++i) {
            const double a = i < N ? small[i] : 0.0;
            diff2 += (a - big[i]) * (a - big[i]);
            if (i >= N) t += big[i] * big[i];
        }
        const double closed = std::sqrt(t) * std::sqrt(2 / (1 + std::sqrt(1 - t)));
        EXPECT_NEAR(std::sqrt(diff2) / closed, 1.0, 1e-6) << "N=" << N;
        x.push_back(static_cast<double>(N));
        y.push_back(std::sqrt(diff2));
    }
    // Local slope of the tail norm is -7.5 N / (N + 1): between -7.5 and -5.6 on this grid.
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double slope = std::log(y[i] / y[i - 1]) / std::log(x[i] / x[i - 1]);
        EXPECT_LT(slope, -5.5);
        EXPECT_GT(slope, -7.6);
    }
}

TEST(Harmonic, Examples) {
    EXPECT_EQ(harmonic(1, 16), 1.0);
    EXPECT_DOUBLE_EQ(harmonic(2, 2), 1.25);
    EXPECT_DOUBLE_EQ(harmonic(3, 16), 1 + std::pow(2.0, -16) + std::pow(3.0, -16));
}

TEST(BlockParams, MaximallyEntangledBlock) {
    const double raw[] = {1, 1};
    const auto b = block_params(make_state(raw), 0, false);
    EXPECT_NEAR(b.theta, kPi / 4, 1e-15);
    EXPECT_NEAR(b.mu, kPi / 4, 1e-15);
    EXPECT_NEAR(b.alpha, 0.0, 1e-12);
    EXPECT_NEAR(b.mass, 1.0, 1e-15);
}

TEST(BlockParams, ThreeFourFive) {
    const double raw[] = {3, 4};
    const auto b = block_params(make_state(raw), 0, false);
    EXPECT_NEAR(b.theta, std::atan(4.0 / 3.0), 1e-15);
    EXPECT_NEAR(b.theta, 0.9273, 1e-4);
}

TEST(BlockParams, PrimedBlockUsesShiftedPair) {
    const double raw[] = {1, 2, 3};
    const auto s = make_state(raw);
    const auto b = block_params(s, 0, true);
    EXPECT_EQ(b.lo(), 1u);
    EXPECT_NEAR(b.theta, std::atan(1.5), 1e-15);
    EXPECT_NEAR(b.mass, s[1] * s[1] + s[2] * s[2], 1e-15);
}

TEST(BlockParams, OutOfRange) {
    const auto s = psi_N(4);
    EXPECT_NO_THROW(block_params(s, 1, false));
    EXPECT_THROW(block_params(s, 2, false), RangeError);
    EXPECT_NO_THROW(block_params(s, 0, true));
    EXPECT_THROW(block_params(s, 1, true), RangeError);
}

TEST(BlockParams, AngleRelationsProperty) {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const double theta = testgen::uniform_real(rng, 1e-3, kPi / 2 - 1e-3);
        const auto b = block_params_from_theta(theta);
        EXPECT_GT(b.theta, 0.0);
        EXPECT_LT(b.theta, kPi / 2);
        EXPECT_GT(b.mu, 0.0);
        EXPECT_LT(b.mu, kPi / 2);
        EXPECT_NEAR(b.mu, std::atan(std::sin(2 * theta)), 1e-12);
        const double t = std::tan(2 * theta);
        EXPECT_NEAR(std::abs(b.alpha), 2 / std::sqrt(1 + 2 * t * t), 1e-12) << "theta " << theta;
        EXPECT_EQ(b.alpha >= 0, theta <= kPi / 4 + 1e-15);
        const double a2 = b.alpha * b.alpha;
        EXPECT_NEAR(std::sin(2 * theta), std::sqrt((4 - a2) / (4 + a2)), 1e-12);
    }
}

TEST(BlockParams, RoundTripOnRandomStates) {
    Rng rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = testgen::uniform_size(rng, 2, 9);
        const auto s = testgen::random_schmidt(d, rng);
        for (std::size_t m = 0; 2 * m + 1 < d; ++m) {
            const auto b = block_params(s, m, false);
            EXPECT_NEAR(b.theta, std::atan(s[2 * m + 1] / s[2 * m]), 1e-14);
            const double a2 = b.alpha * b.alpha;
            EXPECT_NEAR(std::sin(2 * b.theta), std::sqrt((4 - a2) / (4 + a2)), 1e-12);
        }
    }
}

TEST(BlockCounts, ByParity) {
    EXPECT_EQ(unprimed_block_count(3), 1u);
    EXPECT_EQ(primed_block_count(3), 1u);
    EXPECT_EQ(unprimed_block_count(4), 2u);
    EXPECT_EQ(primed_block_count(4), 1u);
}

TEST(ConvergenceParams, ScalesAsInversePower) {
    const auto p = convergence_params(3, 2.0);
    EXPECT_EQ(p.N, 3u);
    EXPECT_DOUBLE_EQ(p.epsilonN, 2.0 * std::pow(3.0, -16));
}

}  // namespace
}  // namespace qsep
