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
#include "oracles.hpp"
#include "qsep/linalg.hpp"
#include "qsep/states.hpp"

namespace qsep {
namespace {

CMatrix pauli_z() {
    CMatrix z = CMatrix::Zero(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    return z;
}

TEST(Tensor, IdentityTimesIdentity) {
    const CMatrix i4 = tensor(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2));
    EXPECT_TRUE(i4.isApprox(CMatrix::Identity(4, 4)));
}

TEST(Tensor, PauliZSquared) {
    const CMatrix zz = tensor(pauli_z(), pauli_z());
    CMatrix expected = CMatrix::Zero(4, 4);
    expected.diagonal() << 1, -1, -1, 1;
    EXPECT_LE((zz - expected).norm(), 1e-15);
}

TEST(Tensor, ProductOfProjectorsIsProjector) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto da = static_cast<Eigen::Index>(testgen::uniform_size(rng, 2, 5));
        const auto db = static_cast<Eigen::Index>(testgen::uniform_size(rng, 2, 5));
        const CMatrix p = testgen::random_projector(da, 1, rng);
        const CMatrix q = testgen::random_projector(db, 1, rng);
        const CMatrix pq = tensor(p, q);
        EXPECT_LE((pq * pq - pq).norm(), 1e-12) << "trial " << trial;
        EXPECT_TRUE(is_projector(pq));
    }
}

TEST(Tensor, Associative) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const CMatrix a = random_unitary(static_cast<Eigen::Index>(testgen::uniform_size(rng, 1, 3)), rng);
        const CMatrix b = random_hermitian(static_cast<Eigen::Index>(testgen::uniform_size(rng, 1, 3)), rng);
        const CMatrix c = random_unitary(static_cast<Eigen::Index>(testgen::uniform_size(rng, 1, 3)), rng);
        EXPECT_LE((tensor(tensor(a, b), c) - tensor(a, tensor(b, c))).norm(), 1e-12);
    }
}

TEST(Tensor, DimensionCap) {
    const ResourceLimits limits{8};
    EXPECT_THROW(tensor(CMatrix::Identity(3, 3), CMatrix::Identity(3, 3), limits), ResourceError);
    EXPECT_NO_THROW(tensor(CMatrix::Identity(2, 2), CMatrix::Identity(4, 4), limits));
}

TEST(Predicates, RecognizeStructure) {
    Rng rng(13);
    const CMatrix u = random_unitary(4, rng);
    EXPECT_TRUE(is_unitary(u));
    EXPECT_FALSE(is_unitary(2.0 * u));
    const CMatrix h = random_hermitian(4, rng);
    EXPECT_TRUE(is_hermitian(h));
    EXPECT_NEAR(operator_norm(h), 1.0, 1e-12);
    EXPECT_FALSE(is_projector(h));
    EXPECT_TRUE(is_psd(h * h));
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_FALSE(all_finite(bad));
}

TEST(Schmidt, BellPair) {
    CVector v = CVector::Zero(4);
    v(0) = v(3) = 1 / std::sqrt(2.0);
    const auto s = schmidt(PureState({2, 2}, v));
    ASSERT_EQ(s.rank(), 2u);
    EXPECT_NEAR(s.coefficients(0), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s.coefficients(1), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Schmidt, ProductState) {
    CVector v = CVector::Zero(4);
    v(1) = 1;  // |01>
    const auto s = schmidt(PureState({2, 2}, v));
    EXPECT_EQ(s.rank(), 1u);
    EXPECT_NEAR(s.coefficients(0), 1.0, 1e-15);
}

TEST(Schmidt, TruncatedPowerLawState) {
    const auto s = schmidt(psi_N(3).pure_state());
    const double raw[3] = {1.0, std::pow(2.0, -8), std::pow(3.0, -8)};
    const double norm = std::sqrt(raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]);
    ASSERT_EQ(s.rank(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.coefficients(i), raw[i] / norm, 1e-15);
}

TEST(Schmidt, ReconstructionProperty) {
    Rng rng(14);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t da = testgen::uniform_size(rng, 1, 6), db = testgen::uniform_size(rng, 1, 6);
        const PureState psi = testgen::random_state(da, db, rng);
        const auto s = schmidt(psi);
        for (Eigen::Index i = 1; i < s.coefficients.size(); ++i) {
            EXPECT_LE(s.coefficients(i), s.coefficients(i - 1));
        }
        EXPECT_NEAR(s.coefficients.squaredNorm(), 1.0, 1e-10);
        EXPECT_LE((s.reconstruct() - psi.amplitudes()).norm(), 1e-10) << "trial " << trial;
        EXPECT_TRUE(is_unitary(s.left.adjoint() * s.left));
    }
}

TEST(Schmidt, ThreePartyCut) {
    Rng rng(15);
    const CVector amp = random_unit_vector(2 * 3 * 2, rng);
    const PureState psi({2, 3, 2}, amp);
    const std::size_t left[] = {0, 2};
    const auto s = schmidt(psi, left);
    EXPECT_LE(s.rank(), 3u);
    EXPECT_NEAR(s.coefficients.squaredNorm(), 1.0, 1e-12);
}

TEST(Schmidt, RejectsUnnormalized) {
    EXPECT_THROW(PureState({2, 2}, CVector::Ones(4)), ValidationError);
}

TEST(LowRankDistance, RankOneTarget) {
    const double c[] = {1.0};
    EXPECT_EQ(low_rank_distance(SchmidtSpectrum::from_coefficients(c), 1), 0.0);
}

TEST(LowRankDistance, BellPairRankOne) {
    const double c[] = {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    const double value = low_rank_distance(SchmidtSpectrum::from_coefficients(c), 1);
    EXPECT_NEAR(value, std::sqrt(2 - std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(value, 0.7654, 1e-4);
    Rng rng(16);
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = m(1, 1) = 1 / std::sqrt(2.0);
    EXPECT_NEAR(oracle::rank_r_distance(m, 1, rng), value, 1e-6);
}

TEST(LowRankDistance, PowerLawStateMatchesOracle) {
    const auto psi = psi_N(9);
    Rng rng(17);
    const double value = low_rank_distance(psi.spectrum(), 4);
    EXPECT_NEAR(oracle::rank_r_distance(psi.pure_state().as_matrix(), 4, rng), value, 1e-6);
}

TEST(LowRankDistance, RandomInstancesMatchOracle) {
    Rng rng(18);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t da = testgen::uniform_size(rng, 2, 9), db = testgen::uniform_size(rng, 2, 9);
        const PureState psi = testgen::random_state(da, db, rng);
        const std::size_t r = testgen::uniform_size(rng, 1, std::min(da, db));
        EXPECT_NEAR(oracle::rank_r_distance(psi.as_matrix(), r, rng), low_rank_distance(schmidt(psi), r), 1e-6)
            << "trial " << trial << " dims " << da << "x" << db << " r=" << r;
    }
}

TEST(LowRankDistance, MonotoneAndZeroAtRank) {
    Rng rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = testgen::uniform_size(rng, 1, 9);
        const std::size_t rank = testgen::uniform_size(rng, 1, d);
        const auto spec = testgen::random_spectrum(d, rank, rng);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t r = 1; r <= d; ++r) {
            const double v = low_rank_distance(spec, r);
            EXPECT_LE(v, prev);
            if (r >= rank) EXPECT_EQ(v, 0.0);
            prev = v;
        }
    }
}

TEST(LowRankDistance, TailFormKeepsPrecision) {
    // sqrt(2 - 2 sqrt(1 - t)) for tiny t, against the series sqrt(t) (1 + t/8).
    const auto spec = psi_N(31).spectrum();
    double t = 0;
    for (Eigen::Index i = 15; i < spec.coefficients.size(); ++i) t += spec.coefficients(i) * spec.coefficients(i);
    EXPECT_NEAR(low_rank_distance(spec, 15) / (std::sqrt(t) * (1 + t / 8)), 1.0, 1e-12);
}

TEST(LowRankDistance, RejectsZeroRank) {
    const double c[] = {1.0};
    EXPECT_THROW(low_rank_distance(SchmidtSpectrum::from_coefficients(c), 0), ValidationError);
}

TEST(ResourceLimits, ChecksCap) {
    const ResourceLimits limits{100};
    EXPECT_NO_THROW(limits.check(100, "x"));
    EXPECT_THROW(limits.check(101, "x"), ResourceError);
}

}  // namespace
}  // namespace qsep
