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

#ifndef QSEP_RANDOM_HPP
#define QSEP_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "qsep/linalg.hpp"

namespace qsep {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a base seed and a cell key.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> key);

/// Bit pattern of a double, for use in seed keys.
std::uint64_t double_bits(double x);

/// Vector of i.i.d. standard complex Gaussians scaled to unit norm.
CVector random_unit_vector(Eigen::Index dim, Rng &rng);
/// Hermitian matrix with Gaussian entries, scaled to unit operator norm.
CMatrix random_hermitian(Eigen::Index dim, Rng &rng);
/// Haar-random unitary (QR of a complex Gaussian matrix with phase fix).
CMatrix random_unitary(Eigen::Index dim, Rng &rng);
/// exp(i·t·H) for Hermitian H.
CMatrix unitary_exp(const CMatrix &hermitian, double t);

}  // namespace qsep

#endif
