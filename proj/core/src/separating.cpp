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

// Extended-precision evaluation of the separating-correlation distances.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qsep/correlation.hpp"

namespace qsep {


namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

template <class Real>
BasicCorrelation<Real> layout_correlation(Family family, std::size_t n) {
    const auto c = psi_N_coefficients<Real>(n);
    const std::span<const Real> cs(c);
    if (family == Family::kManyAnswers) return ideal_correlation(many_answers_layout<Real>(cs), cs);
    return ideal_correlation(many_questions_layout<Real>(cs), cs);
}

}  // namespace

double separating_distance(Family family, std::size_t N, std::size_t K) {
    check_separating_cutoff(family, N);
    check_separating_cutoff(family, K);
    if (N > K) throw RangeError("separating_distance: N must not exceed the cutoff");
    const auto pk = layout_correlation<Quad>(family, K);
    auto pn = layout_correlation<Quad>(family, N);
    if (family == Family::kManyAnswers) {
        pn = lift_answers(pn, K);
    } else {
        pn = lift_questions(pn, pk.questions_a, pk.questions_b);
    }
    return static_cast<double>(distance(pn, pk).value);
}

}  // namespace qsep
