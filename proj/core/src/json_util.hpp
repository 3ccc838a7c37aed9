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

#ifndef QSEP_JSON_UTIL_HPP
#define QSEP_JSON_UTIL_HPP

// Internal helpers shared by the JSON readers and writers. Not installed.

#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "qsep/errors.hpp"
#include "qsep/linalg.hpp"

namespace qsep::jsonio {

inline nlohmann::json complex_to_json(Complex z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("complex numbers must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json vector_to_json(const CVector &v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
    return arr;
}

inline CVector vector_from_json(const nlohmann::json &j) {
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

/// Row-major nested arrays of [re, im].
inline nlohmann::json matrix_to_json(const CMatrix &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
    return rows;
}

inline CMatrix matrix_from_json(const nlohmann::json &j) {
    const auto n = static_cast<Eigen::Index>(j.size());
    const auto cols = n == 0 ? 0 : static_cast<Eigen::Index>(j[0].size());
    CMatrix m(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto &row = j[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ValidationError("ragged matrix in JSON");
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

/// Runs a parser, converting JSON library exceptions into ValidationError.
template <class F>
auto guarded(const char *what, F &&f) -> decltype(f()) {
    try {
        return std::forward<F>(f)();
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed ") + what + " document: " + e.what());
    }
}

}  // namespace qsep::jsonio

#endif
