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

#ifndef QSEP_TYPES_HPP
#define QSEP_TYPES_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace qsep {

/// Which construction a strategy or correlation belongs to.
enum class Family : std::uint8_t {
    kGeneric,
    kTiltedChsh,
    kManyAnswers,
    kManyQuestions,
};

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

/// Question tags. kIndex marks plain integer questions (x ∈ {0,1,2}, y ∈ {0,..,3}).
enum class Tag : std::uint8_t { kIndex, kZ, kX, kXp, kZp, kAux };

/// A question label: an integer, or a (block, tag) pair for the many-questions family.
struct Question {
    int m = 0;
    Tag tag = Tag::kIndex;

    static constexpr Question index(int i) {
        return {i, Tag::kIndex};
    }

    auto operator<=>(const Question &) const = default;
    std::string label() const;
    static Question parse(std::string_view label);
};

/// An answer label. Nonnegative integers are ordinary outcomes; kBottom is ⊥.
using Answer = int;
inline constexpr Answer kBottom = -1;

std::string answer_label(Answer a);
Answer parse_answer(std::string_view label);

enum class Party : std::uint8_t { kAlice, kBob };

}  // namespace qsep

#endif
