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

#include "qsep/types.hpp"

#include <array>
#include <charconv>

#include "qsep/errors.hpp"

namespace qsep {

namespace {

constexpr std::array<std::string_view, 4> kFamilyNames = {"generic", "tilted_chsh", "many_answers",
                                                          "many_questions"};
constexpr std::array<std::string_view, 6> kTagNames = {"", "Z", "X", "X'", "Z'", "Aux"};

int parse_int(std::string_view s, const char *what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
        throw ValidationError(std::string("malformed ") + what + ": '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace

std::string_view family_name(Family f) {
    return kFamilyNames.at(static_cast<std::size_t>(f));
}

Family parse_family(std::string_view name) {
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i) {
        if (kFamilyNames[i] == name) return static_cast<Family>(i);
    }
    throw ValidationError("unknown family '" + std::string(name) + "'");
}

std::string Question::label() const {
    if (tag == Tag::kIndex) return std::to_string(m);
    return std::to_string(m) + ":" + std::string(kTagNames.at(static_cast<std::size_t>(tag)));
}

Question Question::parse(std::string_view label) {
    auto colon = label.find(':');
    if (colon == std::string_view::npos) return index(parse_int(label, "question"));
    int m = parse_int(label.substr(0, colon), "question");
    auto tag = label.substr(colon + 1);
    for (std::size_t i = 1; i < kTagNames.size(); ++i) {
        if (kTagNames[i] == tag) return {m, static_cast<Tag>(i)};
    }
    throw ValidationError("unknown question tag '" + std::string(tag) + "'");
}

std::string answer_label(Answer a) {
    return a == kBottom ? "bot" : std::to_string(a);
}

Answer parse_answer(std::string_view label) {
    if (label == "bot") return kBottom;
    return parse_int(label, "answer");
}

}  // namespace qsep
