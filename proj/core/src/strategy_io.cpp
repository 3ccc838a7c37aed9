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

#include <string>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "qsep/strategy.hpp"

namespace qsep {

using nlohmann::json;

namespace {

json measurements_to_json(const std::vector<Measurement> &ms) {
    json arr = json::array();
    for (const auto &m : ms) {
        json outcomes = json::array();
        for (Answer a : m.outcomes) outcomes.push_back(answer_label(a));
        json projectors = json::array();
        for (const auto &p : m.projectors) projectors.push_back(jsonio::matrix_to_json(p));
        arr.push_back({{"question", m.question.label()}, {"outcomes", outcomes}, {"projectors", projectors}});
    }
    return arr;
}

std::vector<Measurement> measurements_from_json(const json &arr) {
    std::vector<Measurement> out;
    for (const auto &j : arr) {
        Measurement m;
        m.question = Question::parse(j.at("question").get<std::string>());
        for (const auto &a : j.at("outcomes")) m.outcomes.push_back(parse_answer(a.get<std::string>()));
        for (const auto &p : j.at("projectors")) m.projectors.push_back(jsonio::matrix_from_json(p));
        out.push_back(std::move(m));
    }
    return out;
}

json answers_to_json(const std::vector<Answer> &as) {
    json arr = json::array();
    for (Answer a : as) arr.push_back(answer_label(a));
    return arr;
}

std::vector<Answer> answers_from_json(const json &arr) {
    std::vector<Answer> out;
    for (const auto &a : arr) out.push_back(parse_answer(a.get<std::string>()));
    return out;
}

}  // namespace

std::string strategy_to_json(const Strategy &s) {
    json j;
    j["format"] = "qsep.strategy/1";
    j["family"] = std::string(family_name(s.family));
    j["coefficients"] = s.target;
    j["dims"] = s.state.dims();
    j["state"] = jsonio::vector_to_json(s.state.amplitudes());
    j["answers_a"] = answers_to_json(s.answers_a);
    j["answers_b"] = answers_to_json(s.answers_b);
    j["alice"] = measurements_to_json(s.alice);
    j["bob"] = measurements_to_json(s.bob);
    return j.dump(1);
}

Strategy strategy_from_json(const std::string &text) {
    return jsonio::guarded("strategy", [&] {
        json j = json::parse(text);
        Strategy s;
        s.family = parse_family(j.value("family", std::string("generic")));
        s.target = j.value("coefficients", std::vector<double>{});
        s.state = PureState(j.at("dims").get<std::vector<std::size_t>>(), jsonio::vector_from_json(j.at("state")));
        s.answers_a = answers_from_json(j.at("answers_a"));
        s.answers_b = answers_from_json(j.at("answers_b"));
        s.alice = measurements_from_json(j.at("alice"));
        s.bob = measurements_from_json(j.at("bob"));
        s.validate();
        return s;
    });
}

}  // namespace qsep
