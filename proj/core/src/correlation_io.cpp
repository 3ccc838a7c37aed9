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

#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "qsep/correlation.hpp"

namespace qsep {

using nlohmann::json;

namespace {

constexpr double kReaderSumTol = 1e-8;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string pair_key(Question x, Question y) {
    return x.label() + "|" + y.label();
}

void check_sums(const Correlation &p) {
    for (std::size_t xi = 0; xi < p.questions_a.size(); ++xi) {
        for (std::size_t yi = 0; yi < p.questions_b.size(); ++yi) {
            double s = 0.0;
            for (double v : p.table(xi, yi)) s += v;
            if (!(std::abs(s - 1.0) <= kReaderSumTol)) {
                throw ValidationError("table " + pair_key(p.questions_a[xi], p.questions_b[yi]) + " sums to " +
                                      fmt17(s));
            }
        }
    }
}

template <class T, class F>
std::vector<T> parse_list(const json &j, F parse) {
    std::vector<T> out;
    for (const auto &e : j) out.push_back(parse(e.get<std::string>()));
    return out;
}

}  // namespace

std::string correlation_to_json(const Correlation &p) {
    json j;
    j["format"] = "qsep.correlation/1";
    auto labels = [](const auto &v, auto f) {
        json arr = json::array();
        for (const auto &e : v) arr.push_back(f(e));
        return arr;
    };
    j["X"] = labels(p.questions_a, [](Question q) { return q.label(); });
    j["Y"] = labels(p.questions_b, [](Question q) { return q.label(); });
    j["A"] = labels(p.answers_a, answer_label);
    j["B"] = labels(p.answers_b, answer_label);
    json tables = json::object();
    for (std::size_t xi = 0; xi < p.questions_a.size(); ++xi)
        for (std::size_t yi = 0; yi < p.questions_b.size(); ++yi)
            tables[pair_key(p.questions_a[xi], p.questions_b[yi])] = p.table(xi, yi);
    j["tables"] = tables;
    return j.dump(1);
}

Correlation correlation_from_json(const std::string &text) {
    return jsonio::guarded("correlation", [&] {
        const json j = json::parse(text);
        auto p = Correlation::zeros(parse_list<Question>(j.at("X"), Question::parse),
                                    parse_list<Question>(j.at("Y"), Question::parse),
                                    parse_list<Answer>(j.at("A"), parse_answer),
                                    parse_list<Answer>(j.at("B"), parse_answer));
        const auto &tables = j.at("tables");
        const std::size_t n = p.answers_a.size() * p.answers_b.size();
        for (std::size_t xi = 0; xi < p.questions_a.size(); ++xi) {
            for (std::size_t yi = 0; yi < p.questions_b.size(); ++yi) {
                auto t = tables.at(pair_key(p.questions_a[xi], p.questions_b[yi])).get<std::vector<double>>();
                if (t.size() != n) throw ValidationError("correlation table has the wrong number of entries");
                p.table(xi, yi) = std::move(t);
            }
        }
        check_sums(p);
        return p;
    });
}

std::string correlation_to_csv(const Correlation &p) {
    std::string out = "x,y,a,b,p\n";
    for (std::size_t xi = 0; xi < p.questions_a.size(); ++xi) {
        for (std::size_t yi = 0; yi < p.questions_b.size(); ++yi) {
            for (std::size_t ai = 0; ai < p.answers_a.size(); ++ai) {
                for (std::size_t bi = 0; bi < p.answers_b.size(); ++bi) {
                    out += p.questions_a[xi].label() + "," + p.questions_b[yi].label() + "," +
                           answer_label(p.answers_a[ai]) + "," + answer_label(p.answers_b[bi]) + "," +
                           fmt17(p.at(xi, yi, ai, bi)) + "\n";
                }
            }
        }
    }
    return out;
}

Correlation correlation_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x,y,a,b,p") throw ValidationError("correlation CSV: missing header");
    struct Row {
        Question x, y;
        Answer a, b;
        double p;
    };
    std::vector<Row> rows;
    std::vector<Question> xs, ys;
    std::vector<Answer> as, bs;
    auto note = [](auto &list, const auto &v) {
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (f.size() != 5) throw ValidationError("correlation CSV: expected 5 columns in '" + line + "'");
        Row r{Question::parse(f[0]), Question::parse(f[1]), parse_answer(f[2]), parse_answer(f[3]), 0.0};
        try {
            std::size_t used = 0;
            r.p = std::stod(f[4], &used);
            if (used != f[4].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception &) {
            throw ValidationError("correlation CSV: bad probability '" + f[4] + "'");
        }
        note(xs, r.x);
        note(ys, r.y);
        note(as, r.a);
        note(bs, r.b);
        rows.push_back(r);
    }
    auto p = Correlation::zeros(xs, ys, as, bs);
    if (rows.size() != p.tables.size() * as.size() * bs.size()) {
        throw ValidationError("correlation CSV: missing or duplicate rows");
    }
    std::vector<bool> seen(rows.size(), false);
    for (const auto &r : rows) {
        const std::size_t xi = *p.index_a(r.x), yi = *p.index_b(r.y);
        const std::size_t ai = *p.answer_index_a(r.a), bi = *p.answer_index_b(r.b);
        const std::size_t flat = ((xi * ys.size() + yi) * as.size() + ai) * bs.size() + bi;
        if (seen[flat]) throw ValidationError("correlation CSV: duplicate row");
        seen[flat] = true;
        p.at(xi, yi, ai, bi) = r.p;
    }
    check_sums(p);
    return p;
}

}  // namespace qsep
