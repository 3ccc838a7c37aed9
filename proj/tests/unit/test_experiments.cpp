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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qsep/correlation.hpp"
#include "qsep/experiments.hpp"

namespace qsep {
namespace {

ExperimentConfig robustness_config() {
    return config_from_json(R"({"experiment": "robustness", "family": "many_answers", "d": [3, 5],
                                "eps": [0, 1e-4, 1e-3, 1e-2], "trials": 2, "seed": 13})");
}

TEST(LoglogSlope, PowerLaws) {
    const std::vector<double> x{1, 2, 4, 8};
    std::vector<double> y;
    for (double v : x) y.push_back(3 * std::pow(v, -2.5));
    EXPECT_NEAR(loglog_slope(x, y), -2.5, 1e-12);
    for (auto &v : y) v = 0.1;
    EXPECT_NEAR(loglog_slope(x, y), 0.0, 1e-12);
}

TEST(LoglogSlope, Degenerate) {
    const std::vector<double> one{2}, two{2, 2}, y{1, 1};
    EXPECT_THROW(loglog_slope(one, std::vector<double>{1}), ValidationError);
    EXPECT_THROW(loglog_slope(two, y), ValidationError);
    EXPECT_THROW(loglog_slope(std::vector<double>{1, 2}, std::vector<double>{1, 0}), ValidationError);
}

TEST(Config, Defaults) {
    const auto ma = config_from_json(R"({"experiment": "convergence", "N": [3, 5]})");
    EXPECT_EQ(ma.family, Family::kManyAnswers);
    EXPECT_EQ(ma.effective_cutoff(), 31u);
    EXPECT_EQ(ma.trials, 5u);
    const auto mq = config_from_json(R"({"experiment": "convergence", "family": "many_questions", "N": [4]})");
    EXPECT_EQ(mq.effective_cutoff(), 32u);
    EXPECT_EQ(config_from_json(R"({"experiment": "witness", "N": [3]})").tol.slope_window, 1.0);
    EXPECT_EQ(ma.tol.slope_window, 0.5);
}

TEST(Config, Rejections) {
    EXPECT_THROW(config_from_json(R"({"experiment": "convergence", "N": [3], "bogus": 1})"), ValidationError);
    EXPECT_THROW(config_from_json(R"({"experiment": "convergence", "N": [3], "tolerances": {"slop": 1}})"),
                 ValidationError);
    EXPECT_THROW(config_from_json(R"({"experiment": "convergence", "N": [4]})"), UnsupportedParityError);
    EXPECT_THROW(config_from_json(R"({"experiment": "convergence", "N": [3], "cutoff": 30})"),
                 UnsupportedParityError);
    EXPECT_THROW(config_from_json(R"({"experiment": "dance"})"), ValidationError);
    EXPECT_THROW(config_from_json("[1, 2]"), ValidationError);
    EXPECT_THROW(config_from_json("{"), ValidationError);
}

TEST(Config, HashIsCanonical) {
    const auto a = config_from_json(R"({"experiment": "convergence", "N": [3, 5], "seed": 1, "output": "a.json"})");
    const auto b = config_from_json(R"({"seed": 1, "output": "b.csv", "N": [3, 5], "experiment": "convergence",
                                        "cutoff": 31})");
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    auto c = a;
    c.seed = 2;
    EXPECT_NE(config_hash(a), config_hash(c));
    EXPECT_EQ(config_hash(config_from_json(config_to_json(a))), config_hash(a));
}

TEST(Convergence, RowsAreConsistent) {
    const auto cfg = config_from_json(R"({"experiment": "convergence", "N": [3, 5, 7], "cutoff": 21})");
    const auto r = run_convergence(cfg);
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_EQ(r.cutoff, 21u);
    EXPECT_DOUBLE_EQ(r.tail_bound, separating_tail_bound(21));
    EXPECT_DOUBLE_EQ(r.alpha, r.rows[0].distance * std::pow(3.0, 16));
    EXPECT_TRUE(r.rows[0].within);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto &row = r.rows[i];
        EXPECT_DOUBLE_EQ(row.distance, separating_distance(Family::kManyAnswers, row.N, 21));
        EXPECT_DOUBLE_EQ(row.bound, r.alpha * std::pow(static_cast<double>(row.N), -16));
        if (i) EXPECT_EQ(row.within, row.distance <= row.bound);
        if (i) EXPECT_LT(row.distance, r.rows[i - 1].distance);
    }
    ASSERT_TRUE(r.slope.has_value());
    EXPECT_EQ(r.slope_ok, std::abs(*r.slope - cfg.tol.slope_center) <= cfg.tol.slope_window);
}

TEST(Convergence, SinglePointHasNoSlope) {
    const auto r = run_convergence(config_from_json(R"({"experiment": "convergence", "N": [5], "cutoff": 11})"));
    EXPECT_FALSE(r.slope.has_value());
    EXPECT_TRUE(r.passed());
}

TEST(Convergence, ResourceCap) {
    auto cfg = config_from_json(R"({"experiment": "convergence", "N": [3]})");
    cfg.max_dim = 100;
    EXPECT_THROW(run_convergence(cfg), ResourceError);
}

TEST(Robustness, ExactCellsAndEnvelope) {
    const auto cfg = robustness_config();
    const auto r = run_robustness(cfg);
    ASSERT_EQ(r.rows.size(), 2u * 4u * 2u);
    double worst = 0;
    for (const auto &row : r.rows) {
        EXPECT_NEAR(row.output_norm, 1.0, 1e-10);
        if (row.eps == 0) {
            EXPECT_LE(row.error, cfg.tol.exact);
            EXPECT_LE(row.delta, 1e-12);
        } else {
            worst = std::max(worst, row.error / (std::pow(static_cast<double>(row.d), 3) * std::pow(row.delta, 0.25)));
        }
    }
    EXPECT_TRUE(r.fit.exact_ok);
    EXPECT_DOUBLE_EQ(r.fit.C, worst);
    EXPECT_EQ(r.fit.points, 2u * 3u * 2u);
    ASSERT_TRUE(r.fit.slope.has_value());
    EXPECT_GE(*r.fit.slope, cfg.tol.min_slope);
    EXPECT_TRUE(r.passed());
}

TEST(Robustness, CellsIndependentOfTrialCount) {
    auto cfg = robustness_config();
    const auto small = run_robustness(cfg);
    cfg.trials = 4;
    const auto large = run_robustness(cfg);
    for (const auto &row : small.rows) {
        bool found = false;
        for (const auto &other : large.rows) {
            if (other.d == row.d && other.eps == row.eps && other.trial == row.trial) {
                found = true;
                EXPECT_EQ(other.seed, row.seed);
                EXPECT_EQ(other.error, row.error);
                EXPECT_EQ(other.delta, row.delta);
            }
        }
        EXPECT_TRUE(found);
    }
}

TEST(Robustness, ReportsAreByteIdentical) {
    const auto cfg = robustness_config();
    const auto a = run_experiment(cfg), b = run_experiment(cfg);
    EXPECT_EQ(report_to_json(a), report_to_json(b));
    EXPECT_EQ(report_to_csv(a), report_to_csv(b));
    auto other = cfg;
    other.seed = 14;
    EXPECT_NE(report_to_json(run_experiment(other)), report_to_json(a));
}

TEST(Robustness, ExactFailureIsReported) {
    auto cfg = robustness_config();
    cfg.tol.exact = 0;
    cfg.eps = {0, 1e-3, 1e-2};
    const auto r = run_robustness(cfg);
    bool any_positive = false;
    for (const auto &row : r.rows) any_positive |= row.eps == 0 && row.error > 0;
    EXPECT_EQ(r.fit.exact_ok, !any_positive);
}

TEST(Witness, RowsFollowDefinitions) {
    const auto cfg = config_from_json(R"({"experiment": "witness", "N": [3, 5, 7]})");
    const auto r = run_witness(cfg);
    ASSERT_EQ(r.rows.size(), 3u);
    for (const auto &row : r.rows) {
        EXPECT_NEAR(row.delta, separating_distance(Family::kManyAnswers, row.rank, 31) + separating_tail_bound(31),
                    1e-15);
        EXPECT_EQ(row.n_star % 2, 1u);
        EXPECT_GE(static_cast<double>(row.n_star), std::pow(row.delta, -1.0 / 16) - 1e-9);
        EXPECT_LT(static_cast<double>(row.n_star) - 2, std::pow(row.delta, -1.0 / 16));
        EXPECT_DOUBLE_EQ(row.threshold, std::pow(row.delta, -1.0 / 32));
        EXPECT_EQ(row.lower_bound_ok, row.low_rank >= row.lower_bound);
        if (row.n_star > row.rank) EXPECT_GT(row.lower_bound, 0.0);
        EXPECT_TRUE(row.threshold_ok);
    }
    EXPECT_TRUE(r.monotone);
    ASSERT_TRUE(r.slope.has_value());
}

TEST(Reports, JsonCarriesHash) {
    const auto cfg = config_from_json(R"({"experiment": "witness", "N": [3, 5]})");
    const auto rep = run_experiment(cfg);
    EXPECT_EQ(rep.config_hash, config_hash(cfg));
    EXPECT_EQ(rep.version, version());
    const std::string text = report_to_json(rep);
    EXPECT_NE(text.find("\"format\": \"qsep.report/1\""), std::string::npos);
    EXPECT_NE(text.find(rep.config_hash), std::string::npos);
    EXPECT_FALSE(hash_mismatch(text, rep).has_value());
    EXPECT_FALSE(hash_mismatch(report_to_csv(rep), rep).has_value());
    EXPECT_FALSE(hash_mismatch("no hash here", rep).has_value());
    auto other = cfg;
    other.N = {3, 7};
    const auto warning = hash_mismatch(text, run_experiment(other));
    ASSERT_TRUE(warning.has_value());
    EXPECT_NE(warning->find(rep.config_hash), std::string::npos);
}

TEST(Reports, CsvHeaders) {
    const auto conv = run_experiment(config_from_json(R"({"experiment": "convergence", "N": [3, 5], "cutoff": 11})"));
    const std::string csv = report_to_csv(conv);
    EXPECT_EQ(csv.rfind("# qsep ", 0), 0u);
    EXPECT_NE(csv.find("\nN,distance,bound,within\n"), std::string::npos);
    const auto rob = run_experiment(robustness_config());
    EXPECT_NE(report_to_csv(rob).find("\nfamily,d,eps,trial,seed,delta,yn1,yn2,yn3,yn4,yn_overall,error,output_norm\n"),
              std::string::npos);
    const auto wit = run_experiment(config_from_json(R"({"experiment": "witness", "N": [3]})"));
    EXPECT_NE(report_to_csv(wit).find("\nrank,delta,n_star,low_rank_distance,lower_bound,lower_bound_ok,threshold,"
                                      "budget,threshold_ok\n"),
              std::string::npos);
}

}  // namespace
}  // namespace qsep
