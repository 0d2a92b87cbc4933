// Copyright 2026 The qssim Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qssim/harness.hpp"

using namespace qssim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("qssim_test_" + name);
    fs::remove_all(dir);
    return dir;
}

Scenario small(AttackKind attack, int n, std::uint64_t rounds, std::uint64_t reps, std::uint64_t seed) {
    Scenario s;
    s.attack = attack;
    s.protocol.n_agents = n;
    s.protocol.rounds = rounds;
    s.protocol.seed = seed;
    s.replicates = reps;
    return s;
}

}  // namespace

TEST(ParseScenario, MinimalWithDefaults) {
    const auto s = parse_scenario("attack = \"wang\"\nrounds = 2000\nn_agents = 3\nseed = 7\n");
    EXPECT_EQ(s.attack, AttackKind::Wang);
    EXPECT_EQ(s.protocol.rounds, 2000u);
    EXPECT_EQ(s.protocol.n_agents, 3);
    EXPECT_EQ(s.protocol.seed, 7u);
    EXPECT_EQ(s.protocol.p_control, 0.5);
    EXPECT_EQ(s.protocol.p_hadamard, 0.5);
    EXPECT_EQ(s.p_legal, 0.5);
    EXPECT_EQ(s.alpha, 0.01);
    EXPECT_EQ(s.replicates, 1u);
}

TEST(ParseScenario, CommentsAndBareStrings) {
    const auto s = parse_scenario("# header\n\n  attack = lin   # trailing\noutput_path = \"a # b\"\n");
    EXPECT_EQ(s.attack, AttackKind::Lin);
    EXPECT_EQ(s.output_path, "a # b");
}

TEST(ParseScenario, RangeErrorNamesField) {
    try {
        parse_scenario("rounds = 10\np_control = 1.5\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "p_control");
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("p_control"), std::string::npos);
    }
}

TEST(ParseScenario, Rejections) {
    auto key_of = [](const std::string& text) {
        try {
            parse_scenario(text);
        } catch (const ConfigError& e) {
            return e.key() + "@" + std::to_string(e.line());
        }
        return std::string("accepted");
    };
    EXPECT_EQ(key_of("bogus = 1"), "bogus@1");
    EXPECT_EQ(key_of("rounds = 1\nrounds = 2"), "rounds@2");
    EXPECT_EQ(key_of("rounds 5"), "@1");
    EXPECT_EQ(key_of("rounds = 0"), "rounds@1");
    EXPECT_EQ(key_of("rounds = -3"), "rounds@1");
    EXPECT_EQ(key_of("rounds = 2.5"), "rounds@1");
    EXPECT_EQ(key_of("alpha = 0"), "alpha@1");
    EXPECT_EQ(key_of("alpha = 1"), "alpha@1");
    EXPECT_EQ(key_of("p_legal = abc"), "p_legal@1");
    EXPECT_EQ(key_of("attack = \"eve\""), "attack@1");
    EXPECT_EQ(key_of("n_agents = \"3\""), "n_agents@1");
    EXPECT_EQ(key_of("replicates = 0"), "replicates@1");
    EXPECT_EQ(key_of("output_path = \"unterminated"), "output_path@1");
    EXPECT_EQ(key_of("\n\np_hadamard = 2"), "p_hadamard@3");
}

TEST(ParseScenario, EmitParseRoundTrip) {
    Rng rng(123);
    const AttackKind kinds[] = {AttackKind::None, AttackKind::InterceptResend, AttackKind::Lin, AttackKind::Wang,
                                AttackKind::WangWithLegalMode};
    for (int i = 0; i < 300; ++i) {
        Scenario s;
        s.attack = kinds[rng.below(5)];
        s.protocol.n_agents = 1 + static_cast<int>(rng.below(10));
        s.protocol.rounds = 1 + rng.below(1000000);
        s.protocol.p_control = rng.uniform();
        s.protocol.set_hadamard_share(rng.uniform());
        s.p_legal = rng.uniform();
        s.alpha = 1e-6 + 0.5 * rng.uniform();
        s.replicates = 1 + rng.below(500);
        s.protocol.seed = rng.next_u64();
        s.output_path = i % 3 == 0 ? "out/with \"quotes\"\\dir" : "results/" + std::to_string(i);
        const Scenario back = parse_scenario(emit_scenario(s));
        ASSERT_EQ(back, s) << emit_scenario(s);
        ASSERT_EQ(emit_scenario(back), emit_scenario(s));
    }
}

TEST(RunScenario, HonestAndWang) {
    const auto honest = compute_rows(small(AttackKind::None, 3, 2000, 3, 1), "honest");
    for (const auto& r : honest) {
        EXPECT_EQ(r.leakage, 0.0);
        EXPECT_EQ(r.check_pass_rate, 1.0);
        EXPECT_EQ(r.decode_accuracy, 1.0);
    }
    const auto wang = compute_rows(small(AttackKind::Wang, 3, 2000, 5, 1), "wang");
    ASSERT_EQ(wang.size(), 5u);
    for (const auto& r : wang) {
        EXPECT_TRUE(r.flagged);
        EXPECT_EQ(r.h_frequency.back(), 0.0);
    }
}

TEST(RunScenario, ReplicateSeedsAndOrder) {
    const auto rows = compute_rows(small(AttackKind::Lin, 1, 300, 6, 40), "lin");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].replicate, i);
        EXPECT_EQ(rows[i].seed, 40 + i);
    }
    // Parallel execution gives the same rows in the same order.
    EXPECT_EQ(compute_rows(small(AttackKind::Lin, 1, 300, 6, 40), "lin", 4), rows);
}

TEST(RunScenario, ByteIdenticalReports) {
    auto s = small(AttackKind::WangWithLegalMode, 2, 500, 4, 9);
    const auto a = scratch("det_a"), b = scratch("det_b");
    s.output_path = a.string();
    run_scenario(s, "det");
    s.output_path = b.string();
    run_scenario(s, "det", 3);
    for (const char* f : {"report.csv", "summary.txt"}) {
        const auto x = slurp(a / f);
        EXPECT_FALSE(x.empty()) << f;
        EXPECT_EQ(x, slurp(b / f)) << f;
    }
    // report.json records the output path, so it is compared against a rerun into a.
    s.output_path = a.string();
    const auto first = slurp(a / "report.json");
    run_scenario(s, "det");
    EXPECT_EQ(slurp(a / "report.json"), first);
}

TEST(RunScenario, IoFailureNamesPath) {
    auto s = small(AttackKind::None, 1, 10, 1, 1);
    const auto blocker = scratch("blocker");
    fs::create_directories(blocker.parent_path());
    std::ofstream(blocker.string()) << "file";
    s.output_path = (blocker / "sub").string();
    try {
        run_scenario(s, "io");
        FAIL() << "expected failure";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find(s.output_path), std::string::npos) << e.what();
    }
    fs::remove(blocker);
}

TEST(Reports, SchemaGolden) {
    const auto rows = compute_rows(small(AttackKind::Lin, 2, 200, 2, 5), "golden");
    const std::string csv = report_csv(rows);
    const std::string header = csv.substr(0, csv.find('\n'));
    const std::string golden = slurp(fs::path(QSSIM_TEST_DATA_DIR) / "report_header_2_agents.csv");
    EXPECT_EQ(header + "\n", golden);

    const auto json = nlohmann::ordered_json::parse(report_json(Scenario{}, rows));
    std::string keys;
    for (const auto& [k, v] : json["rows"][0].items()) keys += (keys.empty() ? "" : ",") + k;
    EXPECT_EQ(keys, header);
    EXPECT_EQ(json["rows"].size(), 2u);
    EXPECT_EQ(json["summary"][0]["replicates"], 2);
}

TEST(Reports, TwelveSignificantDigitsAndAbsentValues) {
    EXPECT_EQ(format12(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format12(0.5), "0.5");
    EXPECT_EQ(format12(2 * std::pow(0.5, 20)), "1.90734863281e-06");
    ReportRow row;
    row.scenario = "s";
    row.h_frequency = {0.25};
    row.h_p_value = {1.0 / 3.0};
    row.chi2_p_value = {std::nullopt};
    const std::string csv = report_csv({row});
    EXPECT_NE(csv.find(",0.25,0.333333333333,,false"), std::string::npos) << csv;
    const auto j = row_json(row, 1);
    EXPECT_TRUE(j["leakage"].is_null());
    EXPECT_EQ(j["h_pvalue_agent1"].dump(), "0.333333333333");
}

TEST(EmitSummary, LeakageColumns) {
    std::vector<ReportRow> rows;
    auto add = [&rows](AttackKind k, const std::string& id, std::uint64_t seed) {
        auto r = compute_rows(small(k, 1, 10000, 10, seed), id);
        rows.insert(rows.end(), r.begin(), r.end());
    };
    add(AttackKind::Lin, "lin", 100);
    add(AttackKind::WangWithLegalMode, "wang_legal", 200);
    add(AttackKind::Wang, "wang", 300);
    const auto out = emit_summary(rows);
    ASSERT_EQ(out.scenarios.size(), 3u);
    EXPECT_NEAR(out.scenarios[0].leakage.mean, out.scenarios[1].leakage.mean, 0.02);
    EXPECT_EQ(out.scenarios[2].leakage.mean, 1.0);
    EXPECT_EQ(out.scenarios[2].leakage.sd, 0.0);
    EXPECT_EQ(out.scenarios[2].detection_rate, 1.0);
    EXPECT_NE(out.text.find("wang_legal"), std::string::npos);
    EXPECT_EQ(out.json.size(), 3u);
    EXPECT_EQ(out.csv.substr(0, out.csv.find(',')), "scenario");
}

TEST(EmitSummary, HonestDetectionRate) {
    auto s = small(AttackKind::None, 1, 2000, 100, 7000);
    const auto out = emit_summary(compute_rows(s, "honest"));
    EXPECT_LE(out.scenarios[0].detection_rate, s.alpha + 0.01 + 3 * std::sqrt(0.01 * 0.99 / 100));
}

TEST(EmitSummary, RejectsEmptyInput) { EXPECT_THROW(emit_summary({}), std::invalid_argument); }
