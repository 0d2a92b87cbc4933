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

#include <array>
#include <cmath>
#include <complex>

#include "qssim/session.hpp"

using namespace qssim;

namespace {

PureState singlet() { return prepare_bell(BellKind::PsiMinus, kBobPhoton, kTravelPhoton); }

ProtocolConfig config(int n, std::uint64_t rounds = 1000, std::uint64_t seed = 1) {
    ProtocolConfig cfg;
    cfg.n_agents = n;
    cfg.rounds = rounds;
    cfg.seed = seed;
    return cfg;
}

std::vector<LocalOp> sample_chain(const ProtocolConfig& cfg, Rng& rng) {
    std::vector<LocalOp> ops;
    for (int k = 0; k < cfg.n_agents; ++k) ops.push_back(sample_agent_op(cfg, rng));
    return ops;
}

// Exact failure probability of the check on a two-qubit vector (bob, alice)
// with the basis drawn uniformly from {Z, X}; written from scratch.
double oracle_check_fail(const std::array<std::complex<double>, 4>& v) {
    const double r = 1.0 / std::sqrt(2.0);
    double fail_z = std::norm(v[0]) + std::norm(v[3]);
    std::array<std::complex<double>, 4> w{};
    const double hh[2][2] = {{r, r}, {r, -r}};
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col) w[row] += hh[row >> 1][col >> 1] * hh[row & 1][col & 1] * v[col];
    double fail_x = std::norm(w[0]) + std::norm(w[3]);
    return 0.5 * fail_z + 0.5 * fail_x;
}

using Vec4 = std::array<std::complex<double>, 4>;

std::array<std::complex<double>, 4> oracle_matrix(LocalOp op) {
    const std::complex<double> i(0, 1);
    const double r = 1.0 / std::sqrt(2.0);
    switch (op) {
        case LocalOp::I: return {1, 0, 0, 1};
        case LocalOp::X: return {0, 1, 1, 0};
        case LocalOp::Y: return {0, -i, i, 0};
        case LocalOp::Z: return {1, 0, 0, -1};
        case LocalOp::H: return {r, r, r, -r};
    }
    return {};
}

// Applies op to qubit q (0 = bob, 1 = traveling photon) of a (bob, alice) vector.
Vec4 oracle_apply(const Vec4& v, LocalOp op, int q) {
    const auto m = oracle_matrix(op);
    Vec4 out{};
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col) {
            const int rb = q == 0 ? row >> 1 : row & 1, cb = q == 0 ? col >> 1 : col & 1;
            const int other_r = q == 0 ? row & 1 : row >> 1, other_c = q == 0 ? col & 1 : col >> 1;
            if (other_r == other_c) out[row] += m[2 * rb + cb] * v[col];
        }
    return out;
}

// Probability of each decoded symbol (indexed by its bits) when Bob
// Bell-measures the vector: Psi- -> 00, Phi- -> 01, Phi+ -> 10, Psi+ -> 11.
std::array<double, 4> oracle_decode(const Vec4& v) {
    const double r = 1.0 / std::sqrt(2.0);
    const Vec4 bells[4] = {{0, r, -r, 0}, {r, 0, 0, -r}, {r, 0, 0, r}, {0, r, r, 0}};
    std::array<double, 4> p{};
    for (int k = 0; k < 4; ++k) {
        std::complex<double> a = 0;
        for (int j = 0; j < 4; ++j) a += std::conj(bells[k][j]) * v[j];
        p[k] = std::norm(a);
    }
    return p;
}

Vec4 oracle_singlet() {
    const double r = 1.0 / std::sqrt(2.0);
    return {0, r, -r, 0};
}

}  // namespace

TEST(SampleAgentOp, Frequencies) {
    const auto cfg = config(1);
    Rng rng(11);
    std::array<int, 5> counts{};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[index_of(sample_agent_op(cfg, rng))];
    EXPECT_GE(counts[4] / double(draws), 0.49);
    EXPECT_LE(counts[4] / double(draws), 0.51);
    for (int k = 0; k < 4; ++k) {
        EXPECT_GE(counts[k] / double(draws), 0.12);
        EXPECT_LE(counts[k] / double(draws), 0.13);
    }
}

TEST(SampleAgentOp, DegenerateWeights) {
    auto cfg = config(1);
    cfg.pauli_weights = {0.5, 0.0, 0.0, 0.0};
    Rng rng(12);
    for (int i = 0; i < 10000; ++i) {
        const LocalOp op = sample_agent_op(cfg, rng);
        ASSERT_TRUE(op == LocalOp::I || op == LocalOp::H);
    }
}

TEST(ProtocolConfig, Validation) {
    auto cfg = config(1);
    EXPECT_NO_THROW(cfg.validate());
    cfg.p_control = 1.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = config(0);
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = config(1);
    cfg.pauli_weights = {0.2, 0.2, 0.2, 0.2};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(RunChain, Examples) {
    const auto psi = singlet();
    EXPECT_NEAR(fidelity_up_to_phase(run_chain(psi, {LocalOp::I, LocalOp::I, LocalOp::I}), psi), 1.0, 1e-12);
    EXPECT_NEAR(fidelity_up_to_phase(run_chain(psi, {LocalOp::H, LocalOp::H}), psi), 1.0, 1e-12);
    EXPECT_NEAR(bell_distribution(run_chain(psi, {LocalOp::X}), kBobPhoton, kTravelPhoton)[1], 1.0, 1e-12);
}

TEST(Encode, Examples) {
    const auto psi = singlet();
    EXPECT_NEAR(fidelity_up_to_phase(encode(psi, SecretSymbol::from_bits(0)), psi), 1.0, 1e-12);
    EXPECT_NEAR(bell_distribution(encode(psi, SecretSymbol::from_bits(1)), kBobPhoton, kTravelPhoton)[1], 1.0,
                1e-12);
    for (unsigned b = 0; b < 4; ++b) {
        const auto s = SecretSymbol::from_bits(b);
        EXPECT_NEAR(fidelity_up_to_phase(encode(encode(psi, s), s), psi), 1.0, 1e-12);
    }
}

TEST(SecretSymbol, Mapping) {
    EXPECT_EQ(SecretSymbol::from_bits(0).op(), LocalOp::I);
    EXPECT_EQ(SecretSymbol::from_bits(1).op(), LocalOp::X);
    EXPECT_EQ(SecretSymbol::from_bits(2).op(), LocalOp::Y);
    EXPECT_EQ(SecretSymbol::from_bits(3).op(), LocalOp::Z);
    EXPECT_EQ(SecretSymbol::from_bits(2).to_string(), "10");
    EXPECT_THROW(SecretSymbol::from_bits(4), std::invalid_argument);
    EXPECT_THROW(SecretSymbol::from_op(LocalOp::H), std::invalid_argument);
}

TEST(ControlCheck, HonestAlwaysPasses) {
    const auto cfg = config(3);
    Rng rng(21);
    for (int i = 0; i < 10000; ++i) {
        const auto ops = sample_chain(cfg, rng);
        const auto state = run_chain(singlet(), ops);
        ASSERT_TRUE(control_check(state, OpWord(ops), rng).pass);
    }
}

TEST(ControlCheck, UnannouncedX) {
    Rng rng(22);
    const auto state = run_chain(singlet(), {LocalOp::X});
    int fails = 0, trials = 10000;
    for (int i = 0; i < trials; ++i) {
        const auto c = control_check(state, OpWord{}, rng);
        if (c.basis == MeasBasis::Z) {
            ASSERT_FALSE(c.pass);
        } else {
            ASSERT_TRUE(c.pass);
        }
        ASSERT_EQ(c.pass, c.alice_bit != c.bob_bit);
        fails += c.pass ? 0 : 1;
    }
    EXPECT_NEAR(fails / double(trials), 0.5, 0.02);
}

TEST(ControlCheck, OneHMismatchMatchesOracle) {
    // (W x HW)|psi-> equals (I x H)|psi-> up to phase for any W, so the
    // oracle value does not depend on the rest of the chain.
    const double expected = oracle_check_fail(oracle_apply(oracle_singlet(), LocalOp::H, 1));
    EXPECT_NEAR(expected, 0.5, 1e-12);

    Rng rng(23);
    const auto cfg = config(2);
    int fails = 0, trials = 10000;
    for (int i = 0; i < trials; ++i) {
        auto ops = sample_chain(cfg, rng);
        ops.push_back(LocalOp::H);  // applied but not announced
        const auto state = run_chain(singlet(), ops);
        ops.pop_back();
        fails += control_check(state, OpWord(ops), rng).pass ? 0 : 1;
    }
    EXPECT_NEAR(fails / double(trials), expected, 0.02);
}

TEST(Reconstruct, TruthfulAnnouncementsDecodeExactly) {
    const auto cfg = config(4);
    Rng rng(31);
    for (int i = 0; i < 10000; ++i) {
        const auto ops = sample_chain(cfg, rng);
        const auto s = SecretSymbol::from_bits(static_cast<unsigned>(i % 4));
        const auto state = encode(run_chain(singlet(), ops), s);
        ASSERT_EQ(reconstruct(state, OpWord(ops), rng), s);
    }
}

TEST(Reconstruct, UnannouncedHMatchesOracle) {
    Rng rng(32);
    std::array<int, 4> counts{};
    const int trials = 20000;
    const auto state = encode(run_chain(singlet(), {LocalOp::H}), SecretSymbol::from_bits(0));
    for (int i = 0; i < trials; ++i) ++counts[reconstruct(state, OpWord{LocalOp::I}, rng).bits()];
    const auto expected = oracle_decode(oracle_apply(oracle_singlet(), LocalOp::H, 1));
    // The true symbol 00 is never decoded; 01 and 11 share the weight.
    EXPECT_NEAR(expected[0], 0.0, 1e-12);
    EXPECT_NEAR(expected[1], 0.5, 1e-12);
    EXPECT_NEAR(expected[3], 0.5, 1e-12);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(counts[k] / double(trials), expected[k], 0.02);
}

TEST(Reconstruct, WithheldAnnouncementMatchesOracle) {
    const auto cfg = config(3);
    Rng rng(33);
    const auto s = SecretSymbol::from_bits(2);
    std::array<int, 4> counts{};
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        auto ops = sample_chain(cfg, rng);
        const auto state = encode(run_chain(singlet(), ops), s);
        ops[1] = LocalOp::I;  // agent 2 keeps its operation secret
        ++counts[reconstruct(state, OpWord(ops), rng).bits()];
    }

    // Exact distribution by enumerating every honest chain with its weight.
    const double weight[5] = {0.125, 0.125, 0.125, 0.125, 0.5};
    std::array<double, 4> expected{};
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
            for (int c = 0; c < 5; ++c) {
                Vec4 v = oracle_singlet();
                for (int k : {a, b, c}) v = oracle_apply(v, kLocalOps[k], 1);
                v = oracle_apply(v, LocalOp::Y, 1);
                for (int k : {a, 0, c}) v = oracle_apply(v, kLocalOps[k], 0);
                const auto p = oracle_decode(v);
                for (int k = 0; k < 4; ++k) expected[k] += weight[a] * weight[b] * weight[c] * p[k];
            }
    // Bob recovers the secret only when the withheld operation was I.
    EXPECT_NEAR(expected[2], 0.125, 1e-12);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(counts[k] / double(trials), expected[k], 0.01);
}

TEST(RunRound, HonestControlAndMessage) {
    Rng rng(41);
    auto cfg = config(3);
    cfg.p_control = 1.0;
    for (int i = 0; i < 200; ++i) {
        const auto rec = run_round(cfg, uniform_secret, nullptr, rng);
        ASSERT_EQ(rec.mode, RoundMode::Control);
        ASSERT_TRUE(rec.check && rec.check->pass);
        ASSERT_FALSE(rec.alice_symbol.has_value());
    }
    cfg.p_control = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto rec = run_round(cfg, uniform_secret, nullptr, rng);
        ASSERT_EQ(rec.mode, RoundMode::Message);
        ASSERT_TRUE(rec.decoded && rec.alice_symbol);
        ASSERT_EQ(*rec.decoded, *rec.alice_symbol);
        ASSERT_FALSE(rec.adversary_claim.has_value());
        ASSERT_FALSE(rec.check.has_value());
    }
}

TEST(RunRound, AnnouncementsMatchAppliedOps) {
    Rng rng(42);
    const auto cfg = config(5);
    for (int i = 0; i < 1000; ++i) {
        const auto rec = run_round(cfg, uniform_secret, nullptr, rng);
        ASSERT_EQ(rec.announcements.size(), 5u);
        for (int k = 0; k < 5; ++k) {
            ASSERT_EQ(rec.announcements[k].party, PartyId::agent_at(k + 1));
            ASSERT_EQ(rec.announcements[k].op, *rec.agent_ops[k]);
            ASSERT_EQ(rec.announcements[k].mode, rec.mode);
        }
    }
}

TEST(RunSession, HonestCompletenessAcrossChainLengths) {
    for (int n = 1; n <= 6; ++n) {
        const auto session = run_session(config(n, 2000, 50 + n), AttackKind::None);
        const auto& rep = session.report;
        EXPECT_EQ(rep.decode_accuracy, 1.0) << n;
        EXPECT_EQ(rep.check_pass_rate, 1.0) << n;
        EXPECT_EQ(rep.leakage, 0.0) << n;
        // Mode frequency within 3 sigma of p_control.
        const double sigma = std::sqrt(0.25 / 2000.0);
        EXPECT_NEAR(rep.control_rounds / 2000.0, 0.5, 3 * sigma) << n;
    }
}

TEST(RunSession, DeterministicGivenSeed) {
    const auto a = run_session(config(3, 500, 9), AttackKind::Lin);
    const auto b = run_session(config(3, 500, 9), AttackKind::Lin);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        ASSERT_EQ(a.records[i].mode, b.records[i].mode);
        ASSERT_EQ(a.records[i].decoded, b.records[i].decoded);
        ASSERT_EQ(a.records[i].adversary_claim, b.records[i].adversary_claim);
        ASSERT_EQ(a.records[i].announcements.back().op, b.records[i].announcements.back().op);
    }
}
