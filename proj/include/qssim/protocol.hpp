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

#ifndef QSSIM_PROTOCOL_HPP
#define QSSIM_PROTOCOL_HPP

// Honest secret-sharing round mechanics.
//
// Bob prepares a singlet on (h, t), keeps h and sends t through agents
// 1..n to Alice. Each agent applies one operation from {I, X, Y, Z, H}.
// In a control round the agents announce their operations to Alice, Bob
// undoes the announced word on h and both sides measure a shared random
// basis expecting anticorrelation. In a message round Alice encodes two
// bits as a Pauli on the photon and returns it to Bob, who decodes with a
// Bell measurement once the agents' announcements reach him.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qssim/quantum.hpp"
#include "qssim/rng.hpp"

namespace qssim {

inline const PhotonLabel kBobPhoton{"h"};
inline const PhotonLabel kTravelPhoton{"t"};

struct PartyId {
    enum class Role : std::uint8_t { Alice, Bob, Agent };

    Role role = Role::Agent;
    int agent = 0;  // 1..n for Role::Agent

    static PartyId alice() { return {Role::Alice, 0}; }
    static PartyId bob() { return {Role::Bob, 0}; }
    static PartyId agent_at(int k) { return {Role::Agent, k}; }

    std::string to_string() const {
        switch (role) {
            case Role::Alice: return "Alice";
            case Role::Bob: return "Bob";
            case Role::Agent: return "Agent" + std::to_string(agent);
        }
        return "?";
    }

    friend bool operator==(const PartyId&, const PartyId&) = default;
};

enum class RoundMode : std::uint8_t { Message, Control };

constexpr std::string_view to_string(RoundMode m) {
    return m == RoundMode::Message ? "message" : "control";
}

/// Two classical bits; I<->00, X<->01, Y<->10, Z<->11.
class SecretSymbol {
public:
    constexpr SecretSymbol() = default;

    static constexpr SecretSymbol from_bits(unsigned bits) {
        if (bits > 3) throw std::invalid_argument("SecretSymbol holds two bits");
        return SecretSymbol(static_cast<std::uint8_t>(bits));
    }
    static constexpr SecretSymbol from_op(LocalOp op) {
        if (!is_pauli(op)) throw std::invalid_argument("only Paulis encode symbols");
        return SecretSymbol(static_cast<std::uint8_t>(op));
    }

    constexpr unsigned bits() const { return bits_; }
    constexpr LocalOp op() const { return static_cast<LocalOp>(bits_); }

    std::string to_string() const {
        return std::string{static_cast<char>('0' + (bits_ >> 1)), static_cast<char>('0' + (bits_ & 1))};
    }

    friend constexpr bool operator==(SecretSymbol, SecretSymbol) = default;

private:
    constexpr explicit SecretSymbol(std::uint8_t bits) : bits_(bits) {}
    std::uint8_t bits_ = 0;
};

struct Announcement {
    PartyId party;
    LocalOp op = LocalOp::I;
    RoundMode mode = RoundMode::Control;
};

enum class AttackKind : std::uint8_t { None, InterceptResend, Lin, Wang, WangWithLegalMode };

constexpr std::string_view to_string(AttackKind k) {
    switch (k) {
        case AttackKind::None: return "none";
        case AttackKind::InterceptResend: return "intercept_resend";
        case AttackKind::Lin: return "lin";
        case AttackKind::Wang: return "wang";
        case AttackKind::WangWithLegalMode: return "wang_legal";
    }
    return "?";
}

inline std::optional<AttackKind> parse_attack_kind(std::string_view text) {
    for (AttackKind k : {AttackKind::None, AttackKind::InterceptResend, AttackKind::Lin, AttackKind::Wang,
                         AttackKind::WangWithLegalMode}) {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

/// Per-round adversary behaviour: play honestly (applying H) or attack.
enum class AdversaryMode : std::uint8_t { LegalMode, AttackMode };

struct ProtocolConfig {
    int n_agents = 1;
    double p_control = 0.5;
    double p_hadamard = 0.5;
    std::array<double, 4> pauli_weights{0.125, 0.125, 0.125, 0.125};  // I, X, Y, Z
    std::uint64_t rounds = 1000;
    std::uint64_t seed = 0;

    /// Sets p_hadamard and spreads the remaining mass evenly over the Paulis.
    void set_hadamard_share(double p) {
        p_hadamard = p;
        pauli_weights.fill((1.0 - p) / 4.0);
    }

    friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;

    void validate() const {
        auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (n_agents < 1) throw std::invalid_argument("n_agents must be >= 1");
        if (!in_unit(p_control)) throw std::invalid_argument("p_control must lie in [0,1]");
        if (!in_unit(p_hadamard)) throw std::invalid_argument("p_hadamard must lie in [0,1]");
        double total = p_hadamard;
        for (double w : pauli_weights) {
            if (!in_unit(w)) throw std::invalid_argument("pauli_weights must lie in [0,1]");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw std::invalid_argument("p_hadamard + sum(pauli_weights) must equal 1");
        }
    }
};

struct CheckResult {
    MeasBasis basis = MeasBasis::Z;
    int alice_bit = 0;
    int bob_bit = 0;
    bool pass = false;
};

struct RoundRecord {
    RoundMode mode = RoundMode::Control;
    std::vector<std::optional<LocalOp>> agent_ops;  // nullopt: photon taken by an adversary
    std::vector<Announcement> announcements;        // agent order
    std::optional<SecretSymbol> alice_symbol;
    std::optional<CheckResult> check;
    std::optional<SecretSymbol> decoded;
    std::optional<SecretSymbol> adversary_claim;  // nullopt: adversary learned nothing certain
    std::optional<AdversaryMode> adversary_mode;
    std::size_t covert_messages = 0;
};

// ---------------------------------------------------------------------------
// Honest operations

inline LocalOp sample_agent_op(const ProtocolConfig& cfg, Rng& rng) {
    const double u = rng.uniform();
    if (u < cfg.p_hadamard) return LocalOp::H;
    double cumulative = cfg.p_hadamard;
    for (std::size_t i = 0; i < 4; ++i) {
        cumulative += cfg.pauli_weights[i];
        if (u < cumulative) return kPaulis[i];
    }
    // Rounding slack in the weights: fall back to the last Pauli with weight.
    for (std::size_t i = 4; i-- > 0;) {
        if (cfg.pauli_weights[i] > 0.0) return kPaulis[i];
    }
    return LocalOp::H;
}

inline OpWord to_word(const std::vector<LocalOp>& ops) { return OpWord(ops); }

/// Applies the agents' operations to the traveling photon, Agent 1 first.
inline PureState run_chain(const PureState& state, const std::vector<LocalOp>& ops,
                           const PhotonLabel& photon = kTravelPhoton) {
    return apply_word(state, OpWord(ops), photon);
}

inline PureState encode(const PureState& state, SecretSymbol s, const PhotonLabel& photon = kTravelPhoton) {
    return apply(state, s.op(), photon);
}

/// Bell class of (I x P)|psi->: I->Psi-, X->Phi-, Y->Phi+, Z->Psi+.
constexpr BellKind singlet_dense_code(LocalOp pauli) {
    switch (pauli) {
        case LocalOp::I: return BellKind::PsiMinus;
        case LocalOp::X: return BellKind::PhiMinus;
        case LocalOp::Y: return BellKind::PhiPlus;
        case LocalOp::Z: return BellKind::PsiPlus;
        case LocalOp::H: break;
    }
    throw std::invalid_argument("dense coding needs a Pauli");
}

constexpr SecretSymbol decode_singlet_bell(BellKind kind) {
    switch (kind) {
        case BellKind::PsiMinus: return SecretSymbol::from_op(LocalOp::I);
        case BellKind::PhiMinus: return SecretSymbol::from_op(LocalOp::X);
        case BellKind::PhiPlus: return SecretSymbol::from_op(LocalOp::Y);
        case BellKind::PsiPlus: return SecretSymbol::from_op(LocalOp::Z);
    }
    throw std::logic_error("unknown BellKind");
}

/// Eavesdropping check. Bob applies the announced word to his photon, Alice
/// picks Z or X uniformly, both measure; the check passes on opposite bits.
inline CheckResult control_check(const PureState& state, const OpWord& announced, Rng& rng,
                                 const PhotonLabel& bob_photon = kBobPhoton,
                                 const PhotonLabel& alice_photon = kTravelPhoton) {
    const PureState undone = apply_word(state, announced, bob_photon);
    CheckResult result;
    result.basis = rng.bernoulli(0.5) ? MeasBasis::Z : MeasBasis::X;
    const auto m = measure(undone, result.basis, {bob_photon, alice_photon}, rng.uniform());
    result.bob_bit = static_cast<int>((m.outcome >> 1) & 1);
    result.alice_bit = static_cast<int>(m.outcome & 1);
    result.pass = result.alice_bit != result.bob_bit;
    return result;
}

/// Bob's decoding once all announcements are in.
inline SecretSymbol reconstruct(const PureState& state, const OpWord& announced, Rng& rng,
                                const PhotonLabel& bob_photon = kBobPhoton,
                                const PhotonLabel& returned_photon = kTravelPhoton) {
    const PureState undone = apply_word(state, announced, bob_photon);
    const auto m = measure(undone, MeasBasis::Bell, {bob_photon, returned_photon}, rng.uniform());
    return decode_singlet_bell(static_cast<BellKind>(m.outcome));
}

inline SecretSymbol uniform_secret(Rng& rng) {
    return SecretSymbol::from_bits(static_cast<unsigned>(rng.below(4)));
}

}  // namespace qssim

#endif  // QSSIM_PROTOCOL_HPP
