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

#ifndef QSSIM_ADVERSARIES_HPP
#define QSSIM_ADVERSARIES_HPP

// Attacks on the secret-sharing round.
//
//  Lin: the last agent swaps the traveling photon for half of a fresh
//  singlet (h', t') in attack mode, or applies H honestly in legal mode.
//  Control rounds are survived by a Bell measurement on (h', t) followed
//  by a Pauli fake announcement; message rounds leak Alice's Pauli through
//  a Bell measurement on (h', t').
//
//  Wang: Bob and the last agent collude. The last agent sends photon 4 of
//  g1 = Phi+(1,3) Phi+(2,4) to Alice and routes t, 1, 2, 3 to Bob. In
//  control rounds Bob teleports (h, t) onto (3, 4) with a G measurement on
//  (h, t, 1, 2) and covertly tells the last agent which Pauli to announce;
//  in message rounds a G measurement on (1, 2, 3, 4) reads Alice's Pauli.
//  The fake announcement is always a Pauli, never H.
//
//  InterceptResend: Z-measures the photon on its way to Alice.

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qssim/protocol.hpp"
#include "qssim/quantum.hpp"
#include "qssim/rng.hpp"

namespace qssim {

inline const PhotonLabel kFakeHome{"h'"};
inline const PhotonLabel kFakeTravel{"t'"};
inline const PhotonLabel kG1{"1"};
inline const PhotonLabel kG2{"2"};
inline const PhotonLabel kG3{"3"};
inline const PhotonLabel kG4{"4"};

/// No fake announcement makes the check pass with certainty.
class NoPassingFakeOp : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AdversaryState {
    Labels ancilla;  // photons held back by the attackers this round
    std::optional<AdversaryMode> mode;
    std::vector<LocalOp> covert_messages;  // Bob -> last agent
    std::optional<SecretSymbol> claim;
    std::optional<std::size_t> last_outcome;  // most recent Bell/G outcome index

    void reset() { *this = AdversaryState{}; }
};

struct FakeOpSearchResult {
    LocalOp announced = LocalOp::I;
    LocalOp compensation = LocalOp::I;  // applied by a colluder to his own photon
};

/// True when the control check passes with probability 1 in both bases.
inline bool check_passes_deterministically(const PureState& state, const OpWord& announced,
                                           const PhotonLabel& bob_photon, const PhotonLabel& alice_photon) {
    const PureState undone = apply_word(state, announced, bob_photon);
    for (MeasBasis basis : {MeasBasis::Z, MeasBasis::X}) {
        const auto d = distribution(undone, basis, {bob_photon, alice_photon});
        if (d[0] + d[3] > 1e-9) return false;
    }
    return true;
}

/// Exhaustive search over (compensation on Bob's photon) x (announced
/// Pauli), compensation-major, each in the order I < X < Y < Z.
inline FakeOpSearchResult search_fake_op(const PureState& state, const OpWord& upstream,
                                         const PhotonLabel& bob_photon, const PhotonLabel& alice_photon,
                                         std::span<const LocalOp> compensations) {
    for (LocalOp c : compensations) {
        const PureState compensated = apply(state, c, bob_photon);
        for (LocalOp fake : kPaulis) {
            OpWord word = upstream;
            word.push_back(fake);
            if (check_passes_deterministically(compensated, word, bob_photon, alice_photon)) {
                return {fake, c};
            }
        }
    }
    throw NoPassingFakeOp("no Pauli announcement passes the control check deterministically");
}

struct ControlDeception {
    LocalOp fake = LocalOp::I;
    LocalOp compensation = LocalOp::I;
    PureState state;
};

// ---------------------------------------------------------------------------
// Fake-photon attack by the last agent

inline AdversaryMode lin_mode_choice(double p_legal, Rng& rng) {
    if (!(p_legal >= 0.0 && p_legal <= 1.0)) throw std::invalid_argument("p_legal must lie in [0,1]");
    return rng.bernoulli(p_legal) ? AdversaryMode::LegalMode : AdversaryMode::AttackMode;
}

/// Legal mode applies H to t and forwards it. Attack mode creates a fresh
/// singlet (h', t'); t' goes to Alice while h' and t stay with the attacker.
inline PureState lin_on_receive(const PureState& state, AdversaryState& adv, AdversaryMode mode) {
    adv.mode = mode;
    if (mode == AdversaryMode::LegalMode) return apply(state, LocalOp::H, kTravelPhoton);
    adv.ancilla = {kFakeHome, kTravelPhoton};
    return tensor(state, prepare_bell(BellKind::PsiMinus, kFakeHome, kFakeTravel));
}

/// Bell measurement on (h', t) swaps the entanglement onto (h, t'), then the
/// Pauli announcement that repairs the check is chosen.
inline ControlDeception lin_on_control(const PureState& state, AdversaryState& adv, const OpWord& upstream,
                                       Rng& rng) {
    const auto m = measure(state, MeasBasis::Bell, {kFakeHome, kTravelPhoton}, rng.uniform());
    adv.last_outcome = m.outcome;
    const LocalOp identity[] = {LocalOp::I};
    const auto found = search_fake_op(m.state, upstream, kBobPhoton, kFakeTravel, identity);
    return {found.announced, found.compensation, m.state};
}

struct LinInterception {
    SecretSymbol claim;
    PhotonLabel forwarded;
    PureState state;
};

/// Reads Alice's Pauli from (h', t'), then forwards the retained t after
/// applying his announced operation and Alice's Pauli so Bob still decodes.
inline LinInterception lin_on_message(const PureState& state, AdversaryState& adv, const OpWord& announced_word,
                                      Rng& rng) {
    if (announced_word.empty()) throw std::invalid_argument("lin_on_message: empty announced word");
    const auto m = measure(state, MeasBasis::Bell, {kFakeHome, kFakeTravel}, rng.uniform());
    adv.last_outcome = m.outcome;
    const SecretSymbol claim = decode_singlet_bell(static_cast<BellKind>(m.outcome));
    adv.claim = claim;
    PureState repaired = apply(m.state, announced_word.ops().back(), kTravelPhoton);
    repaired = apply(repaired, claim.op(), kTravelPhoton);
    return {claim, kTravelPhoton, std::move(repaired)};
}

// ---------------------------------------------------------------------------
// Teleportation attack by the first and last agents

inline PureState g1_state() {
    return tensor(prepare_bell(BellKind::PhiPlus, kG1, kG3), prepare_bell(BellKind::PhiPlus, kG2, kG4));
}

/// Appends g1 to the register. Photon 4 travels on to Alice; t, 1, 2, 3 go to Bob.
inline PureState wang_install(const PureState& state, AdversaryState& adv) {
    adv.mode = AdversaryMode::AttackMode;
    adv.ancilla = {kTravelPhoton, kG1, kG2, kG3};
    return tensor(state, g1_state());
}

/// G measurement on (h, t, 1, 2) teleports (h, t) to (3, 4); Bob picks the
/// fake announcement plus a correction on photon 3 and sends the fake to
/// the last agent. Bob stands in photon 3 for h in the check.
inline ControlDeception wang_on_control(const PureState& state, AdversaryState& adv,
                                        const OpWord& honest_announcements, Rng& rng) {
    const auto m = measure(state, MeasBasis::G, {kBobPhoton, kTravelPhoton, kG1, kG2}, rng.uniform());
    adv.last_outcome = m.outcome;
    const auto found = search_fake_op(m.state, honest_announcements, kG3, kG4, kPaulis);
    adv.covert_messages.push_back(found.announced);
    return {found.announced, found.compensation, apply(m.state, found.compensation, kG3)};
}

/// Pauli P on photon 4 of Phi+(2,4): I->Phi+, X->Psi+, Y->Psi-, Z->Phi-.
constexpr SecretSymbol decode_phi_plus_bell(BellKind kind) {
    switch (kind) {
        case BellKind::PhiPlus: return SecretSymbol::from_op(LocalOp::I);
        case BellKind::PsiPlus: return SecretSymbol::from_op(LocalOp::X);
        case BellKind::PsiMinus: return SecretSymbol::from_op(LocalOp::Y);
        case BellKind::PhiMinus: return SecretSymbol::from_op(LocalOp::Z);
    }
    throw std::logic_error("unknown BellKind");
}

struct WangInterception {
    SecretSymbol claim;
    GOutcome outcome;
    PureState state;
};

inline WangInterception wang_on_message(const PureState& state, AdversaryState& adv, Rng& rng) {
    const auto m = measure(state, MeasBasis::G, {kG1, kG2, kG3, kG4}, rng.uniform());
    adv.last_outcome = m.outcome;
    const GOutcome g = GOutcome::from_index(m.outcome);
    adv.claim = decode_phi_plus_bell(g.second);
    return {*adv.claim, g, m.state};
}

inline AdversaryMode wang_legal_mode_choice(double p_legal, Rng& rng) { return lin_mode_choice(p_legal, rng); }

// ---------------------------------------------------------------------------
// Baseline

inline PureState intercept_resend(const PureState& state, const PhotonLabel& photon, Rng& rng) {
    return measure(state, MeasBasis::Z, {photon}, rng.uniform()).state;
}

// ---------------------------------------------------------------------------
// Round hooks

/// Mutable view of one round as it passes through the adversary.
struct RoundContext {
    PureState state;
    PhotonLabel bob_photon = kBobPhoton;      // what Bob measures in the check / decode
    PhotonLabel alice_photon = kTravelPhoton;  // what Alice received
};

struct MessageTransit {
    PhotonLabel returned_photon;
    std::optional<SecretSymbol> claim;
    std::optional<SecretSymbol> bob_decode;  // set when Bob himself colludes
};

/// An attacker sitting at the last agent position (plus Bob for Wang).
class Adversary {
public:
    explicit Adversary(ProtocolConfig cfg) : cfg_(std::move(cfg)) {}
    virtual ~Adversary() = default;
    Adversary(const Adversary&) = delete;
    Adversary& operator=(const Adversary&) = delete;

    virtual AttackKind kind() const = 0;

    void begin_round() { state_.reset(); }

    /// The last agent receives the traveling photon. Returns the operation
    /// actually applied to it, or nullopt when the photon was replaced.
    virtual std::optional<LocalOp> on_receive(RoundContext& ctx, LocalOp honest_op, Rng& rng) = 0;

    virtual void on_mode(RoundContext& /*ctx*/, RoundMode /*mode*/) {}

    /// The last agent's announcement in a control round.
    virtual LocalOp announce_control(RoundContext& ctx, const OpWord& upstream, Rng& rng) = 0;

    /// The last agent's announcement in a message round (heard by Bob).
    virtual LocalOp announce_message(RoundContext& ctx, const OpWord& upstream, Rng& rng) = 0;

    /// Alice's encoded photon on its way back to Bob.
    virtual MessageTransit on_message_transit(RoundContext& ctx, const OpWord& announced, Rng& rng) = 0;

    const AdversaryState& state() const { return state_; }

protected:
    ProtocolConfig cfg_;
    AdversaryState state_;
    std::optional<LocalOp> applied_;
};

class InterceptResendAdversary final : public Adversary {
public:
    using Adversary::Adversary;

    AttackKind kind() const override { return AttackKind::InterceptResend; }

    std::optional<LocalOp> on_receive(RoundContext& ctx, LocalOp honest_op, Rng& rng) override {
        ctx.state = apply(ctx.state, honest_op, ctx.alice_photon);
        ctx.state = intercept_resend(ctx.state, ctx.alice_photon, rng);
        applied_ = honest_op;
        return honest_op;
    }
    LocalOp announce_control(RoundContext&, const OpWord&, Rng&) override { return *applied_; }
    LocalOp announce_message(RoundContext&, const OpWord&, Rng&) override { return *applied_; }
    MessageTransit on_message_transit(RoundContext& ctx, const OpWord&, Rng&) override {
        return {ctx.alice_photon, std::nullopt, std::nullopt};
    }
};

class LinAdversary final : public Adversary {
public:
    LinAdversary(ProtocolConfig cfg, double p_legal) : Adversary(std::move(cfg)), p_legal_(p_legal) {}

    AttackKind kind() const override { return AttackKind::Lin; }

    std::optional<LocalOp> on_receive(RoundContext& ctx, LocalOp, Rng& rng) override {
        const AdversaryMode mode = lin_mode_choice(p_legal_, rng);
        ctx.state = lin_on_receive(ctx.state, state_, mode);
        if (mode == AdversaryMode::LegalMode) return LocalOp::H;
        ctx.alice_photon = kFakeTravel;
        return std::nullopt;
    }

    LocalOp announce_control(RoundContext& ctx, const OpWord& upstream, Rng& rng) override {
        if (legal()) return LocalOp::H;
        auto d = lin_on_control(ctx.state, state_, upstream, rng);
        ctx.state = std::move(d.state);
        return d.fake;
    }

    LocalOp announce_message(RoundContext&, const OpWord&, Rng& rng) override {
        return legal() ? LocalOp::H : sample_agent_op(cfg_, rng);
    }

    MessageTransit on_message_transit(RoundContext& ctx, const OpWord& announced, Rng& rng) override {
        if (legal()) return {ctx.alice_photon, std::nullopt, std::nullopt};
        auto i = lin_on_message(ctx.state, state_, announced, rng);
        ctx.state = std::move(i.state);
        return {i.forwarded, i.claim, std::nullopt};
    }

private:
    bool legal() const { return state_.mode == AdversaryMode::LegalMode; }
    double p_legal_;
};

class WangAdversary final : public Adversary {
public:
    /// With legal mode off every round is attacked.
    WangAdversary(ProtocolConfig cfg, bool legal_mode, double p_legal)
        : Adversary(std::move(cfg)), legal_mode_(legal_mode), p_legal_(p_legal) {}

    AttackKind kind() const override {
        return legal_mode_ ? AttackKind::WangWithLegalMode : AttackKind::Wang;
    }

    std::optional<LocalOp> on_receive(RoundContext& ctx, LocalOp, Rng& rng) override {
        const AdversaryMode mode =
            legal_mode_ ? wang_legal_mode_choice(p_legal_, rng) : AdversaryMode::AttackMode;
        if (mode == AdversaryMode::LegalMode) {
            state_.mode = mode;
            ctx.state = apply(ctx.state, LocalOp::H, ctx.alice_photon);
            return LocalOp::H;
        }
        ctx.state = wang_install(ctx.state, state_);
        ctx.alice_photon = kG4;
        return std::nullopt;
    }

    LocalOp announce_control(RoundContext& ctx, const OpWord& upstream, Rng& rng) override {
        if (legal()) return LocalOp::H;
        auto d = wang_on_control(ctx.state, state_, upstream, rng);
        ctx.state = std::move(d.state);
        ctx.bob_photon = kG3;
        return d.fake;
    }

    LocalOp announce_message(RoundContext&, const OpWord&, Rng& rng) override {
        return legal() ? LocalOp::H : sample_agent_op(cfg_, rng);
    }

    MessageTransit on_message_transit(RoundContext& ctx, const OpWord&, Rng& rng) override {
        if (legal()) return {ctx.alice_photon, std::nullopt, std::nullopt};
        auto i = wang_on_message(ctx.state, state_, rng);
        ctx.state = std::move(i.state);
        return {ctx.alice_photon, i.claim, i.claim};
    }

private:
    bool legal() const { return state_.mode == AdversaryMode::LegalMode; }
    bool legal_mode_;
    double p_legal_;
};

/// nullptr for AttackKind::None.
inline std::unique_ptr<Adversary> make_adversary(AttackKind kind, const ProtocolConfig& cfg, double p_legal) {
    switch (kind) {
        case AttackKind::None: return nullptr;
        case AttackKind::InterceptResend: return std::make_unique<InterceptResendAdversary>(cfg);
        case AttackKind::Lin: return std::make_unique<LinAdversary>(cfg, p_legal);
        case AttackKind::Wang: return std::make_unique<WangAdversary>(cfg, false, p_legal);
        case AttackKind::WangWithLegalMode: return std::make_unique<WangAdversary>(cfg, true, p_legal);
    }
    return nullptr;
}

}  // namespace qssim

#endif  // QSSIM_ADVERSARIES_HPP
