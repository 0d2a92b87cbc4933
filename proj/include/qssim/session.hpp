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

#ifndef QSSIM_SESSION_HPP
#define QSSIM_SESSION_HPP

#include <functional>
#include <optional>
#include <vector>

#include "qssim/adversaries.hpp"
#include "qssim/detector.hpp"
#include "qssim/protocol.hpp"

namespace qssim {

using SecretSource = std::function<SecretSymbol(Rng&)>;

/// One full round. Without an adversary every agent is honest; with one,
/// the last agent's turn, the mode announcement, the last agent's
/// announcement and the message photon's return trip go through its hooks.
inline RoundRecord run_round(const ProtocolConfig& cfg, const SecretSource& secret_source, Adversary* adversary,
                             Rng& rng) {
    const int n = cfg.n_agents;
    RoundRecord rec;
    RoundContext ctx{prepare_bell(BellKind::PsiMinus, kBobPhoton, kTravelPhoton)};
    if (adversary != nullptr) adversary->begin_round();

    rec.agent_ops.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const LocalOp honest = sample_agent_op(cfg, rng);
        auto& slot = rec.agent_ops[static_cast<std::size_t>(k - 1)];
        if (k == n && adversary != nullptr) {
            slot = adversary->on_receive(ctx, honest, rng);
        } else {
            ctx.state = apply(ctx.state, honest, ctx.alice_photon);
            slot = honest;
        }
    }

    rec.mode = rng.bernoulli(cfg.p_control) ? RoundMode::Control : RoundMode::Message;
    if (adversary != nullptr) adversary->on_mode(ctx, rec.mode);

    OpWord announced;
    for (int k = 1; k < n; ++k) {
        const LocalOp op = *rec.agent_ops[static_cast<std::size_t>(k - 1)];
        rec.announcements.push_back({PartyId::agent_at(k), op, rec.mode});
        announced.push_back(op);
    }
    LocalOp last;
    if (adversary == nullptr) {
        last = *rec.agent_ops.back();
    } else if (rec.mode == RoundMode::Control) {
        last = adversary->announce_control(ctx, announced, rng);
    } else {
        last = adversary->announce_message(ctx, announced, rng);
    }
    rec.announcements.push_back({PartyId::agent_at(n), last, rec.mode});
    announced.push_back(last);

    if (rec.mode == RoundMode::Control) {
        rec.check = control_check(ctx.state, announced, rng, ctx.bob_photon, ctx.alice_photon);
    } else {
        const SecretSymbol symbol = secret_source(rng);
        rec.alice_symbol = symbol;
        ctx.state = encode(ctx.state, symbol, ctx.alice_photon);
        MessageTransit transit{ctx.alice_photon, std::nullopt, std::nullopt};
        if (adversary != nullptr) transit = adversary->on_message_transit(ctx, announced, rng);
        rec.adversary_claim = transit.claim;
        rec.decoded = transit.bob_decode
                          ? *transit.bob_decode
                          : reconstruct(ctx.state, announced, rng, ctx.bob_photon, transit.returned_photon);
    }

    if (adversary != nullptr) {
        rec.adversary_mode = adversary->state().mode;
        rec.covert_messages = adversary->state().covert_messages.size();
    }
    return rec;
}

struct SessionOptions {
    ProtocolConfig protocol;
    AttackKind attack = AttackKind::None;
    double p_legal = 0.5;
    double alpha = kDefaultAlpha;
    SecretSource secret_source = uniform_secret;
};

struct Session {
    std::vector<RoundRecord> records;
    SessionReport report;
};

/// Runs protocol.rounds rounds from an Rng seeded with protocol.seed.
inline Session run_session(const SessionOptions& opts) {
    opts.protocol.validate();
    Rng rng(opts.protocol.seed);
    auto adversary = make_adversary(opts.attack, opts.protocol, opts.p_legal);
    Session session;
    session.records.reserve(opts.protocol.rounds);
    for (std::uint64_t i = 0; i < opts.protocol.rounds; ++i) {
        session.records.push_back(run_round(opts.protocol, opts.secret_source, adversary.get(), rng));
    }
    session.report =
        summarize(session.records, build_ledger(session.records, opts.protocol.n_agents), opts.alpha);
    session.report.attack = opts.attack;
    session.report.seed = opts.protocol.seed;
    return session;
}

inline Session run_session(const ProtocolConfig& cfg, AttackKind attack, double p_legal = 0.5,
                           double alpha = kDefaultAlpha) {
    SessionOptions opts;
    opts.protocol = cfg;
    opts.attack = attack;
    opts.p_legal = p_legal;
    opts.alpha = alpha;
    return run_session(opts);
}

}  // namespace qssim

#endif  // QSSIM_SESSION_HPP
