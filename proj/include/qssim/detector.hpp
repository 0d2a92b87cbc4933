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

#ifndef QSSIM_DETECTOR_HPP
#define QSSIM_DETECTOR_HPP

// Statistics Alice can compute from public announcements alone.
//
// Every agent picks H with a fixed, agreed probability (1/2) and each
// Pauli with 1/8. An agent whose control-round announcements never (or too
// rarely) contain H is suspicious; the exact binomial test on the H count
// and a five-cell chi-square test quantify that suspicion.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qssim/protocol.hpp"

namespace qssim {

inline constexpr double kDefaultAlpha = 0.01;
inline constexpr std::size_t kChiSquareMinRounds = 50;
inline constexpr std::array<double, 5> kHonestOpProbabilities{0.125, 0.125, 0.125, 0.125, 0.5};

/// Control-round announcement counts per agent, indexed by LocalOp.
class AnnouncementLedger {
public:
    explicit AnnouncementLedger(int n_agents) : counts_(static_cast<std::size_t>(n_agents)) {
        if (n_agents < 1) throw std::invalid_argument("ledger needs at least one agent");
    }

    /// Counts a control-round announcement. Message-round announcements are
    /// not visible to Alice and are refused (returns false).
    bool record(const Announcement& a) {
        if (a.mode != RoundMode::Control) return false;
        if (a.party.role != PartyId::Role::Agent || a.party.agent < 1 ||
            a.party.agent > static_cast<int>(counts_.size())) {
            throw std::invalid_argument("announcement from unknown agent " + a.party.to_string());
        }
        ++counts_[static_cast<std::size_t>(a.party.agent - 1)][index_of(a.op)];
        return true;
    }

    int n_agents() const { return static_cast<int>(counts_.size()); }

    const std::array<std::size_t, 5>& counts(int agent) const {
        return counts_.at(static_cast<std::size_t>(agent - 1));
    }

    std::size_t h_count(int agent) const { return counts(agent)[index_of(LocalOp::H)]; }

    /// Number of control rounds recorded for this agent.
    std::size_t m(int agent) const {
        std::size_t total = 0;
        for (std::size_t c : counts(agent)) total += c;
        return total;
    }

private:
    std::vector<std::array<std::size_t, 5>> counts_;
};

// ---------------------------------------------------------------------------
// Exact binomial test for H ~ Binomial(m, 1/2)

/// P[K <= j] for K ~ Binomial(m, 1/2).
///
/// The largest term is evaluated in log space and the rest by the ratio
/// recurrence pmf(i-1) = pmf(i) * i / (m - i + 1), summed from the small
/// end, so nothing underflows for m in the tens of thousands.
inline double binomial_half_cdf(std::size_t j, std::size_t m) {
    if (j >= m) return 1.0;
    const long double mm = static_cast<long double>(m);
    const long double jj = static_cast<long double>(j);
    const long double log_top = std::lgamma(mm + 1.0L) - std::lgamma(jj + 1.0L) -
                                std::lgamma(mm - jj + 1.0L) - mm * std::log(2.0L);
    std::vector<long double> terms;
    long double term = std::exp(log_top);
    for (std::size_t i = j + 1; i-- > 0;) {
        terms.push_back(term);
        if (i == 0) break;
        term *= static_cast<long double>(i) / static_cast<long double>(m - i + 1);
        if (term < terms.front() * 1e-40L) break;
    }
    long double sum = 0.0L;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) sum += *it;
    return static_cast<double>(std::min(sum, 1.0L));
}

struct FrequencyTestResult {
    PartyId agent;
    std::size_t h_count = 0;
    std::size_t m = 0;
    double p_value = 1.0;
    bool flagged = false;
    bool inconclusive = false;  // m == 0
};

/// Two-sided exact test: p = min(1, 2 min(P[K<=h], P[K>=h])).
inline FrequencyTestResult h_binomial_test(std::size_t h_count, std::size_t m, double alpha = kDefaultAlpha,
                                           PartyId agent = {}) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (h_count > m) throw std::invalid_argument("h_count exceeds m");
    FrequencyTestResult r{agent, h_count, m, 1.0, false, false};
    if (m == 0) {
        r.inconclusive = true;
        return r;
    }
    // The distribution is symmetric, so P[K >= h] = P[K <= m - h].
    const std::size_t nearer_tail = std::min(h_count, m - h_count);
    r.p_value = std::min(1.0, 2.0 * binomial_half_cdf(nearer_tail, m));
    r.flagged = r.p_value < alpha;
    return r;
}

// ---------------------------------------------------------------------------
// Pearson chi-square over the five announced operations

/// Upper tail of the chi-square distribution with an even number of
/// degrees of freedom: exp(-x/2) * sum_{j < dof/2} (x/2)^j / j!.
inline double chi_square_survival_even(double x, int dof) {
    if (dof <= 0 || dof % 2 != 0) throw std::invalid_argument("dof must be a positive even number");
    if (x <= 0.0) return 1.0;
    const double half = x / 2.0;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < dof / 2; ++j) {
        term *= half / j;
        sum += term;
    }
    return std::min(1.0, std::exp(-half) * sum);
}

struct ChiSquareResult {
    PartyId agent;
    double statistic = 0.0;
    double p_value = 1.0;
    bool inconclusive = false;  // m below kChiSquareMinRounds
};

inline ChiSquareResult category_chisquare(const std::array<std::size_t, 5>& counts, std::size_t m,
                                          const std::array<double, 5>& expected = kHonestOpProbabilities,
                                          PartyId agent = {}) {
    ChiSquareResult r{agent, 0.0, 1.0, false};
    if (m < kChiSquareMinRounds) {
        r.inconclusive = true;
        return r;
    }
    for (std::size_t i = 0; i < 5; ++i) {
        const double e = expected[i] * static_cast<double>(m);
        const double d = static_cast<double>(counts[i]) - e;
        r.statistic += d * d / e;
    }
    r.p_value = chi_square_survival_even(r.statistic, 4);
    return r;
}

// ---------------------------------------------------------------------------
// Session metrics

struct SessionReport {
    AttackKind attack = AttackKind::None;
    int n_agents = 1;
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    double alpha = kDefaultAlpha;
    std::size_t message_rounds = 0;
    std::size_t control_rounds = 0;
    std::optional<double> leakage;          // absent without message rounds
    std::optional<double> decode_accuracy;  // absent without message rounds
    std::optional<double> check_pass_rate;  // absent without control rounds
    std::vector<std::array<std::size_t, 5>> announced_counts;
    std::vector<FrequencyTestResult> h_tests;
    std::vector<ChiSquareResult> chi_square;
    std::size_t covert_messages = 0;
    bool detected = false;

    double h_frequency(int agent) const {
        const auto& t = h_tests.at(static_cast<std::size_t>(agent - 1));
        return t.m == 0 ? 0.0 : static_cast<double>(t.h_count) / static_cast<double>(t.m);
    }
};

inline AnnouncementLedger build_ledger(const std::vector<RoundRecord>& records, int n_agents) {
    AnnouncementLedger ledger(n_agents);
    for (const auto& r : records) {
        if (r.mode != RoundMode::Control) continue;
        for (const auto& a : r.announcements) ledger.record(a);
    }
    return ledger;
}

/// Aggregates a finished session. Detection looks only at the ledger.
inline SessionReport summarize(const std::vector<RoundRecord>& records, const AnnouncementLedger& ledger,
                               double alpha = kDefaultAlpha) {
    SessionReport rep;
    rep.alpha = alpha;
    rep.n_agents = ledger.n_agents();
    rep.rounds = records.size();
    std::size_t leaked = 0, decoded_ok = 0, passed = 0;
    for (const auto& r : records) {
        rep.covert_messages += r.covert_messages;
        if (r.mode == RoundMode::Message) {
            ++rep.message_rounds;
            if (r.adversary_claim && r.alice_symbol && *r.adversary_claim == *r.alice_symbol) ++leaked;
            if (r.decoded && r.alice_symbol && *r.decoded == *r.alice_symbol) ++decoded_ok;
        } else {
            ++rep.control_rounds;
            if (r.check && r.check->pass) ++passed;
        }
    }
    if (rep.message_rounds > 0) {
        rep.leakage = static_cast<double>(leaked) / static_cast<double>(rep.message_rounds);
        rep.decode_accuracy = static_cast<double>(decoded_ok) / static_cast<double>(rep.message_rounds);
    }
    if (rep.control_rounds > 0) {
        rep.check_pass_rate = static_cast<double>(passed) / static_cast<double>(rep.control_rounds);
    }
    for (int k = 1; k <= ledger.n_agents(); ++k) {
        const PartyId agent = PartyId::agent_at(k);
        rep.announced_counts.push_back(ledger.counts(k));
        rep.h_tests.push_back(h_binomial_test(ledger.h_count(k), ledger.m(k), alpha, agent));
        rep.chi_square.push_back(
            category_chisquare(ledger.counts(k), ledger.m(k), kHonestOpProbabilities, agent));
        rep.detected = rep.detected || rep.h_tests.back().flagged;
    }
    return rep;
}

}  // namespace qssim

#endif  // QSSIM_DETECTOR_HPP
