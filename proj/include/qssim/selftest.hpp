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

#ifndef QSSIM_SELFTEST_HPP
#define QSSIM_SELFTEST_HPP

// Fast invariant checks behind `qssim selftest`.

#include <cmath>
#include <string>
#include <vector>

#include "qssim/session.hpp"

namespace qssim {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline OpWord random_word(Rng& rng, std::size_t max_len) {
    OpWord w;
    const auto len = rng.below(max_len + 1);
    for (std::uint64_t i = 0; i < len; ++i) w.push_back(kLocalOps[rng.below(5)]);
    return w;
}

}  // namespace detail

inline std::vector<SelftestCheck> run_selftest(std::uint64_t seed = 2024) {
    std::vector<SelftestCheck> out;
    Rng rng(seed);
    const PureState singlet = prepare_bell(BellKind::PsiMinus, kBobPhoton, kTravelPhoton);

    {
        PureState s = tensor(singlet, g1_state());
        double drift = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const auto& labels = s.labels();
            s = apply(s, kLocalOps[rng.below(5)], labels[rng.below(labels.size())]);
            drift = std::max(drift, std::abs(s.norm() - 1.0));
        }
        out.push_back({"norm preservation", drift <= 1e-10, "max drift " + std::to_string(drift)});
    }
    {
        double worst = 1.0;
        for (int i = 0; i < 200; ++i) {
            const OpWord w = detail::random_word(rng, 12);
            const PureState s = apply_word(apply_word(singlet, w, kTravelPhoton), w, kBobPhoton);
            worst = std::min(worst, fidelity_up_to_phase(s, singlet));
        }
        out.push_back({"singlet covariance", worst >= 1.0 - 1e-9, "min fidelity " + std::to_string(worst)});
    }
    {
        bool ok = true;
        for (LocalOp p : kPaulis) {
            const auto d = bell_distribution(apply(singlet, p, kTravelPhoton), kBobPhoton, kTravelPhoton);
            ok = ok && std::abs(d[static_cast<std::size_t>(singlet_dense_code(p))] - 1.0) < 1e-12;
        }
        out.push_back({"dense coding table", ok, ""});
    }
    struct Expect {
        AttackKind kind;
        double leakage_lo, leakage_hi;
        bool detected;
    };
    for (const Expect& e : {Expect{AttackKind::None, 0.0, 0.0, false}, Expect{AttackKind::Lin, 0.4, 0.6, false},
                            Expect{AttackKind::Wang, 1.0, 1.0, true},
                            Expect{AttackKind::WangWithLegalMode, 0.4, 0.6, false}}) {
        ProtocolConfig cfg;
        cfg.n_agents = 1;
        cfg.rounds = 1000;
        cfg.seed = seed;
        const auto rep = run_session(cfg, e.kind).report;
        const double leak = rep.leakage.value_or(-1.0);
        const bool ok = rep.check_pass_rate == 1.0 && rep.decode_accuracy == 1.0 && leak >= e.leakage_lo &&
                        leak <= e.leakage_hi && rep.detected == e.detected;
        out.push_back({"session " + std::string(to_string(e.kind)), ok,
                       "leakage " + std::to_string(leak) + ", detected " + (rep.detected ? "yes" : "no")});
    }
    {
        const auto r = h_binomial_test(0, 20, 0.01);
        const bool ok = std::abs(r.p_value - 2.0 * std::pow(0.5, 20)) < 1e-15 && r.flagged;
        out.push_back({"binomial test", ok, "p(0 of 20) = " + std::to_string(r.p_value)});
    }
    return out;
}

}  // namespace qssim

#endif  // QSSIM_SELFTEST_HPP
