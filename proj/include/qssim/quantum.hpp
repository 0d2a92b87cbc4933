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

#ifndef QSSIM_QUANTUM_HPP
#define QSSIM_QUANTUM_HPP

// Exact pure-state simulation of small labeled photon registers.
//
// Amplitudes are indexed by computational basis strings read in label
// order: the first label is the most significant bit. A PureState is a
// value; every operation returns a fresh state and leaves its input alone.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qssim {

using Amplitude = std::complex<double>;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr std::size_t kMaxQubits = 10;
inline constexpr double kNormTolerance = 1e-10;

/// Name of one photon in a register ("h", "t", "h'", "1", ...).
class PhotonLabel {
public:
    PhotonLabel() = default;
    PhotonLabel(std::string name) : name_(std::move(name)) {}  // NOLINT(google-explicit-constructor)
    PhotonLabel(const char* name) : name_(name) {}             // NOLINT(google-explicit-constructor)

    const std::string& name() const { return name_; }

    friend bool operator==(const PhotonLabel&, const PhotonLabel&) = default;
    friend auto operator<=>(const PhotonLabel&, const PhotonLabel&) = default;

private:
    std::string name_;
};

using Labels = std::vector<PhotonLabel>;

// ---------------------------------------------------------------------------
// Single-photon operations

enum class LocalOp : std::uint8_t { I, X, Y, Z, H };

inline constexpr std::array<LocalOp, 4> kPaulis{LocalOp::I, LocalOp::X, LocalOp::Y, LocalOp::Z};
inline constexpr std::array<LocalOp, 5> kLocalOps{LocalOp::I, LocalOp::X, LocalOp::Y, LocalOp::Z,
                                                  LocalOp::H};

constexpr std::size_t index_of(LocalOp op) { return static_cast<std::size_t>(op); }

constexpr bool is_pauli(LocalOp op) { return op != LocalOp::H; }

constexpr std::string_view to_string(LocalOp op) {
    switch (op) {
        case LocalOp::I: return "I";
        case LocalOp::X: return "X";
        case LocalOp::Y: return "Y";
        case LocalOp::Z: return "Z";
        case LocalOp::H: return "H";
    }
    return "?";
}

inline std::optional<LocalOp> parse_local_op(std::string_view text) {
    for (LocalOp op : kLocalOps) {
        if (to_string(op) == text) return op;
    }
    return std::nullopt;
}

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Amplitude, 4>;

inline Matrix2 matrix(LocalOp op) {
    const Amplitude i{0.0, 1.0};
    switch (op) {
        case LocalOp::I: return {1.0, 0.0, 0.0, 1.0};
        case LocalOp::X: return {0.0, 1.0, 1.0, 0.0};
        case LocalOp::Y: return {0.0, -i, i, 0.0};
        case LocalOp::Z: return {1.0, 0.0, 0.0, -1.0};
        case LocalOp::H: return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    }
    throw std::logic_error("unknown LocalOp");
}

inline Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

/// Ordered product of local operations; ops()[0] is applied first.
class OpWord {
public:
    OpWord() = default;
    OpWord(std::initializer_list<LocalOp> ops) : ops_(ops) {}
    explicit OpWord(std::vector<LocalOp> ops) : ops_(std::move(ops)) {}

    const std::vector<LocalOp>& ops() const { return ops_; }
    std::size_t size() const { return ops_.size(); }
    bool empty() const { return ops_.empty(); }
    void push_back(LocalOp op) { ops_.push_back(op); }
    auto begin() const { return ops_.begin(); }
    auto end() const { return ops_.end(); }

    /// Matrix of the whole word: M(ops[k-1]) ... M(ops[0]).
    Matrix2 matrix() const {
        Matrix2 m{1.0, 0.0, 0.0, 1.0};
        for (LocalOp op : ops_) m = multiply(qssim::matrix(op), m);
        return m;
    }

    std::string to_string() const {
        std::string out;
        for (LocalOp op : ops_) out += qssim::to_string(op);
        return out.empty() ? "-" : out;
    }

    friend bool operator==(const OpWord&, const OpWord&) = default;

private:
    std::vector<LocalOp> ops_;
};

// ---------------------------------------------------------------------------
// Measurement bases and outcomes

enum class BellKind : std::uint8_t { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellKind, 4> kBellKinds{BellKind::PhiPlus, BellKind::PhiMinus,
                                                    BellKind::PsiPlus, BellKind::PsiMinus};

constexpr std::string_view to_string(BellKind k) {
    switch (k) {
        case BellKind::PhiPlus: return "PhiPlus";
        case BellKind::PhiMinus: return "PhiMinus";
        case BellKind::PsiPlus: return "PsiPlus";
        case BellKind::PsiMinus: return "PsiMinus";
    }
    return "?";
}

/// Amplitudes over |00>, |01>, |10>, |11> of the pair (first, second).
inline std::array<Amplitude, 4> bell_amplitudes(BellKind k) {
    switch (k) {
        case BellKind::PhiPlus: return {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
        case BellKind::PhiMinus: return {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};
        case BellKind::PsiPlus: return {0.0, kInvSqrt2, kInvSqrt2, 0.0};
        case BellKind::PsiMinus: return {0.0, kInvSqrt2, -kInvSqrt2, 0.0};
    }
    throw std::logic_error("unknown BellKind");
}

/// Outcome of a G measurement on (a,b,c,d): Bell(a,c) then Bell(b,d).
struct GOutcome {
    BellKind first = BellKind::PhiPlus;
    BellKind second = BellKind::PhiPlus;

    constexpr std::size_t index() const {
        return static_cast<std::size_t>(first) * 4 + static_cast<std::size_t>(second);
    }
    static constexpr GOutcome from_index(std::size_t i) {
        return {static_cast<BellKind>(i / 4), static_cast<BellKind>(i % 4)};
    }
    friend bool operator==(const GOutcome&, const GOutcome&) = default;
};

/// Z and X act qubit-wise on any number of photons (outcome = bit string,
/// first photon most significant); Bell needs a pair; G needs a quad.
enum class MeasBasis : std::uint8_t { Z, X, Bell, G };

constexpr std::string_view to_string(MeasBasis b) {
    switch (b) {
        case MeasBasis::Z: return "Z";
        case MeasBasis::X: return "X";
        case MeasBasis::Bell: return "Bell";
        case MeasBasis::G: return "G";
    }
    return "?";
}

/// Orthonormal basis vectors for measuring `arity` photons. Entry [k][s] is
/// the amplitude of outcome k's eigenvector on sub-basis string s.
inline std::vector<std::vector<Amplitude>> basis_vectors(MeasBasis basis, std::size_t arity) {
    const std::size_t dim = std::size_t{1} << arity;
    std::vector<std::vector<Amplitude>> out;
    switch (basis) {
        case MeasBasis::Z:
            out.assign(dim, std::vector<Amplitude>(dim, 0.0));
            for (std::size_t k = 0; k < dim; ++k) out[k][k] = 1.0;
            break;
        case MeasBasis::X: {
            const double scale = std::pow(kInvSqrt2, static_cast<double>(arity));
            out.assign(dim, std::vector<Amplitude>(dim, 0.0));
            for (std::size_t k = 0; k < dim; ++k) {
                for (std::size_t s = 0; s < dim; ++s) {
                    const bool odd = (std::popcount(k & s) & 1) != 0;
                    out[k][s] = odd ? -scale : scale;
                }
            }
            break;
        }
        case MeasBasis::Bell:
            for (BellKind kind : kBellKinds) {
                const auto v = bell_amplitudes(kind);
                out.emplace_back(v.begin(), v.end());
            }
            break;
        case MeasBasis::G:
            for (std::size_t k = 0; k < 16; ++k) {
                const GOutcome g = GOutcome::from_index(k);
                const auto ac = bell_amplitudes(g.first);
                const auto bd = bell_amplitudes(g.second);
                std::vector<Amplitude> v(16);
                for (std::size_t s = 0; s < 16; ++s) {
                    const std::size_t a = (s >> 3) & 1, b = (s >> 2) & 1, c = (s >> 1) & 1, d = s & 1;
                    v[s] = ac[a * 2 + c] * bd[b * 2 + d];
                }
                out.push_back(std::move(v));
            }
            break;
    }
    return out;
}

inline void check_arity(MeasBasis basis, std::size_t arity) {
    const bool ok = (basis == MeasBasis::Bell)  ? arity == 2
                    : (basis == MeasBasis::G) ? arity == 4
                                              : arity >= 1;
    if (!ok) {
        throw std::invalid_argument("measurement arity mismatch: basis " +
                                    std::string(to_string(basis)) + " on " +
                                    std::to_string(arity) + " photon(s)");
    }
}

// ---------------------------------------------------------------------------
// PureState

class PureState {
public:
    /// Empty register: no photons, a single amplitude 1.
    PureState() : amplitudes_{1.0} {}

    PureState(Labels labels, std::vector<Amplitude> amplitudes)
        : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
        validate();
    }

    const Labels& labels() const { return labels_; }
    const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
    std::size_t qubit_count() const { return labels_.size(); }

    bool contains(const PhotonLabel& q) const {
        return std::find(labels_.begin(), labels_.end(), q) != labels_.end();
    }

    std::size_t position(const PhotonLabel& q) const {
        auto it = std::find(labels_.begin(), labels_.end(), q);
        if (it == labels_.end()) throw std::invalid_argument("unknown photon label: " + q.name());
        return static_cast<std::size_t>(it - labels_.begin());
    }

    /// Bit of the amplitude index that carries photon q.
    std::size_t bit_of(const PhotonLabel& q) const { return qubit_count() - 1 - position(q); }

    double norm() const {
        double sum = 0.0;
        for (const auto& a : amplitudes_) sum += std::norm(a);
        return std::sqrt(sum);
    }

    /// Raw constructor for internal use; checks shape and labels, not norm.
    static PureState unchecked(Labels labels, std::vector<Amplitude> amplitudes) {
        PureState s;
        s.labels_ = std::move(labels);
        s.amplitudes_ = std::move(amplitudes);
        s.validate_shape();
        return s;
    }

    /// Builds a state from arbitrary non-zero amplitudes, rescaling to norm 1.
    static PureState normalized(Labels labels, std::vector<Amplitude> amplitudes) {
        double sum = 0.0;
        for (const auto& a : amplitudes) sum += std::norm(a);
        if (sum <= 0.0) throw std::invalid_argument("cannot normalize a zero vector");
        const double scale = 1.0 / std::sqrt(sum);
        for (auto& a : amplitudes) a *= scale;
        return PureState(std::move(labels), std::move(amplitudes));
    }

private:
    void validate_shape() const {
        if (labels_.size() > kMaxQubits) {
            throw std::invalid_argument("register exceeds " + std::to_string(kMaxQubits) + " qubits");
        }
        if (amplitudes_.size() != (std::size_t{1} << labels_.size())) {
            throw std::invalid_argument("amplitude count does not match label count");
        }
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            for (std::size_t j = i + 1; j < labels_.size(); ++j) {
                if (labels_[i] == labels_[j]) {
                    throw std::invalid_argument("duplicate photon label: " + labels_[i].name());
                }
            }
        }
    }

    void validate() const {
        validate_shape();
        if (std::abs(norm() - 1.0) > kNormTolerance) {
            throw std::invalid_argument("state is not normalized");
        }
    }

    Labels labels_;
    std::vector<Amplitude> amplitudes_;
};

// ---------------------------------------------------------------------------
// Operations

inline PureState prepare_bell(BellKind kind, const PhotonLabel& a, const PhotonLabel& b) {
    if (a == b) throw std::invalid_argument("prepare_bell: duplicate photon label " + a.name());
    const auto v = bell_amplitudes(kind);
    return PureState({a, b}, {v.begin(), v.end()});
}

/// Joint state; s1's photons come first in the label order.
inline PureState tensor(const PureState& s1, const PureState& s2) {
    for (const auto& l : s2.labels()) {
        if (s1.contains(l)) throw std::invalid_argument("tensor: label collision on " + l.name());
    }
    Labels labels = s1.labels();
    labels.insert(labels.end(), s2.labels().begin(), s2.labels().end());
    if (labels.size() > kMaxQubits) throw std::invalid_argument("tensor: register too large");
    const auto& a = s1.amplitudes();
    const auto& b = s2.amplitudes();
    std::vector<Amplitude> out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
    }
    return PureState::unchecked(std::move(labels), std::move(out));
}

inline PureState apply_matrix(const PureState& state, const Matrix2& m, const PhotonLabel& q) {
    const std::size_t mask = std::size_t{1} << state.bit_of(q);
    std::vector<Amplitude> amps = state.amplitudes();
    for (std::size_t i0 = 0; i0 < amps.size(); ++i0) {
        if (i0 & mask) continue;
        const std::size_t i1 = i0 | mask;
        const Amplitude a0 = amps[i0];
        const Amplitude a1 = amps[i1];
        amps[i0] = m[0] * a0 + m[1] * a1;
        amps[i1] = m[2] * a0 + m[3] * a1;
    }
    return PureState::unchecked(state.labels(), std::move(amps));
}

inline PureState apply(const PureState& state, LocalOp op, const PhotonLabel& q) {
    return apply_matrix(state, matrix(op), q);
}

inline PureState apply_word(const PureState& state, const OpWord& word, const PhotonLabel& q) {
    state.position(q);  // reject unknown labels even for an empty word
    return apply_matrix(state, word.matrix(), q);
}

namespace detail {

// Splits every amplitude index into (rest, sub) where sub collects the
// measured photons' bits (first measured photon most significant).
struct IndexSplit {
    std::vector<std::size_t> sub;
    std::vector<std::size_t> rest;
    std::size_t rest_dim = 1;
};

inline IndexSplit split_indices(const PureState& state, const Labels& qs) {
    std::vector<std::size_t> bits;
    for (const auto& q : qs) {
        const std::size_t b = state.bit_of(q);
        if (std::find(bits.begin(), bits.end(), b) != bits.end()) {
            throw std::invalid_argument("measurement repeats photon " + q.name());
        }
        bits.push_back(b);
    }
    std::size_t measured_mask = 0;
    for (std::size_t b : bits) measured_mask |= std::size_t{1} << b;

    const std::size_t dim = state.amplitudes().size();
    IndexSplit split;
    split.sub.resize(dim);
    split.rest.resize(dim);
    split.rest_dim = dim >> qs.size();
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::size_t s = 0;
        for (std::size_t b : bits) s = (s << 1) | ((idx >> b) & 1);
        std::size_t r = 0;
        for (std::size_t b = state.qubit_count(); b-- > 0;) {
            if (measured_mask & (std::size_t{1} << b)) continue;
            r = (r << 1) | ((idx >> b) & 1);
        }
        split.sub[idx] = s;
        split.rest[idx] = r;
    }
    return split;
}

// Per-outcome projected amplitudes on the unmeasured photons.
inline std::vector<std::vector<Amplitude>> projections(const PureState& state, const IndexSplit& split,
                                                       const std::vector<std::vector<Amplitude>>& basis) {
    std::vector<std::vector<Amplitude>> out(basis.size(), std::vector<Amplitude>(split.rest_dim, 0.0));
    const auto& amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (amps[idx] == Amplitude{}) continue;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            out[k][split.rest[idx]] += std::conj(basis[k][split.sub[idx]]) * amps[idx];
        }
    }
    return out;
}

inline double squared_norm(const std::vector<Amplitude>& v) {
    double sum = 0.0;
    for (const auto& a : v) sum += std::norm(a);
    return sum;
}

inline PureState collapse(const PureState& state, const IndexSplit& split,
                          const std::vector<Amplitude>& eigenvector, const std::vector<Amplitude>& rest,
                          double probability) {
    const double scale = 1.0 / std::sqrt(probability);
    std::vector<Amplitude> amps(state.amplitudes().size());
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        amps[idx] = eigenvector[split.sub[idx]] * rest[split.rest[idx]] * scale;
    }
    return PureState::unchecked(state.labels(), std::move(amps));
}

}  // namespace detail

/// Outcome probabilities of measuring qs in the given basis. Index k is the
/// outcome: a bit string for Z/X, a BellKind for Bell, GOutcome::index() for G.
inline std::vector<double> distribution(const PureState& state, MeasBasis basis, const Labels& qs) {
    check_arity(basis, qs.size());
    const auto split = detail::split_indices(state, qs);
    const auto proj = detail::projections(state, split, basis_vectors(basis, qs.size()));
    std::vector<double> probs;
    probs.reserve(proj.size());
    for (const auto& p : proj) probs.push_back(detail::squared_norm(p));
    return probs;
}

inline std::array<double, 4> bell_distribution(const PureState& state, const PhotonLabel& a,
                                               const PhotonLabel& b) {
    const auto d = distribution(state, MeasBasis::Bell, {a, b});
    return {d[0], d[1], d[2], d[3]};
}

struct Measurement {
    std::size_t outcome = 0;
    double probability = 0.0;
    PureState state;
};

/// Samples an outcome with the uniform draw u in [0,1) and returns the
/// normalized post-measurement state. Measured photons are left in the
/// outcome eigenstate.
inline Measurement measure(const PureState& state, MeasBasis basis, const Labels& qs, double u) {
    check_arity(basis, qs.size());
    if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("measure: draw outside [0,1)");
    const auto vectors = basis_vectors(basis, qs.size());
    const auto split = detail::split_indices(state, qs);
    const auto proj = detail::projections(state, split, vectors);

    std::vector<double> probs;
    double total = 0.0;
    for (const auto& p : proj) {
        probs.push_back(detail::squared_norm(p));
        total += probs.back();
    }
    // Scale the draw by the actual total so rounding never leaves u uncovered.
    const double target = u * total;
    std::size_t chosen = probs.size();
    double cumulative = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        cumulative += probs[k];
        chosen = k;
        if (target < cumulative) break;
    }
    if (chosen == probs.size()) throw std::logic_error("measure: zero state");
    return {chosen, probs[chosen], detail::collapse(state, split, vectors[chosen], proj[chosen], probs[chosen])};
}

/// Post-measurement state for a forced outcome; throws if it has probability ~0.
inline PureState project(const PureState& state, MeasBasis basis, const Labels& qs, std::size_t outcome) {
    check_arity(basis, qs.size());
    const auto vectors = basis_vectors(basis, qs.size());
    if (outcome >= vectors.size()) throw std::invalid_argument("project: outcome out of range");
    const auto split = detail::split_indices(state, qs);
    const auto proj = detail::projections(state, split, {vectors[outcome]});
    const double p = detail::squared_norm(proj[0]);
    if (p < 1e-14) throw std::domain_error("project: outcome has zero probability");
    return detail::collapse(state, split, vectors[outcome], proj[0], p);
}

/// Same photons, amplitudes permuted into the given label order.
inline PureState reorder(const PureState& state, const Labels& order) {
    if (order.size() != state.qubit_count()) throw std::invalid_argument("reorder: label mismatch");
    std::vector<std::size_t> src_bits;
    for (const auto& l : order) src_bits.push_back(state.bit_of(l));
    const std::size_t n = order.size();
    std::vector<Amplitude> amps(state.amplitudes().size());
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        std::size_t src = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t bit = (idx >> (n - 1 - i)) & 1;
            src |= bit << src_bits[i];
        }
        amps[idx] = state.amplitudes()[src];
    }
    return PureState::unchecked(order, std::move(amps));
}

/// |<s1|s2>| after aligning s2 to s1's label order.
inline double fidelity_up_to_phase(const PureState& s1, const PureState& s2) {
    if (s1.qubit_count() != s2.qubit_count()) throw std::invalid_argument("fidelity: label mismatch");
    for (const auto& l : s1.labels()) {
        if (!s2.contains(l)) throw std::invalid_argument("fidelity: label mismatch on " + l.name());
    }
    const PureState aligned = reorder(s2, s1.labels());
    Amplitude inner{};
    for (std::size_t i = 0; i < aligned.amplitudes().size(); ++i) {
        inner += std::conj(s1.amplitudes()[i]) * aligned.amplitudes()[i];
    }
    return std::min(1.0, std::abs(inner));
}

/// Pure state of the photons `keep` when they are unentangled with the rest.
/// Throws std::domain_error if the split is not a product.
inline PureState reduced_pure_state(const PureState& state, const Labels& keep) {
    const auto split = detail::split_indices(state, keep);
    const auto& amps = state.amplitudes();
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < amps.size(); ++idx) {
        if (std::abs(amps[idx]) > std::abs(amps[best])) best = idx;
    }
    const std::size_t sub_dim = std::size_t{1} << keep.size();
    std::vector<Amplitude> kept(sub_dim);
    std::vector<Amplitude> other(split.rest_dim);
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (split.rest[idx] == split.rest[best]) kept[split.sub[idx]] = amps[idx];
        if (split.sub[idx] == split.sub[best]) other[split.rest[idx]] = amps[idx];
    }
    PureState reduced = PureState::normalized(keep, kept);

    Labels other_labels;
    for (const auto& l : state.labels()) {
        if (std::find(keep.begin(), keep.end(), l) == keep.end()) other_labels.push_back(l);
    }
    if (!other_labels.empty()) {
        const PureState rest = PureState::normalized(other_labels, other);
        if (fidelity_up_to_phase(state, tensor(reduced, rest)) < 1.0 - 1e-9) {
            throw std::domain_error("reduced_pure_state: photons are entangled with the rest");
        }
    }
    return reduced;
}

}  // namespace qssim

#endif  // QSSIM_QUANTUM_HPP
