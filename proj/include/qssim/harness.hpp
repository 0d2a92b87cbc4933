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

#ifndef QSSIM_HARNESS_HPP
#define QSSIM_HARNESS_HPP

// Scenario files, replicate runs and report emission.
//
// A scenario is flat `key = value` text (a TOML subset): strings in double
// quotes, numbers, booleans, `#` comments. Replicate i runs with seed + i.
// Numbers are written with std::to_chars, which ignores the C locale; CSV
// and JSON values carry 12 significant digits.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qssim/session.hpp"

namespace qssim {

struct Scenario {
    ProtocolConfig protocol;
    AttackKind attack = AttackKind::None;
    double p_legal = 0.5;
    double alpha = kDefaultAlpha;
    std::uint64_t replicates = 1;
    std::string output_path = "out";

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Malformed scenario text; `line` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::size_t line = 0, std::string key = {})
        : std::runtime_error(format(message, line, key)), line_(line), key_(std::move(key)) {}

    std::size_t line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    static std::string format(const std::string& message, std::size_t line, const std::string& key) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!key.empty()) out += "'" + key + "': ";
        return out + message;
    }

    std::size_t line_;
    std::string key_;
};

inline constexpr std::string_view kScenarioKeys[] = {"n_agents", "rounds",     "p_control", "p_hadamard",
                                                     "attack",   "p_legal",    "alpha",     "replicates",
                                                     "seed",     "output_path"};

// ---------------------------------------------------------------------------
// Number formatting

/// Shortest representation that parses back to the same double.
inline std::string format_exact(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// 12 significant digits, locale independent.
inline std::string format12(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

inline double round12(double v) {
    const std::string text = format12(v);
    double out = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct RawValue {
    std::string text;
    bool quoted = false;
};

// Strips a trailing comment that is not inside a quoted string.
inline std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

inline RawValue parse_raw_value(std::string_view text, std::size_t line, const std::string& key) {
    text = trim(text);
    if (text.empty()) throw ConfigError("missing value", line, key);
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') throw ConfigError("unterminated string", line, key);
        std::string out;
        for (std::size_t i = 1; i + 1 < text.size(); ++i) {
            if (text[i] == '\\' && i + 2 < text.size()) {
                const char next = text[++i];
                out += next == 'n' ? '\n' : next == 't' ? '\t' : next;
            } else if (text[i] == '"') {
                throw ConfigError("unexpected quote in string", line, key);
            } else {
                out += text[i];
            }
        }
        return {out, true};
    }
    return {std::string(text), false};
}

inline double as_double(const RawValue& v, std::size_t line, const std::string& key) {
    if (v.quoted) throw ConfigError("expected a number", line, key);
    double out = 0.0;
    const char* end = v.text.data() + v.text.size();
    auto res = std::from_chars(v.text.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(out)) {
        throw ConfigError("expected a number, got '" + v.text + "'", line, key);
    }
    return out;
}

inline std::uint64_t as_count(const RawValue& v, std::size_t line, const std::string& key) {
    if (v.quoted) throw ConfigError("expected a non-negative integer", line, key);
    std::uint64_t out = 0;
    const char* end = v.text.data() + v.text.size();
    auto res = std::from_chars(v.text.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError("expected a non-negative integer, got '" + v.text + "'", line, key);
    }
    return out;
}

inline double probability(const RawValue& v, std::size_t line, const std::string& key) {
    const double p = as_double(v, line, key);
    if (p < 0.0 || p > 1.0) throw ConfigError("must lie in [0,1], got " + v.text, line, key);
    return p;
}

}  // namespace detail

/// Sets one key from its textual value. Throws ConfigError naming the key.
inline void apply_setting(Scenario& s, const std::string& key, std::string_view value_text, std::size_t line = 0) {
    const auto v = detail::parse_raw_value(value_text, line, key);
    if (key == "n_agents") {
        const auto n = detail::as_count(v, line, key);
        if (n < 1 || n > 64) throw ConfigError("must lie in [1,64]", line, key);
        s.protocol.n_agents = static_cast<int>(n);
    } else if (key == "rounds") {
        s.protocol.rounds = detail::as_count(v, line, key);
        if (s.protocol.rounds < 1) throw ConfigError("must be >= 1", line, key);
    } else if (key == "p_control") {
        s.protocol.p_control = detail::probability(v, line, key);
    } else if (key == "p_hadamard") {
        s.protocol.set_hadamard_share(detail::probability(v, line, key));
    } else if (key == "attack") {
        const auto kind = parse_attack_kind(v.text);
        if (!kind) {
            throw ConfigError("unknown attack '" + v.text + "' (none, intercept_resend, lin, wang, wang_legal)",
                              line, key);
        }
        s.attack = *kind;
    } else if (key == "p_legal") {
        s.p_legal = detail::probability(v, line, key);
    } else if (key == "alpha") {
        s.alpha = detail::as_double(v, line, key);
        if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw ConfigError("must lie in (0,1)", line, key);
    } else if (key == "replicates") {
        s.replicates = detail::as_count(v, line, key);
        if (s.replicates < 1) throw ConfigError("must be >= 1", line, key);
    } else if (key == "seed") {
        s.protocol.seed = detail::as_count(v, line, key);
    } else if (key == "output_path") {
        if (v.text.empty()) throw ConfigError("must not be empty", line, key);
        s.output_path = v.text;
    } else {
        throw ConfigError("unknown key", line, key);
    }
}

inline Scenario parse_scenario(std::string_view text) {
    Scenario s;
    std::map<std::string, std::size_t> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = std::min(text.find('\n', pos), text.size());
        const auto line = detail::trim(detail::strip_comment(text.substr(pos, eol - pos)));
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected key = value, got '" + std::string(line) + "'", line_no);
        }
        const std::string key(detail::trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (auto it = seen.find(key); it != seen.end()) {
            throw ConfigError("duplicate key (first set on line " + std::to_string(it->second) + ")", line_no,
                              key);
        }
        seen.emplace(key, line_no);
        apply_setting(s, key, line.substr(eq + 1), line_no);
    }
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

/// Canonical text for a scenario; parse_scenario(emit_scenario(s)) == s.
inline std::string emit_scenario(const Scenario& s) {
    std::string out;
    auto line = [&out](std::string_view key, const std::string& value) {
        out.append(key).append(" = ").append(value).append("\n");
    };
    line("attack", "\"" + std::string(to_string(s.attack)) + "\"");
    line("n_agents", std::to_string(s.protocol.n_agents));
    line("rounds", std::to_string(s.protocol.rounds));
    line("p_control", format_exact(s.protocol.p_control));
    line("p_hadamard", format_exact(s.protocol.p_hadamard));
    line("p_legal", format_exact(s.p_legal));
    line("alpha", format_exact(s.alpha));
    line("replicates", std::to_string(s.replicates));
    line("seed", std::to_string(s.protocol.seed));
    std::string escaped;
    for (char c : s.output_path) {
        if (c == '"' || c == '\\') escaped += '\\';
        escaped += c;
    }
    line("output_path", "\"" + escaped + "\"");
    return out;
}

// ---------------------------------------------------------------------------
// Reports

struct ReportRow {
    std::string scenario;
    std::uint64_t replicate = 0;
    std::uint64_t seed = 0;
    AttackKind attack = AttackKind::None;
    int n_agents = 1;
    std::uint64_t rounds = 0;
    std::size_t message_rounds = 0;
    std::size_t control_rounds = 0;
    std::optional<double> leakage;
    std::optional<double> check_pass_rate;
    std::optional<double> decode_accuracy;
    std::vector<double> h_frequency;                  // per agent, control rounds
    std::vector<double> h_p_value;                    // per agent, exact binomial
    std::vector<std::optional<double>> chi2_p_value;  // per agent; absent below 50 rounds
    bool flagged = false;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

inline ReportRow make_row(const std::string& scenario_id, std::uint64_t replicate, const SessionReport& rep) {
    ReportRow row;
    row.scenario = scenario_id;
    row.replicate = replicate;
    row.seed = rep.seed;
    row.attack = rep.attack;
    row.n_agents = rep.n_agents;
    row.rounds = rep.rounds;
    row.message_rounds = rep.message_rounds;
    row.control_rounds = rep.control_rounds;
    row.leakage = rep.leakage;
    row.check_pass_rate = rep.check_pass_rate;
    row.decode_accuracy = rep.decode_accuracy;
    for (int k = 1; k <= rep.n_agents; ++k) {
        row.h_frequency.push_back(rep.h_frequency(k));
        row.h_p_value.push_back(rep.h_tests[static_cast<std::size_t>(k - 1)].p_value);
        const auto& chi = rep.chi_square[static_cast<std::size_t>(k - 1)];
        row.chi2_p_value.push_back(chi.inconclusive ? std::nullopt : std::optional<double>(chi.p_value));
    }
    row.flagged = rep.detected;
    return row;
}

inline SessionOptions session_options(const Scenario& s, std::uint64_t replicate) {
    SessionOptions opts;
    opts.protocol = s.protocol;
    opts.protocol.seed = s.protocol.seed + replicate;
    opts.attack = s.attack;
    opts.p_legal = s.p_legal;
    opts.alpha = s.alpha;
    return opts;
}

/// Runs every replicate (in parallel when threads > 1) and returns rows in
/// replicate order.
inline std::vector<ReportRow> compute_rows(const Scenario& s, const std::string& scenario_id,
                                           unsigned threads = 1) {
    s.protocol.validate();
    std::vector<ReportRow> rows(s.replicates);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i = next++; i < s.replicates; i = next++) {
            rows[i] = make_row(scenario_id, i, run_session(session_options(s, i)).report);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(s.replicates)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return rows;
}

inline std::vector<std::string> csv_columns(int n_agents) {
    std::vector<std::string> cols{"scenario",       "replicate",       "seed",           "attack",
                                  "n_agents",       "rounds",          "message_rounds", "control_rounds",
                                  "leakage",        "check_pass_rate", "decode_accuracy"};
    for (const char* prefix : {"h_freq_agent", "h_pvalue_agent", "chi2_pvalue_agent"}) {
        for (int k = 1; k <= n_agents; ++k) cols.push_back(prefix + std::to_string(k));
    }
    cols.emplace_back("flagged");
    return cols;
}

namespace detail {

inline std::string opt_text(const std::optional<double>& v) { return v ? format12(*v) : std::string{}; }

inline nlohmann::ordered_json opt_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(round12(*v)) : nlohmann::ordered_json(nullptr);
}

inline int max_agents(const std::vector<ReportRow>& rows) {
    int n = 1;
    for (const auto& r : rows) n = std::max(n, r.n_agents);
    return n;
}

template <class T>
std::optional<T> at_agent(const std::vector<T>& v, int k) {
    if (k - 1 < static_cast<int>(v.size())) return v[static_cast<std::size_t>(k - 1)];
    return std::nullopt;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

/// One row per replicate. Columns for agents a row lacks are left empty.
inline std::string report_csv(const std::vector<ReportRow>& rows) {
    const int n = detail::max_agents(rows);
    std::string out;
    const auto cols = csv_columns(n);
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += "\n";
    for (const auto& r : rows) {
        std::vector<std::string> f{detail::csv_escape(r.scenario),
                                   std::to_string(r.replicate),
                                   std::to_string(r.seed),
                                   std::string(to_string(r.attack)),
                                   std::to_string(r.n_agents),
                                   std::to_string(r.rounds),
                                   std::to_string(r.message_rounds),
                                   std::to_string(r.control_rounds),
                                   detail::opt_text(r.leakage),
                                   detail::opt_text(r.check_pass_rate),
                                   detail::opt_text(r.decode_accuracy)};
        for (int k = 1; k <= n; ++k) f.push_back(detail::opt_text(detail::at_agent(r.h_frequency, k)));
        for (int k = 1; k <= n; ++k) f.push_back(detail::opt_text(detail::at_agent(r.h_p_value, k)));
        for (int k = 1; k <= n; ++k) {
            const auto v = detail::at_agent(r.chi2_p_value, k);
            f.push_back(detail::opt_text(v ? *v : std::nullopt));
        }
        f.emplace_back(r.flagged ? "true" : "false");
        for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
        out += "\n";
    }
    return out;
}

inline nlohmann::ordered_json row_json(const ReportRow& r, int n) {
    nlohmann::ordered_json j;
    j["scenario"] = r.scenario;
    j["replicate"] = r.replicate;
    j["seed"] = r.seed;
    j["attack"] = std::string(to_string(r.attack));
    j["n_agents"] = r.n_agents;
    j["rounds"] = r.rounds;
    j["message_rounds"] = r.message_rounds;
    j["control_rounds"] = r.control_rounds;
    j["leakage"] = detail::opt_json(r.leakage);
    j["check_pass_rate"] = detail::opt_json(r.check_pass_rate);
    j["decode_accuracy"] = detail::opt_json(r.decode_accuracy);
    for (int k = 1; k <= n; ++k) {
        j["h_freq_agent" + std::to_string(k)] = detail::opt_json(detail::at_agent(r.h_frequency, k));
    }
    for (int k = 1; k <= n; ++k) {
        j["h_pvalue_agent" + std::to_string(k)] = detail::opt_json(detail::at_agent(r.h_p_value, k));
    }
    for (int k = 1; k <= n; ++k) {
        const auto v = detail::at_agent(r.chi2_p_value, k);
        j["chi2_pvalue_agent" + std::to_string(k)] = detail::opt_json(v ? *v : std::nullopt);
    }
    j["flagged"] = r.flagged;
    return j;
}

// ---------------------------------------------------------------------------
// Summary

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation; 0 for a single value
    std::size_t count = 0;
};

inline MeanSd mean_sd(const std::vector<double>& xs) {
    MeanSd out;
    out.count = xs.size();
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

struct ScenarioSummary {
    std::string scenario;
    AttackKind attack = AttackKind::None;
    std::size_t replicates = 0;
    MeanSd leakage;
    MeanSd check_pass_rate;
    MeanSd decode_accuracy;
    std::vector<MeanSd> h_frequency;  // per agent
    double detection_rate = 0.0;
};

struct SummaryOutput {
    std::vector<ScenarioSummary> scenarios;
    std::string text;
    std::string csv;
    nlohmann::ordered_json json;
};

inline std::vector<ScenarioSummary> summarize_rows(const std::vector<ReportRow>& rows) {
    std::vector<ScenarioSummary> out;
    std::vector<std::string> order;
    for (const auto& r : rows) {
        if (std::find(order.begin(), order.end(), r.scenario) == order.end()) order.push_back(r.scenario);
    }
    for (const auto& id : order) {
        ScenarioSummary s;
        s.scenario = id;
        std::vector<double> leak, pass, dec;
        std::vector<std::vector<double>> hf;
        std::size_t flagged = 0;
        for (const auto& r : rows) {
            if (r.scenario != id) continue;
            s.attack = r.attack;
            ++s.replicates;
            if (r.leakage) leak.push_back(*r.leakage);
            if (r.check_pass_rate) pass.push_back(*r.check_pass_rate);
            if (r.decode_accuracy) dec.push_back(*r.decode_accuracy);
            if (hf.size() < r.h_frequency.size()) hf.resize(r.h_frequency.size());
            for (std::size_t k = 0; k < r.h_frequency.size(); ++k) hf[k].push_back(r.h_frequency[k]);
            if (r.flagged) ++flagged;
        }
        s.leakage = mean_sd(leak);
        s.check_pass_rate = mean_sd(pass);
        s.decode_accuracy = mean_sd(dec);
        for (const auto& v : hf) s.h_frequency.push_back(mean_sd(v));
        s.detection_rate = static_cast<double>(flagged) / static_cast<double>(s.replicates);
        out.push_back(std::move(s));
    }
    return out;
}

/// Per-scenario means and standard deviations as a text table, CSV and JSON.
inline SummaryOutput emit_summary(const std::vector<ReportRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("emit_summary: no report rows");
    SummaryOutput out;
    out.scenarios = summarize_rows(rows);

    auto pm = [](const MeanSd& v) {
        if (v.count == 0) return std::string("-");
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os.setf(std::ios::fixed);
        os.precision(4);
        os << v.mean << " +/- " << v.sd;
        return os.str();
    };
    std::ostringstream text;
    text.imbue(std::locale::classic());
    auto cell = [&text](const std::string& s, std::size_t w) {
        text << s;
        for (std::size_t i = s.size(); i < w; ++i) text << ' ';
    };
    cell("scenario", 22), cell("attack", 18), cell("reps", 6), cell("leakage", 20), cell("check pass", 20);
    cell("decode", 20), cell("H freq (last agent)", 22);
    text << "detection\n";
    for (const auto& s : out.scenarios) {
        cell(s.scenario, 22), cell(std::string(to_string(s.attack)), 18), cell(std::to_string(s.replicates), 6);
        cell(pm(s.leakage), 20), cell(pm(s.check_pass_rate), 20), cell(pm(s.decode_accuracy), 20);
        cell(s.h_frequency.empty() ? "-" : pm(s.h_frequency.back()), 22);
        text << format12(s.detection_rate) << "\n";
    }
    text << "seeds: replicate i uses seed + i\n";
    out.text = text.str();

    std::size_t max_agents = 0;
    for (const auto& s : out.scenarios) max_agents = std::max(max_agents, s.h_frequency.size());
    std::string csv = "scenario,attack,replicates,leakage_mean,leakage_sd,check_pass_mean,check_pass_sd,"
                      "decode_mean,decode_sd";
    for (std::size_t k = 1; k <= max_agents; ++k) {
        csv += ",h_freq_agent" + std::to_string(k) + "_mean,h_freq_agent" + std::to_string(k) + "_sd";
    }
    csv += ",detection_rate\n";
    auto ms_csv = [](const MeanSd& v) {
        return v.count == 0 ? std::string(",") : format12(v.mean) + "," + format12(v.sd);
    };
    auto ms_json = [](const MeanSd& v) {
        nlohmann::ordered_json j;
        j["mean"] = v.count == 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(round12(v.mean));
        j["sd"] = v.count == 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(round12(v.sd));
        return j;
    };
    out.json = nlohmann::ordered_json::array();
    for (const auto& s : out.scenarios) {
        csv += detail::csv_escape(s.scenario) + "," + std::string(to_string(s.attack)) + "," +
               std::to_string(s.replicates) + "," + ms_csv(s.leakage) + "," + ms_csv(s.check_pass_rate) + "," +
               ms_csv(s.decode_accuracy);
        for (std::size_t k = 0; k < max_agents; ++k) {
            csv += "," + (k < s.h_frequency.size() ? ms_csv(s.h_frequency[k]) : std::string(","));
        }
        csv += "," + format12(s.detection_rate) + "\n";

        nlohmann::ordered_json j;
        j["scenario"] = s.scenario;
        j["attack"] = std::string(to_string(s.attack));
        j["replicates"] = s.replicates;
        j["leakage"] = ms_json(s.leakage);
        j["check_pass_rate"] = ms_json(s.check_pass_rate);
        j["decode_accuracy"] = ms_json(s.decode_accuracy);
        j["h_frequency"] = nlohmann::ordered_json::array();
        for (const auto& h : s.h_frequency) j["h_frequency"].push_back(ms_json(h));
        j["detection_rate"] = round12(s.detection_rate);
        out.json.push_back(std::move(j));
    }
    out.csv = std::move(csv);
    return out;
}

inline nlohmann::ordered_json scenario_json(const Scenario& s) {
    nlohmann::ordered_json j;
    j["attack"] = std::string(to_string(s.attack));
    j["n_agents"] = s.protocol.n_agents;
    j["rounds"] = s.protocol.rounds;
    j["p_control"] = round12(s.protocol.p_control);
    j["p_hadamard"] = round12(s.protocol.p_hadamard);
    j["p_legal"] = round12(s.p_legal);
    j["alpha"] = round12(s.alpha);
    j["replicates"] = s.replicates;
    j["seed"] = s.protocol.seed;
    j["output_path"] = s.output_path;
    return j;
}

inline std::string report_json(const Scenario& s, const std::vector<ReportRow>& rows) {
    const int n = detail::max_agents(rows);
    nlohmann::ordered_json j;
    j["scenario"] = scenario_json(s);
    j["seed_derivation"] = "replicate i uses seed + i";
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) j["rows"].push_back(row_json(r, n));
    j["summary"] = emit_summary(rows).json;
    return j.dump(2) + "\n";
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

/// Writes report.csv, report.json and summary.txt into dir.
inline void write_reports(const std::filesystem::path& dir, const Scenario& s, const std::vector<ReportRow>& rows) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    write_text_file(dir / "report.csv", report_csv(rows));
    write_text_file(dir / "report.json", report_json(s, rows));
    write_text_file(dir / "summary.txt", emit_summary(rows).text);
}

/// Runs all replicates and writes the three report files to output_path.
inline std::vector<ReportRow> run_scenario(const Scenario& s, const std::string& scenario_id = "scenario",
                                           unsigned threads = 1) {
    auto rows = compute_rows(s, scenario_id, threads);
    write_reports(s.output_path, s, rows);
    return rows;
}

}  // namespace qssim

#endif  // QSSIM_HARNESS_HPP
