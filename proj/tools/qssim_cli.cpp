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

// qssim command line: run scenarios, sweep a parameter, run the selftest.
//
// Exit codes: 0 success, 1 config error, 2 runtime error, 3 selftest failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qssim/harness.hpp"
#include "qssim/qssim.hpp"
#include "qssim/selftest.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitSelftest = 3;

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<std::string> split_values(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string scenario_id_for(const std::filesystem::path& file) { return file.stem().string(); }

int cmd_run(const std::string& file, const std::optional<std::string>& out_dir,
            const std::optional<std::uint64_t>& seed) {
    qssim::Scenario s = qssim::load_scenario(file);
    if (out_dir) s.output_path = *out_dir;
    if (seed) s.protocol.seed = *seed;
    const auto rows = qssim::run_scenario(s, scenario_id_for(file), worker_count());
    std::cout << qssim::emit_summary(rows).text;
    std::cout << "wrote " << (std::filesystem::path(s.output_path) / "report.csv").string() << ", report.json, summary.txt\n";
    return 0;
}

int cmd_sweep(const std::string& file, const std::string& vary, const std::optional<std::string>& out_dir,
              const std::optional<std::uint64_t>& seed) {
    const qssim::Scenario base = qssim::load_scenario(file);
    const auto eq = vary.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw qssim::ConfigError("--vary expects key=v1,v2,... got '" + vary + "'");
    }
    const std::string key = vary.substr(0, eq);
    const auto values = split_values(vary.substr(eq + 1));
    if (values.empty()) throw qssim::ConfigError("--vary lists no values", 0, key);

    const std::filesystem::path root = out_dir ? *out_dir : base.output_path;
    std::vector<qssim::ReportRow> all;
    for (const auto& v : values) {
        qssim::Scenario s = base;
        qssim::apply_setting(s, key, v);
        if (seed) s.protocol.seed = *seed;
        s.output_path = (root / (key + "-" + v)).string();
        auto rows = qssim::run_scenario(s, key + "=" + v, worker_count());
        all.insert(all.end(), rows.begin(), rows.end());
    }
    const auto summary = qssim::emit_summary(all);
    qssim::write_text_file(root / "sweep_summary.txt", summary.text);
    qssim::write_text_file(root / "sweep_summary.csv", summary.csv);
    std::cout << summary.text;
    return 0;
}

int cmd_selftest() {
    bool ok = true;
    for (const auto& c : qssim::run_selftest()) {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << "\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qssim: multiparty quantum secret sharing attack simulator"};
    app.set_version_flag("--version", std::string(qssim::kVersion));
    app.require_subcommand(1);

    std::string run_file;
    std::optional<std::string> run_out;
    std::optional<std::uint64_t> run_seed;
    auto* run = app.add_subcommand("run", "Run every replicate of a scenario and write reports");
    run->add_option("scenario-file", run_file, "Scenario config (key = value)")->required();
    run->add_option("--out", run_out, "Output directory (overrides output_path)");
    run->add_option("--seed", run_seed, "Base seed (overrides seed)");

    std::string sweep_file, sweep_vary;
    std::optional<std::string> sweep_out;
    std::optional<std::uint64_t> sweep_seed;
    auto* sweep = app.add_subcommand("sweep", "Run a scenario once per value of one key");
    sweep->add_option("scenario-file", sweep_file, "Scenario config (key = value)")->required();
    sweep->add_option("--vary", sweep_vary, "key=v1,v2,...")->required();
    sweep->add_option("--out", sweep_out, "Output root directory");
    sweep->add_option("--seed", sweep_seed, "Base seed (overrides seed)");

    auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_file, run_out, run_seed);
        if (*sweep) return cmd_sweep(sweep_file, sweep_vary, sweep_out, sweep_seed);
        if (*selftest) return cmd_selftest();
    } catch (const qssim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
