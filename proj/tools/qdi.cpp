// Copyright 2026 The qdi Authors
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

// qdi: command-line front end.
//
// Exit codes: 0 success, 2 usage or input error, 3 verification or
// convergence failure.

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <pthread.h>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "qdi/qdi.hpp"
#include "qdi/service.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kFailed = 3;

using qdi::io::json;

/// Writes to --output when given, stdout otherwise.
int emit(const std::string &path, const std::string &text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return kOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << '\n';
        return kUsage;
    }
    out << text;
    return kOk;
}

std::string num(double x) { return json(x).dump(); }

struct SimulateArgs {
    std::string scenario = "table1-pair";
    std::string script;
    std::string mode = "interaction";
    std::size_t trials = 1000;
    std::size_t dim = 3;
    bool no_events = false;
};

int cmd_simulate(const SimulateArgs &a, std::uint64_t seed, const std::string &format, const std::string &output) {
    auto scenario = qdi::find_builtin_scenario(a.scenario, a.dim);
    if (!scenario) {
        std::cerr << "error: unknown scenario '" << a.scenario << "' (expected table1-pair, spin-zx or fourier-n)\n";
        return kUsage;
    }
    auto report = qdi::run(*scenario, qdi::ExperimentScript::parse(a.script), qdi::parse_mode(a.mode), a.trials, seed);

    std::ostringstream os;
    if (format == "json") {
        os << qdi::io::to_json(report, !a.no_events).dump(2) << '\n';
    } else if (format == "csv") {
        os << "# qdi simulate scenario=" << report.scenario << " mode=" << qdi::to_string(report.mode)
           << " trials=" << report.trials << " seed=" << report.seed << '\n';
        qdi::io::write_csv(os, report);
    } else {
        os << "# qdi simulate scenario=" << report.scenario << " mode=" << qdi::to_string(report.mode)
           << " trials=" << report.trials << " seed=" << report.seed << '\n';
        for (std::size_t s = 0; s < report.script.size(); ++s) {
            os << "step " << s << " " << report.script[s] << ":";
            for (std::size_t k = 0; k < report.step_labels[s].size(); ++k) {
                os << "  " << report.step_labels[s][k] << "=" << num(report.step_frequencies[s][k]);
            }
            os << '\n';
        }
        for (const auto &[key, stat] : report.invalidation) {
            os << "invalidation " << key << ": " << num(stat.rate()) << " (" << stat.invalidations << "/"
               << stat.opportunities << ")\n";
        }
        for (const auto &[key, tv] : report.order_effect) os << "order effect " << key << ": " << num(tv) << '\n';
        os << "total invalidations: " << report.total_invalidations << '\n';
    }
    return emit(output, os.str());
}

int cmd_verify(const std::string &suite, const std::string &format, const std::string &output) {
    auto results = qdi::verify::run_suite(suite);
    bool all = true;
    std::ostringstream os;
    json checks = json::array();
    for (const auto &r : results) {
        all = all && r.passed;
        checks.push_back({{"suite", r.suite}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        if (format != "json") {
            os << (r.passed ? "PASS" : "FAIL") << "  [" << r.suite << "] " << r.name;
            if (!r.detail.empty()) os << "  (" << r.detail << ")";
            os << '\n';
        }
    }
    if (format == "json") {
        os << json{{"kind", "verify"}, {"suite", suite}, {"checks", checks}, {"passed", all}}.dump(2) << '\n';
    }
    int rc = emit(output, os.str());
    return rc != kOk ? rc : (all ? kOk : kFailed);
}

int cmd_spin(double step, const std::string &format, const std::string &output) {
    if (!(step > 0.0 && step <= 90.0)) {
        std::cerr << "error: --step must be in (0, 90]\n";
        return kUsage;
    }
    std::ostringstream os;
    json rows = json::array();
    if (format != "json") os << "theta_physical,phase_space_angle,p_up,amp_up,amp_down\n";
    for (std::size_t k = 0;; ++k) {
        const double theta = static_cast<double>(k) * step;
        if (theta > 720.0 + 1e-9) break;
        const auto v = qdi::spin_state(theta);
        const double p = qdi::spin_transition(theta);
        if (format == "json") {
            rows.push_back({{"theta_physical", theta},
                            {"phase_space_angle", theta / 2.0},
                            {"p_up", p},
                            {"amp_up", v[0].real()},
                            {"amp_down", v[1].real()}});
        } else {
            os << num(theta) << ',' << num(theta / 2.0) << ',' << num(p) << ',' << num(v[0].real()) << ','
               << num(v[1].real()) << '\n';
        }
    }
    if (format == "json") {
        os << json{{"kind", "spin"}, {"parameters", {{"step_degrees", step}}}, {"rows", rows}}.dump(2) << '\n';
    }
    return emit(output, os.str());
}

int cmd_phase_retrieve(const std::string &input, std::size_t restarts, std::uint64_t seed, const std::string &format,
                       const std::string &output) {
    std::ifstream in(input);
    if (!in) {
        std::cerr << "error: cannot read " << input << '\n';
        return kUsage;
    }
    qdi::PhaseRetrievalProblem problem;
    try {
        problem = qdi::io::phase_problem_from_json(json::parse(in));
    } catch (const json::exception &e) {
        std::cerr << "error: malformed problem: " << e.what() << '\n';
        return kUsage;
    }
    qdi::RandomStream rng(seed);
    auto solution = qdi::retrieve_phases(problem, restarts, rng);
    std::ostringstream os;
    if (format == "json") {
        os << qdi::io::to_json(solution, problem, restarts, seed).dump(2) << '\n';
    } else {
        os << "# qdi phase-retrieve seed=" << seed << " restarts=" << restarts << '\n';
        os << "phases:";
        for (double phi : solution.phases) os << ' ' << num(phi);
        os << "\nresidual: " << num(solution.residual) << "\nconverged: " << (solution.converged ? "yes" : "no")
           << '\n';
    }
    int rc = emit(output, os.str());
    return rc != kOk ? rc : (solution.converged ? kOk : kFailed);
}

struct ServeArgs {
    std::string host = "0.0.0.0";
    int port = 8080;
    bool reveal_state = false;
    std::string snapshot;
    std::string static_dir;
};

int cmd_serve(const ServeArgs &a) {
    // Block termination signals here so every server thread inherits the mask
    // and a dedicated thread can wait for them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    qdi::SessionStore store(a.reveal_state);
    if (!a.snapshot.empty()) store.load_snapshot(a.snapshot);

    httplib::Server server;
    qdi::service::install_routes(server, store, &std::cerr);
    if (!a.static_dir.empty() && !server.set_mount_point("/", a.static_dir)) {
        std::cerr << "error: static directory " << a.static_dir << " not found\n";
        return kUsage;
    }
    if (!server.bind_to_port(a.host, a.port)) {
        std::cerr << "error: cannot bind " << a.host << ":" << a.port << '\n';
        return kUsage;
    }
    std::cerr << "qdi serve listening on " << a.host << ":" << a.port
              << (a.reveal_state ? " (state revealed)" : "") << '\n';

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    server.listen_after_bind();
    // If the listener ended on its own, wake the waiter so it can be joined.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();

    if (!a.snapshot.empty()) store.save_snapshot(a.snapshot);
    std::cerr << "qdi serve stopped\n";
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Discrete-interaction quantum measurement simulator"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string format = "text";
    std::string output;
    auto add_common = [&](CLI::App *cmd, std::vector<std::string> formats) {
        cmd->add_option("--seed", seed, "random seed")->capture_default_str();
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember(formats));
        cmd->add_option("-o,--output", output, "write to this file instead of stdout");
    };

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Monte-Carlo run of a measurement script");
    simulate->add_option("--scenario", sim.scenario, "table1-pair, spin-zx or fourier-n")->capture_default_str();
    simulate->add_option("--script", sim.script, "comma-separated measurement names, e.g. A,B,A")->required();
    simulate->add_option("--mode", sim.mode, "observation or interaction")
        ->check(CLI::IsMember({"observation", "interaction"}))
        ->capture_default_str();
    simulate->add_option("--trials", sim.trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--dim", sim.dim, "dimension for fourier-n")->check(CLI::Range(2, 64))->capture_default_str();
    simulate->add_flag("--no-events", sim.no_events, "omit per-trial event logs from JSON");
    add_common(simulate, {"json", "csv", "text"});

    std::string suite = "all";
    auto *verify = app.add_subcommand("verify", "run invariant suites");
    verify->add_option("--suite", suite, "all, born, mub, real-search, phase, spin or simulator")
        ->check(CLI::IsMember({"all", "born", "mub", "real-search", "phase", "spin", "simulator"}))
        ->capture_default_str();
    add_common(verify, {"json", "text"});

    double step = 15.0;
    auto *spin = app.add_subcommand("spin", "half-angle table over two full turns");
    spin->add_option("--step", step, "step in physical degrees, (0, 90]")->capture_default_str();
    add_common(spin, {"json", "csv", "text"});

    std::string input;
    std::size_t restarts = 50;
    auto *phase = app.add_subcommand("phase-retrieve", "recover phases from two moduli distributions");
    phase->add_option("--input", input, "problem JSON")->required();
    phase->add_option("--restarts", restarts, "random starts")->check(CLI::PositiveNumber)->capture_default_str();
    add_common(phase, {"json", "text"});

    ServeArgs serve_args;
    auto *serve = app.add_subcommand("serve", "host the session API");
    serve->add_option("--host", serve_args.host)->capture_default_str();
    serve->add_option("--port", serve_args.port)->check(CLI::Range(1, 65535))->capture_default_str();
    serve->add_flag("--reveal-state", serve_args.reveal_state, "include hidden state vectors in responses");
    serve->add_option("--snapshot", serve_args.snapshot, "load sessions from and save them to this JSON file");
    serve->add_option("--static-dir", serve_args.static_dir, "serve web UI assets from this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*simulate) return cmd_simulate(sim, seed, format, output);
        if (*verify) return cmd_verify(suite, format, output);
        if (*spin) return cmd_spin(step, format == "text" ? "csv" : format, output);
        if (*phase) return cmd_phase_retrieve(input, restarts, seed, format, output);
        if (*serve) return cmd_serve(serve_args);
    } catch (const qdi::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
