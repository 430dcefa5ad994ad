// Copyright 2026 The hampart Authors
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

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hampart/baranyai.hpp"
#include "hampart/diag_circuit.hpp"
#include "hampart/estimator.hpp"
#include "hampart/fermion_jw.hpp"
#include "hampart/ham_io.hpp"
#include "hampart/spin_groups.hpp"
#include "json.hpp"

namespace hampart::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

struct RunConfig {
    std::string input;
    std::string format = "auto";
    std::string groups;
    double threshold = kDefaultThreshold;
    std::string out;
    std::uint64_t seed = 7;
    std::uint64_t shots = 10000;
    std::string sweep;
    std::string kind = "dense";
    int width = 2;
    int qubits = 0;
};

class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct Sweep {
    int first = 0;
    int last = 0;
    int step = 1;
};

inline Sweep parse_sweep(const std::string& text) {
    Sweep s;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> s.first >> c1 >> s.last >> c2 >> s.step) || c1 != ':' || c2 != ':' || !in.eof()) {
        throw InputError("--sweep must look like a:b:step, got '" + text + "'");
    }
    if (s.first < 2 || s.last < s.first || s.step < 1) throw InputError("invalid sweep range '" + text + "'");
    if (s.first % 2 != 0 || s.step % 2 != 0) throw InputError("sweep qubit counts must be even");
    return s;
}

inline SynthKind parse_kind(const std::string& k) {
    if (k == "dense") return SynthKind::dense;
    if (k == "chain") return SynthKind::chain;
    throw InputError("--kind must be dense or chain");
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

inline HamiltonianSpec synth_from_config(const RunConfig& cfg) {
    if (cfg.qubits < 2 || cfg.qubits % 2 != 0) throw InputError("--qubits must be an even number >= 2");
    return synth_hamiltonian({parse_kind(cfg.kind), cfg.qubits / 2, cfg.width, cfg.seed});
}

struct LoadedHamiltonian {
    std::string source;
    HamiltonianSpec spec;
};

/// Exactly one of --input and --qubits (synthetic) selects the Hamiltonian.
inline std::optional<LoadedHamiltonian> load_hamiltonian(const RunConfig& cfg, bool required) {
    bool have_file = !cfg.input.empty();
    bool have_synth = cfg.qubits != 0;
    if (have_file && have_synth) throw InputError("give either --input or --qubits, not both");
    if (!have_file && !have_synth) {
        if (required) throw InputError("no input: pass --input FILE or --qubits N");
        return std::nullopt;
    }
    if (have_synth) {
        return LoadedHamiltonian{"synth-" + cfg.kind + "-" + std::to_string(cfg.qubits), synth_from_config(cfg)};
    }
    std::string fmt = cfg.format;
    if (fmt == "auto") fmt = std::filesystem::path(cfg.input).extension() == ".json" ? "json" : "fcidump";
    std::string text = read_file(cfg.input);
    LoadedHamiltonian h{std::filesystem::path(cfg.input).stem().string(), {}};
    try {
        if (fmt == "fcidump") {
            h.spec = parse_fcidump(text);
        } else if (fmt == "json") {
            h.spec = hamiltonian_from_json(nlohmann::json::parse(text));
        } else {
            throw InputError("--format must be fcidump or json");
        }
    } catch (const ParseError& e) {
        throw InputError(cfg.input + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(cfg.input + ": " + e.what());
    }
    return h;
}

inline Partition load_groups(const std::string& path) {
    try {
        return partition_from_json(nlohmann::json::parse(read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void print_summary(std::ostream& out, const std::string& source, const Partition& p) {
    out << "source=" << source << " n_qubits=" << p.n_qubits << " n_strings=" << p.string_count()
        << " n_groups=" << p.groups.size();
    for (auto s : {GroupSector::diagonal, GroupSector::pure_spin_double, GroupSector::cross_double,
                   GroupSector::triple_blue, GroupSector::triple_red}) {
        std::string key(sector_name(s));
        std::replace(key.begin(), key.end(), '-', '_');
        out << ' ' << key << '=' << p.count(s);
    }
    out << '\n';
}

inline int cmd_group(const RunConfig& cfg, std::ostream& out) {
    auto h = load_hamiltonian(cfg, true);
    auto part = partition_hamiltonian(to_qubit_hamiltonian(h->spec, cfg.threshold), cfg.threshold);
    if (!cfg.out.empty()) write_file((std::filesystem::path(cfg.out) / "groups.json").string(), to_json(part).dump(1));
    print_summary(out, h->source, part);
    return kOk;
}

inline int cmd_stats(const RunConfig& cfg, std::ostream& out) {
    if (cfg.sweep.empty()) throw InputError("stats needs --sweep a:b:step");
    auto sweep = parse_sweep(cfg.sweep);
    auto kind = parse_kind(cfg.kind);
    std::ostringstream csv;
    csv << "n_qubits,n_strings,n_groups,wall_time_ms\n";
    for (int n = sweep.first; n <= sweep.last; n += sweep.step) {
        auto t0 = std::chrono::steady_clock::now();
        auto spec = synth_hamiltonian({kind, n / 2, cfg.width, cfg.seed});
        auto part = partition_hamiltonian(to_qubit_hamiltonian(spec, cfg.threshold), cfg.threshold);
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        csv << n << ',' << part.string_count() << ',' << part.groups.size() << ',' << std::fixed
            << std::setprecision(3) << ms << std::defaultfloat << '\n';
    }
    if (cfg.out.empty()) {
        out << csv.str();
    } else {
        write_file(cfg.out, csv.str());
        out << "wrote " << cfg.out << '\n';
    }
    return kOk;
}

inline Partition partition_from_config(const RunConfig& cfg, std::string& source) {
    if (!cfg.groups.empty()) {
        if (!cfg.input.empty() || cfg.qubits != 0) throw InputError("give either --groups or a Hamiltonian, not both");
        source = std::filesystem::path(cfg.groups).stem().string();
        return load_groups(cfg.groups);
    }
    auto h = load_hamiltonian(cfg, true);
    source = h->source;
    return partition_hamiltonian(to_qubit_hamiltonian(h->spec, cfg.threshold), cfg.threshold);
}

inline int cmd_circuits(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::string source;
    Partition part = partition_from_config(cfg, source);
    nlohmann::json circuits = nlohmann::json::array();
    std::size_t max_gates = 0;
    bool ok = true;
    for (std::size_t gi = 0; gi < part.groups.size(); ++gi) {
        const auto& g = part.groups[gi];
        std::vector<PauliString> ps;
        for (const auto& wp : g.strings()) ps.push_back(wp.string);
        Diagonalization d;
        try {
            d = diagonalize_strings(ps, part.n_qubits);
        } catch (const DiagonalizationError& e) {
            err << "group " << gi << ": " << e.what() << '\n';
            ok = false;
            continue;
        }
        auto rep = verify_diagonalization(ps, d.circuit);
        for (const auto& f : rep.failures) err << "group " << gi << ": " << f << '\n';
        ok = ok && rep.ok();
        max_gates = std::max(max_gates, d.circuit.gates.size());
        if (d.circuit.gates.empty()) continue;
        circuits.push_back({{"group", gi},
                            {"sector", std::string(sector_name(g.sector))},
                            {"gate_count", d.circuit.gates.size()},
                            {"within_bound", rep.within_bound},
                            {"circuit", to_json(d.circuit)},
                            {"qasm", to_qasm_like(d.circuit)}});
    }
    nlohmann::json doc{{"n_qubits", part.n_qubits},
                       {"gate_bound", 3 * part.n_qubits},
                       {"max_gate_count", max_gates},
                       {"circuits", circuits}};
    if (!cfg.out.empty()) write_file((std::filesystem::path(cfg.out) / "circuits.json").string(), doc.dump(1));
    out << "source=" << source << " n_qubits=" << part.n_qubits << " n_groups=" << part.groups.size()
        << " n_circuits=" << circuits.size() << " max_gates=" << max_gates << " gate_bound=" << 3 * part.n_qubits
        << " status=" << (ok ? "pass" : "fail") << '\n';
    if (cfg.out.empty()) {
        for (const auto& c : circuits) {
            out << "# group " << c["group"].get<std::size_t>() << " (" << c["sector"].get<std::string>() << ", "
                << c["gate_count"].get<std::size_t>() << " gates)\n"
                << c["qasm"].get<std::string>();
        }
    }
    return ok ? kOk : kCheckFailed;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    std::string source;
    std::optional<LoadedHamiltonian> ham;
    Partition part;
    if (!cfg.groups.empty()) {
        source = std::filesystem::path(cfg.groups).stem().string();
        part = load_groups(cfg.groups);
        ham = load_hamiltonian(cfg, false);
    } else {
        ham = load_hamiltonian(cfg, true);
        source = ham->source;
        part = partition_hamiltonian(to_qubit_hamiltonian(ham->spec, cfg.threshold), cfg.threshold);
    }
    if (part.n_qubits > kMaxStateQubits) {
        throw InputError("verify supports at most " + std::to_string(kMaxStateQubits) + " qubits");
    }
    bool all_ok = true;
    auto report = [&](const std::string& check, bool ok, const std::string& detail) {
        all_ok = all_ok && ok;
        out << "check=" << check << " status=" << (ok ? "pass" : "fail");
        if (!detail.empty()) out << ' ' << detail;
        out << '\n';
    };

    // Commutation.
    {
        std::string bad;
        for (std::size_t gi = 0; gi < part.groups.size() && bad.empty(); ++gi) {
            auto s = part.groups[gi].strings();
            if (auto p = first_anticommuting_pair(s)) {
                bad = "group=" + std::to_string(gi) + " pair=" + s[p->first].string.label() + "," +
                      s[p->second].string.label();
            }
        }
        report("commutation", bad.empty(), bad.empty() ? "groups=" + std::to_string(part.groups.size()) : bad);
    }

    // Diagonalization.
    MeasurementPlan plan;
    plan.n_qubits = part.n_qubits;
    bool diag_ok = true;
    {
        std::string detail;
        std::size_t max_gates = 0;
        for (std::size_t gi = 0; gi < part.groups.size(); ++gi) {
            auto ws = part.groups[gi].strings();
            std::vector<PauliString> ps;
            for (const auto& wp : ws) ps.push_back(wp.string);
            try {
                auto d = diagonalize_strings(ps, part.n_qubits);
                auto rep = verify_diagonalization(ps, d.circuit);
                max_gates = std::max(max_gates, d.circuit.gates.size());
                if (!rep.ok()) {
                    diag_ok = false;
                    if (detail.empty()) detail = "group=" + std::to_string(gi);
                }
                GroupMeasurement gm{part.groups[gi].sector, part.groups[gi].schedule_id, d.circuit, {}, rep.ok()};
                for (std::size_t i = 0; i < ws.size(); ++i) {
                    gm.terms.push_back(
                        {ws[i].string, ws[i].weight, d.form.entries[i].diagonal, d.form.entries[i].sign});
                }
                plan.groups.push_back(std::move(gm));
            } catch (const DiagonalizationError&) {
                diag_ok = false;
                if (detail.empty()) detail = "group=" + std::to_string(gi);
            }
        }
        if (detail.empty()) {
            detail = "max_gates=" + std::to_string(max_gates) + " bound=" + std::to_string(3 * part.n_qubits);
        }
        report("diagonalization", diag_ok, detail);
    }

    // Direct reference: the Hamiltonian when available, else the union of groups.
    PauliSum reference;
    if (ham) {
        auto q = to_qubit_hamiltonian(ham->spec, cfg.threshold);
        if (q.n_qubits != part.n_qubits) throw InputError("groups and Hamiltonian have different qubit counts");
        reference = expand_terms(q.terms, q.n_qubits, q.constant);
        PauliSum grouped;
        for (const auto& g : part.groups) {
            for (const auto& wp : g.strings()) grouped[wp.string] += wp.weight;
        }
        double worst = 0;
        for (const auto& [p, w] : reference) {
            auto it = grouped.find(p);
            worst = std::max(worst, std::abs(w - (it == grouped.end() ? 0.0 : it->second)));
        }
        for (const auto& [p, w] : grouped) {
            if (!reference.count(p)) worst = std::max(worst, std::abs(w));
        }
        bool ok = worst <= std::max(cfg.threshold, 1e-12) * 10;
        std::ostringstream d;
        d << "max_weight_diff=" << worst;
        report("conservation", ok, d.str());
    } else {
        for (const auto& g : part.groups) {
            for (const auto& wp : g.strings()) reference[wp.string] += wp.weight;
        }
    }

    if (!diag_ok) {
        report("expectation_exact", false, "skipped=diagonalization_failed");
        report("expectation_sampled", false, "skipped=diagonalization_failed");
    } else {
        StateVector psi = StateVector::random(part.n_qubits, cfg.seed);
        double direct = expectation_direct(reference, psi);
        double grouped = expectation_grouped(plan, psi);
        std::ostringstream d;
        d << std::setprecision(12) << "direct=" << direct << " grouped=" << grouped
          << " abs_diff=" << std::abs(direct - grouped);
        report("expectation_exact", std::abs(direct - grouped) < 1e-9, d.str());

        auto est = sample_grouped(plan, psi, std::max<std::uint64_t>(cfg.shots, 2), cfg.seed);
        double dev = std::abs(est.estimate - grouped);
        std::ostringstream ds;
        ds << std::setprecision(8) << "estimate=" << est.estimate << " std_error=" << est.std_error
           << " shots_per_group=" << std::max<std::uint64_t>(cfg.shots, 2);
        report("expectation_sampled", dev <= 5 * est.std_error + 1e-9, ds.str());
    }
    out << "source=" << source << " result=" << (all_ok ? "pass" : "fail") << '\n';
    return all_ok ? kOk : kCheckFailed;
}

inline int cmd_synth(const RunConfig& cfg, std::ostream& out) {
    auto spec = synth_from_config(cfg);
    std::string fmt = cfg.format == "auto" ? "json" : cfg.format;
    std::string text;
    if (fmt == "json") {
        text = to_json(spec).dump(1) + "\n";
    } else if (fmt == "fcidump") {
        text = write_fcidump(spec);
    } else {
        throw InputError("--format must be fcidump or json");
    }
    if (cfg.out.empty()) {
        out << text;
    } else {
        write_file(cfg.out, text);
        out << "wrote " << cfg.out << '\n';
    }
    return kOk;
}

/// Parses argv and dispatches. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Measurement grouping and diagonalization for qubit Hamiltonians", "hampart"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "Hamiltonian file (FCIDUMP or JSON)");
        sub->add_option("--format", cfg.format, "Input format")->check(CLI::IsMember({"auto", "fcidump", "json"}));
        sub->add_option("--qubits", cfg.qubits, "Use a synthetic Hamiltonian on this many qubits");
        sub->add_option("--kind", cfg.kind, "Synthetic kind")->check(CLI::IsMember({"dense", "chain"}));
        sub->add_option("--width", cfg.width, "Chain width for --kind chain");
        sub->add_option("--seed", cfg.seed, "Random seed");
        sub->add_option("--threshold", cfg.threshold, "Drop coefficients with magnitude below this");
    };

    auto* group = app.add_subcommand("group", "Partition a Hamiltonian into commuting groups");
    add_input(group);
    group->add_option("--out", cfg.out, "Directory for groups.json");

    auto* stats = app.add_subcommand("stats", "Group counts over a synthetic size sweep (CSV)");
    stats->add_option("--sweep", cfg.sweep, "Qubit range a:b:step")->required();
    stats->add_option("--kind", cfg.kind, "Synthetic kind")->check(CLI::IsMember({"dense", "chain"}));
    stats->add_option("--width", cfg.width, "Chain width for --kind chain");
    stats->add_option("--seed", cfg.seed, "Random seed");
    stats->add_option("--threshold", cfg.threshold, "Drop coefficients with magnitude below this");
    stats->add_option("--out", cfg.out, "CSV output file");

    auto* circuits = app.add_subcommand("circuits", "Diagonalizing circuit per group");
    add_input(circuits);
    circuits->add_option("--groups", cfg.groups, "Groups JSON instead of a Hamiltonian");
    circuits->add_option("--out", cfg.out, "Directory for circuits.json");

    auto* verify = app.add_subcommand("verify", "Check groups, circuits and expectation values");
    add_input(verify);
    verify->add_option("--groups", cfg.groups, "Groups JSON to verify");
    verify->add_option("--shots", cfg.shots, "Shots per group for the sampled check");

    auto* synth = app.add_subcommand("synth", "Write a synthetic Hamiltonian");
    synth->add_option("--qubits", cfg.qubits, "Qubit count (even)")->required();
    synth->add_option("--kind", cfg.kind, "Synthetic kind")->check(CLI::IsMember({"dense", "chain"}));
    synth->add_option("--width", cfg.width, "Chain width for --kind chain");
    synth->add_option("--seed", cfg.seed, "Random seed");
    synth->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"auto", "fcidump", "json"}));
    synth->add_option("--out", cfg.out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*group) return cmd_group(cfg, out);
        if (*stats) return cmd_stats(cfg, out);
        if (*circuits) return cmd_circuits(cfg, out, err);
        if (*verify) return cmd_verify(cfg, out);
        if (*synth) return cmd_synth(cfg, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kUsage;
}

}  // namespace hampart::cli
