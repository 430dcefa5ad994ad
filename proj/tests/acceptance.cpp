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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.
//
// Usage: hampart_acceptance [external.fcidump ...]
// Extra FCIDUMP files may also be listed, colon separated, in
// HAMPART_EXTERNAL_FCIDUMP.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "hampart/hampart.hpp"
#include "oracle.hpp"

using namespace hampart;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::string reasons;

    void fail(const std::string& why) {
        reasons += (pass ? "" : "; ") + why;
        pass = false;
    }
};

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string data(const char* name) { return std::string(HAMPART_DATA_DIR) + "/" + name; }

// Binomial in floating point, independent of the library's integer version.
double choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

double expected_classes(int n, int k) {
    int r = n % k;
    return r == 0 ? choose(n - 1, k - 1) : choose(n + k - r - 1, k - 1);
}

std::vector<Subset> all_subsets(int n, int k) {
    std::vector<Subset> out;
    std::vector<bool> mask(static_cast<std::size_t>(n), false);
    std::fill(mask.begin(), mask.begin() + k, true);
    do {
        Subset s;
        for (int i = 0; i < n; ++i) {
            if (mask[static_cast<std::size_t>(i)]) s.push_back(i);
        }
        out.push_back(s);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

// Every k-subset of the ground set once; every class a perfect cover.
std::string check_schedule(const SubsetSchedule& s) {
    std::set<Subset> seen;
    for (const auto& cls : s.classes) {
        std::vector<int> hits(static_cast<std::size_t>(s.n), 0);
        for (const auto& sub : cls) {
            if (static_cast<int>(sub.size()) != s.k) return "wrong subset size";
            if (!seen.insert(sub).second) return "subset repeated";
            for (int e : sub) {
                if (e < 0 || e >= s.n) return "element out of range";
                ++hits[static_cast<std::size_t>(e)];
            }
        }
        for (int h : hits) {
            if (h != 1) return "class is not a perfect cover";
        }
    }
    if (static_cast<double>(seen.size()) != choose(s.n, s.k)) return "subsets missing";
    return "";
}

// Group strings summed back must equal the full Pauli expansion.
std::string check_conservation(const Partition& p, const SpinOrbitalHamiltonian& h) {
    auto expected = expand_terms(h.terms, h.n_qubits, h.constant);
    PauliSum got;
    for (const auto& g : p.groups) {
        for (const auto& s : g.strings()) accumulate(got, s);
    }
    for (const auto& [str, w] : expected) {
        auto it = got.find(str);
        double have = it == got.end() ? 0.0 : it->second;
        if (std::abs(have - w) > 1e-10) return "weight mismatch on " + str.label();
    }
    for (const auto& [str, w] : got) {
        if (!expected.count(str) && std::abs(w) > 1e-10) return "extra string " + str.label();
    }
    return "";
}

std::string check_commuting(const Partition& p) {
    for (std::size_t i = 0; i < p.groups.size(); ++i) {
        auto s = p.groups[i].strings();
        if (auto bad = first_anticommuting_pair(s)) {
            return "group " + std::to_string(i) + " has anticommuting " + s[bad->first].string.label() + "," +
                   s[bad->second].string.label();
        }
    }
    return "";
}

// Each term X-free after its circuit, circuit within 3N generator gates.
std::string check_plan(const MeasurementPlan& plan) {
    for (std::size_t i = 0; i < plan.groups.size(); ++i) {
        const auto& g = plan.groups[i];
        if (!g.verified) return "group " + std::to_string(i) + " unverified";
        if (g.circuit.gates.size() > 3 * plan.n_qubits) return "group " + std::to_string(i) + " exceeds 3N gates";
        for (const auto& t : g.terms) {
            auto conj = apply_circuit(t.original, g.circuit);
            if (!conj.is_diagonal()) return "group " + std::to_string(i) + " leaves X on " + t.original.label();
            if (conj.hermitian_form() != t.diagonal || (t.sign != 1 && t.sign != -1)) {
                return "group " + std::to_string(i) + " recorded diagonal differs for " + t.original.label();
            }
        }
    }
    return "";
}

// Largest |w<P>| measured term; flipping its sign must move the estimate.
MeasuredTerm* heaviest_term(MeasurementPlan& plan, const StateVector& psi) {
    MeasuredTerm* target = nullptr;
    double best = -1;
    for (auto& g : plan.groups) {
        for (auto& t : g.terms) {
            if (t.original.is_identity()) continue;
            double v = std::abs(t.weight * psi.expectation(t.original).real());
            if (v > best) {
                best = v;
                target = &t;
            }
        }
    }
    return target;
}

std::string check_estimates(MeasurementPlan plan, const SpinOrbitalHamiltonian& h, std::uint64_t seed) {
    auto psi = StateVector::random(h.n_qubits, seed);
    double direct = expectation_direct(expand_terms(h.terms, h.n_qubits, h.constant), psi);
    double grouped = expectation_grouped(plan, psi);
    if (!(std::abs(grouped - direct) < 1e-9)) {
        std::ostringstream os;
        os << "grouped-direct=" << grouped - direct;
        return os.str();
    }
    auto* t = heaviest_term(plan, psi);
    if (t) {
        t->sign = -t->sign;
        if (!(std::abs(expectation_grouped(plan, psi) - direct) > 1e-9)) return "sign flip went undetected";
    }
    return "";
}

// Conjugation identity U P U^dag = sign * D checked on a random state.
std::string check_conjugation_on_state(const MeasurementPlan& plan, std::uint64_t seed) {
    auto psi = StateVector::random(plan.n_qubits, seed);
    for (const auto& g : plan.groups) {
        auto rotated = psi;
        rotated.apply(g.circuit);
        for (const auto& t : g.terms) {
            double lhs = psi.expectation(t.original).real();
            double rhs = t.sign * rotated.expectation(t.diagonal).real();
            if (std::abs(lhs - rhs) > 1e-10) return "conjugation mismatch on " + t.original.label();
        }
    }
    return "";
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

SpinOrbitalHamiltonian load_h2() { return to_qubit_hamiltonian(parse_fcidump(read_text(data("h2_sto3g.fcidump")))); }

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
    auto t0 = Clock::now();
    auto h = load_h2();
    auto p = partition_hamiltonian(h);
    auto plan = build_measurement_plan(p);
    double secs = seconds_since(t0);
    auto n_strings = to_weighted(expand_terms(h.terms, h.n_qubits, h.constant), kDefaultThreshold).size();
    if (p.string_count() != n_strings) o.fail("grouped string count differs from expansion");
    o.detail << "n_qubits=" << h.n_qubits << " strings=" << n_strings << " groups=" << p.groups.size()
             << " time_s=" << secs;
    if (h.n_qubits != 4) o.fail("expected 4 qubits");
    if (n_strings != 15) o.fail("expected 15 strings, got " + std::to_string(n_strings));
    if (p.groups.size() > 5) o.fail("more than 5 groups");
    if (plan.groups.size() != p.groups.size()) o.fail("plan size differs");
    if (secs >= 1.0) o.fail("slower than 1 s");
}

void criterion2(Outcome& o) {
    auto t0 = Clock::now();
    int cases = 0;
    for (int k = 2; k <= 4; ++k) {
        for (int n = 4; n <= 12; ++n) {
            auto s = baranyai_partition(n, k);
            ++cases;
            std::string tag = "(n=" + std::to_string(n) + ",k=" + std::to_string(k) + ") ";
            if (auto err = check_schedule(s); !err.empty()) o.fail(tag + err);
            if (static_cast<double>(s.classes.size()) != expected_classes(n, k)) o.fail(tag + "class count");
            // Real subsets (within the original n) are covered exactly once.
            std::set<Subset> real;
            for (const auto& cls : s.classes) {
                for (const auto& sub : cls) {
                    if (sub.back() < n) real.insert(sub);
                }
            }
            if (static_cast<double>(real.size()) != choose(n, k)) o.fail(tag + "real subsets missing");
        }
    }
    double secs = seconds_since(t0);
    if (o.pass) o.detail << "cases=" << cases << " time_s=" << secs;
    if (secs >= 30) o.fail("slower than 30 s");
}

void criterion3(Outcome& o) {
    const auto& s = cached_schedule(8, 4);
    auto present = all_subsets(8, 4);
    std::shuffle(present.begin(), present.end(), std::mt19937_64(3));
    auto groups = greedy_pack(present, s);
    o.detail << "groups=" << groups.size();
    if (groups.size() != 35) o.fail("expected 35 groups, got " + std::to_string(groups.size()));
    if (groups != s.classes) o.fail("groups differ from the dense classes");
}

Partition dense16() { return partition_hamiltonian(to_qubit_hamiltonian(synth_hamiltonian({SynthKind::dense, 8}))); }

void criterion4(Outcome& o) {
    auto p = dense16();
    auto pure = p.count(GroupSector::pure_spin_double);
    auto cross = p.count(GroupSector::cross_double);
    auto base = unfactorized_double_count(16);
    o.detail << "pure_spin=" << pure << " cross=" << cross << " doubles=" << pure + cross << " unfactorized=" << base
             << " ratio=" << static_cast<double>(base) / static_cast<double>(pure + cross);
    if (pure != 35 || cross != 196) o.fail("expected 35 pure-spin and 196 cross groups");
    if (base != 455) o.fail("expected 455 unfactorized classes");
    if (spin_predicted_counts(16) != 231) o.fail("prediction is not 231");
}

void criterion5(Outcome& o) {
    std::size_t groups = 0;
    std::vector<Partition> parts{partition_hamiltonian(load_h2()), dense16(),
                                 partition_hamiltonian(to_qubit_hamiltonian(synth_hamiltonian({SynthKind::dense, 4})))};
    for (const auto& p : parts) {
        auto plan = build_measurement_plan(p);
        groups += plan.groups.size();
        if (auto err = check_plan(plan); !err.empty()) o.fail("N=" + std::to_string(p.n_qubits) + ": " + err);
    }
    std::vector<PauliString> pair{PauliString::from_labels("IIYYXXII"), PauliString::from_labels("XXZZZZYY")};
    auto d1 = diagonalize_strings(pair, 8);
    if (d1.form.entries.size() != 2 || d1.form.entries[0].diagonal.label() != "IIZIIZII" ||
        d1.form.entries[1].diagonal.label() != "IIZIZIZZ") {
        o.fail("pair example diagonal strings differ");
    }
    std::vector<PauliString> gens{PauliString::from_labels("XXI"), PauliString::from_labels("XIX"),
                                  PauliString::from_labels("ZZZ")};
    auto d2 = diagonalize_strings(gens, 3);
    std::set<std::string> got;
    for (const auto& e : d2.form.entries) got.insert(e.diagonal.label());
    if (got != std::set<std::string>{"IZI", "ZII", "IIZ"}) o.fail("generator example diagonal strings differ");
    if (o.pass) o.detail << "groups_checked=" << groups << " examples=2";
}

void criterion6(Outcome& o) {
    std::size_t checked = 0, bad = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<CliffordGate> gates;
        for (std::size_t q = 0; q < n; ++q) {
            gates.push_back(CliffordGate::h(q));
            gates.push_back(CliffordGate::rx90(q));
            for (std::size_t t = 0; t < n; ++t) {
                if (t != q) gates.push_back(CliffordGate::cnot(q, t));
            }
        }
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 4;
        for (const auto& g : gates) {
            oracle::Mat u = oracle::gate_matrix(g, n);
            for (std::size_t code = 0; code < total; ++code) {
                std::string label;
                for (std::size_t q = 0, c = code; q < n; ++q, c /= 4) label += "IXYZ"[c % 4];
                for (int phase = 0; phase < 4; ++phase) {
                    auto p = PauliString::from_labels(label, phase);
                    oracle::Mat expect = u * oracle::pauli_matrix(label, phase) * u.adjoint();
                    if (oracle::max_abs(oracle::pauli_matrix(apply_gate(p, g)) - expect) > 1e-12) ++bad;
                    ++checked;
                }
            }
        }
    }
    o.detail << "checked=" << checked << " discrepancies=" << bad;
    if (bad != 0) o.fail("discrepancies=" + std::to_string(bad));
}

void criterion7(Outcome& o) {
    int cases = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto h = to_qubit_hamiltonian(synth_hamiltonian({SynthKind::dense, 4, 1, seed, 0.3}));
        auto plan = build_measurement_plan(partition_hamiltonian(h));
        if (auto err = check_estimates(plan, h, 1000 + seed); !err.empty()) {
            o.fail("seed " + std::to_string(seed) + ": " + err);
        }
        ++cases;
    }
    if (o.pass) o.detail << "cases=" << cases << " mutations_detected=" << cases;
}

void criterion8(Outcome& o) {
    auto t0 = Clock::now();
    std::vector<double> ns, groups, strings;
    for (int n = 8; n <= 24; n += 4) {
        auto h = to_qubit_hamiltonian(synth_hamiltonian({SynthKind::dense, n / 2}));
        auto p = partition_hamiltonian(h);
        ns.push_back(n);
        groups.push_back(static_cast<double>(p.groups.size()));
        strings.push_back(static_cast<double>(p.string_count()));
    }
    double gs = slope(ns, groups), ss = slope(ns, strings);
    std::vector<std::size_t> chain;
    std::vector<int> chain_n;
    for (int n = 8; n <= 40; n += 4) {
        auto h = to_qubit_hamiltonian(synth_hamiltonian({SynthKind::chain, n / 2, 2}));
        chain.push_back(partition_hamiltonian(h).groups.size());
        chain_n.push_back(n);
    }
    double secs = seconds_since(t0);
    o.detail << "group_slope=" << gs << " string_slope=" << ss << " chain=";
    for (std::size_t i = 0; i < chain.size(); ++i) o.detail << (i ? "," : "") << chain_n[i] << ":" << chain[i];
    o.detail << " time_s=" << secs;
    if (std::abs(gs - 3.0) > 0.4) o.fail("group slope outside 3.0+-0.4");
    if (std::abs(ss - 4.0) > 0.4) o.fail("string slope outside 4.0+-0.4");
    auto m = chain.size();
    if (!(chain[m - 1] == chain[m - 2] && chain[m - 2] == chain[m - 3])) o.fail("chain counts not constant at the top");
    if (secs >= 600) o.fail("slower than 10 min");
}

std::string check_external(const std::string& path) {
    auto spec = parse_fcidump(read_text(path));
    auto h = to_qubit_hamiltonian(spec);
    const std::size_t n = h.n_qubits;
    auto p = partition_hamiltonian(h);
    auto predicted = predicted_total_groups(n);
    std::ostringstream os;
    os << fs::path(path).filename().string() << "(N=" << n << " groups=" << p.groups.size() << " bound="
       << 1.3 * static_cast<double>(predicted) << ")";
    auto fail = [&](const std::string& why) { return os.str() + " " + why; };
    if (static_cast<double>(p.groups.size()) > 1.3 * static_cast<double>(predicted)) return fail("over bound");

    // Schedules used for this size.
    std::vector<std::pair<int, int>> used{{std::max(static_cast<int>(n), 3), 3}};
    if (n / 2 >= 4) used.emplace_back(static_cast<int>(n / 2), 4);
    for (auto [sn, k] : used) {
        const auto& s = cached_schedule(sn, k);
        if (auto err = check_schedule(s); !err.empty()) return fail("schedule: " + err);
        if (static_cast<double>(s.classes.size()) != expected_classes(sn, k)) return fail("schedule class count");
        if (greedy_pack(all_subsets(s.n, k), s) != s.classes) return fail("greedy does not reproduce classes");
    }
    if (p.double_group_count() > spin_predicted_counts(n)) return fail("double groups above prediction");
    if (auto err = check_commuting(p); !err.empty()) return fail(err);
    if (auto err = check_conservation(p, h); !err.empty()) return fail(err);
    auto plan = build_measurement_plan(p);
    if (auto err = check_plan(plan); !err.empty()) return fail(err);
    if (n <= kMaxStateQubits) {
        if (auto err = check_conjugation_on_state(plan, 77); !err.empty()) return fail(err);
        if (auto err = check_estimates(plan, h, 78); !err.empty()) return fail(err);
    } else {
        os << " statevector checks skipped";
    }
    return "";
}

void criterion9(Outcome& o, const std::vector<std::string>& extra) {
    std::vector<std::string> paths = extra;
    if (paths.empty()) {
        paths.push_back(data("h2_sto3g.fcidump"));
        auto dir = fs::temp_directory_path() / "hampart_acceptance";
        fs::create_directories(dir);
        auto file = (dir / "synth_dense12.fcidump").string();
        std::ofstream(file) << write_fcidump(synth_hamiltonian({SynthKind::dense, 6, 1, 21}));
        paths.push_back(file);
    }
    for (const auto& path : paths) {
        try {
            if (auto err = check_external(path); !err.empty()) o.fail(err);
        } catch (const std::exception& e) {
            o.fail(path + ": " + e.what());
        }
    }
    if (o.pass) o.detail << "files=" << paths.size();
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> extra(argv + 1, argv + argc);
    if (const char* env = std::getenv("HAMPART_EXTERNAL_FCIDUMP")) {
        std::stringstream ss(env);
        for (std::string item; std::getline(ss, item, ':');) {
            if (!item.empty()) extra.push_back(item);
        }
    }

    std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"h2_reproduction", criterion1},
        {"baranyai_validity", criterion2},
        {"dense_greedy_equivalence", criterion3},
        {"spin_factorization_counts", criterion4},
        {"diagonalization_fidelity", criterion5},
        {"clifford_oracle", criterion6},
        {"expectation_equivalence", criterion7},
        {"scaling_trends", criterion8},
        {"external_fcidump", [&](Outcome& o) { criterion9(o, extra); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failures;
        std::cout << "criterion " << i + 1 << " " << criteria[i].first << ": " << (o.pass ? "PASS" : "FAIL") << " "
                  << o.detail.str() << (o.pass ? "" : " reason=" + o.reasons) << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
