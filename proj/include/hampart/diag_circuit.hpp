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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hampart/pauli.hpp"
#include "hampart/spin_groups.hpp"
#include "hampart/statevector.hpp"
#include "json.hpp"

namespace hampart {

/// U P U^dagger = sign * diagonal for one input string.
struct DiagonalEntry {
    PauliString diagonal;
    int sign = 1;
};

/// Entries are in input order.
struct DiagonalForm {
    std::vector<DiagonalEntry> entries;
};

struct Diagonalization {
    CliffordCircuit circuit;
    DiagonalForm form;
};

class DiagonalizationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline long largest_active_index(const PauliString& p) {
    auto xs = p.x_support();
    return xs.empty() ? -1 : static_cast<long>(xs.back());
}

inline DiagonalEntry to_entry(const PauliString& conj) {
    int lp = conj.label_phase();
    if (lp % 2 != 0) throw DiagonalizationError("conjugated string picked up an imaginary phase");
    DiagonalEntry e{conj.hermitian_form(), lp == 0 ? 1 : -1};
    return e;
}

}  // namespace detail

/// Strings are visited in ascending order of their largest X/Y position
/// (ties by label). Each is conjugated by the circuit built so far; if it is
/// not yet diagonal, a CNOT chain over its X positions (control on the larger
/// index of each consecutive pair) collects the X onto its last position,
/// which H (X) or RX90 (Y) turns into Z.
inline Diagonalization diagonalize_strings(std::span<const PauliString> strings, std::size_t n_qubits) {
    for (const auto& s : strings) {
        if (s.size() != n_qubits) throw std::invalid_argument("diagonalize: string size does not match group");
    }
    std::vector<std::size_t> order(strings.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<long> key(strings.size());
    std::vector<std::string> label(strings.size());
    for (std::size_t i = 0; i < strings.size(); ++i) {
        key[i] = detail::largest_active_index(strings[i]);
        label[i] = strings[i].label();
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (key[a] != key[b]) return key[a] < key[b];
        return label[a] < label[b];
    });

    Diagonalization d;
    d.circuit.n_qubits = n_qubits;
    auto push = [&](PauliString& cur, const CliffordGate& g) {
        d.circuit.gates.push_back(g);
        cur = apply_gate(std::move(cur), g);
    };
    for (auto i : order) {
        PauliString cur = apply_circuit(strings[i], d.circuit);
        if (cur.is_diagonal()) continue;
        auto xs = cur.x_support();
        for (std::size_t j = 0; j + 1 < xs.size(); ++j) push(cur, CliffordGate::cnot(xs[j + 1], xs[j]));
        const std::size_t last = xs.back();
        push(cur, cur.z(last) ? CliffordGate::rx90(last) : CliffordGate::h(last));
        if (!cur.is_diagonal()) {
            throw DiagonalizationError("string " + strings[i].label() + " is not diagonal after its pass");
        }
    }

    d.form.entries.reserve(strings.size());
    for (const auto& s : strings) {
        PauliString conj = apply_circuit(s, d.circuit);
        if (!conj.is_diagonal()) {
            throw DiagonalizationError("string " + s.label() + " does not commute with the rest of its group");
        }
        d.form.entries.push_back(detail::to_entry(conj));
    }
    return d;
}

inline Diagonalization diagonalize_group(const CommutingGroup& group) {
    std::vector<PauliString> s;
    for (const auto& wp : group.strings()) s.push_back(wp.string);
    return diagonalize_strings(s, group.n_qubits);
}

struct VerificationReport {
    bool all_diagonal = true;
    std::size_t gate_count = 0;
    std::size_t gate_bound = 0;
    bool within_bound = true;
    bool gates_in_generator_set = true;
    std::vector<int> signs;
    bool matrix_checked = false;
    bool matrix_ok = true;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

namespace detail {

// U P U^dagger e_b == sign * D e_b for every basis state, by explicit
// application to basis vectors.
inline bool matrix_conjugation_holds(const PauliString& p, const CliffordCircuit& c, const PauliString& d, int sign,
                                     double tol = 1e-10) {
    const std::size_t n = p.size();
    auto [dx, dz] = StateVector::masks(d);
    amp_t dph = (d.phase_exp() % 2 == 0) ? amp_t{d.phase_exp() == 0 ? 1.0 : -1.0, 0}
                                          : amp_t{0, d.phase_exp() == 1 ? 1.0 : -1.0};
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
        StateVector v = StateVector::basis(n, b);
        v.apply_inverse(c);
        v = v.apply_pauli(p);
        v.apply(c);
        double s = (std::popcount(dz & b) & 1U) ? -1.0 : 1.0;
        for (std::uint64_t j = 0; j < v.dim(); ++j) {
            amp_t expect = (j == (b ^ dx)) ? dph * s * static_cast<double>(sign) : amp_t{0, 0};
            if (std::abs(v[j] - expect) > tol) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Re-conjugates every string through the circuit and reports. For n <= 6 the
/// symbolic result is also checked against explicit matrix action.
inline VerificationReport verify_diagonalization(std::span<const PauliString> strings, const CliffordCircuit& circuit) {
    VerificationReport r;
    r.gate_count = circuit.gates.size();
    r.gate_bound = 3 * circuit.n_qubits;
    r.within_bound = r.gate_count <= r.gate_bound;
    if (!r.within_bound) {
        r.failures.push_back("gate count " + std::to_string(r.gate_count) + " exceeds 3N = " +
                             std::to_string(r.gate_bound));
    }
    for (const auto& g : circuit.gates) {
        bool ok = (g.kind == GateKind::CNOT) ? (g.control < circuit.n_qubits && g.target < circuit.n_qubits)
                                             : g.qubit < circuit.n_qubits;
        if (!ok) {
            r.gates_in_generator_set = false;
            r.failures.push_back("gate acts outside the register");
            return r;
        }
    }
    r.matrix_checked = circuit.n_qubits <= 6;
    for (const auto& s : strings) {
        if (s.size() != circuit.n_qubits) {
            r.all_diagonal = false;
            r.failures.push_back("string " + s.label() + " has the wrong size");
            continue;
        }
        PauliString conj = apply_circuit(s, circuit);
        if (!conj.is_diagonal()) {
            r.all_diagonal = false;
            r.signs.push_back(0);
            r.failures.push_back("string " + s.label() + " maps to non-diagonal " + conj.hermitian_form().label());
            continue;
        }
        int lp = conj.label_phase();
        int sign = lp == 0 ? 1 : (lp == 2 ? -1 : 0);
        r.signs.push_back(sign);
        if (sign == 0) {
            r.all_diagonal = false;
            r.failures.push_back("string " + s.label() + " acquired an imaginary phase");
            continue;
        }
        if (r.matrix_checked && !detail::matrix_conjugation_holds(s, circuit, conj.hermitian_form(), sign)) {
            r.matrix_ok = false;
            r.failures.push_back("matrix check failed for " + s.label());
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Measurement plan

struct MeasuredTerm {
    PauliString original;
    double weight = 0.0;
    PauliString diagonal;
    int sign = 1;
};

struct GroupMeasurement {
    GroupSector sector = GroupSector::diagonal;
    ScheduleId schedule_id;
    CliffordCircuit circuit;
    std::vector<MeasuredTerm> terms;
    bool verified = false;
};

struct MeasurementPlan {
    std::size_t n_qubits = 0;
    std::vector<GroupMeasurement> groups;

    std::size_t max_gate_count() const {
        std::size_t m = 0;
        for (const auto& g : groups) m = std::max(m, g.circuit.gates.size());
        return m;
    }
};

/// Diagonalizes and verifies every group. Throws DiagonalizationError if any
/// group fails verification.
inline MeasurementPlan build_measurement_plan(const Partition& partition) {
    MeasurementPlan plan;
    plan.n_qubits = partition.n_qubits;
    for (const auto& g : partition.groups) {
        auto ws = g.strings();
        std::vector<PauliString> ps;
        ps.reserve(ws.size());
        for (const auto& wp : ws) ps.push_back(wp.string);
        auto d = diagonalize_strings(ps, partition.n_qubits);
        GroupMeasurement gm{g.sector, g.schedule_id, d.circuit, {}, false};
        for (std::size_t i = 0; i < ws.size(); ++i) {
            gm.terms.push_back({ws[i].string, ws[i].weight, d.form.entries[i].diagonal, d.form.entries[i].sign});
        }
        auto rep = verify_diagonalization(ps, d.circuit);
        if (!rep.ok()) throw DiagonalizationError("group verification failed: " + rep.failures.front());
        gm.verified = true;
        plan.groups.push_back(std::move(gm));
    }
    return plan;
}

inline nlohmann::json to_json(const GroupMeasurement& g, std::size_t index) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : g.terms) {
        terms.push_back({{"label", t.original.label()},
                         {"weight", t.weight},
                         {"diagonal", t.diagonal.label()},
                         {"sign", t.sign}});
    }
    return {{"group", index},
            {"sector", std::string(sector_name(g.sector))},
            {"gate_count", g.circuit.gates.size()},
            {"gate_bound", 3 * g.circuit.n_qubits},
            {"within_bound", g.circuit.gates.size() <= 3 * g.circuit.n_qubits},
            {"circuit", to_json(g.circuit)},
            {"qasm", to_qasm_like(g.circuit)},
            {"terms", std::move(terms)}};
}

}  // namespace hampart
