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

#include "hampart/diag_circuit.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <fstream>
#include <sstream>

#include "oracle.hpp"

using namespace hampart;

namespace {

std::vector<PauliString> strings_of(std::initializer_list<const char*> labels) {
    std::vector<PauliString> out;
    for (const char* l : labels) out.push_back(PauliString::from_labels(l));
    return out;
}

std::set<std::string> diagonal_labels(const Diagonalization& d) {
    std::set<std::string> s;
    for (const auto& e : d.form.entries) s.insert(e.diagonal.label());
    return s;
}

CliffordCircuit random_circuit(std::mt19937_64& rng, std::size_t n, std::size_t depth) {
    CliffordCircuit c{n, {}};
    for (std::size_t i = 0; i < depth; ++i) {
        switch (rng() % 3) {
            case 0:
                c.gates.push_back(CliffordGate::h(rng() % n));
                break;
            case 1:
                c.gates.push_back(CliffordGate::rx90(rng() % n));
                break;
            default: {
                std::size_t a = rng() % n, b = rng() % (n - 1);
                if (b >= a) ++b;
                c.gates.push_back(CliffordGate::cnot(a, b));
            }
        }
    }
    return c;
}

// Commuting set: random Z-type strings pushed through a random Clifford.
std::vector<PauliString> random_commuting_set(std::mt19937_64& rng, std::size_t n, std::size_t count) {
    auto c = random_circuit(rng, n, 4 * n);
    std::vector<PauliString> out;
    for (std::size_t i = 0; i < count; ++i) {
        PauliString z(n);
        for (std::size_t q = 0; q < n; ++q) z.set(q, false, rng() % 2);
        out.push_back(apply_circuit(z, c).hermitian_form());
    }
    return out;
}

HamiltonianSpec h2() {
    std::ifstream in(std::string(HAMPART_DATA_DIR) + "/h2_sto3g.fcidump");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_fcidump(ss.str());
}

}  // namespace

TEST(diagonalize, example_pair_gate_list) {
    auto d = diagonalize_strings(strings_of({"IIYYXXII", "XXZZZZYY"}), 8);
    std::vector<CliffordGate> expect{CliffordGate::cnot(3, 2), CliffordGate::cnot(4, 3), CliffordGate::cnot(5, 4),
                                     CliffordGate::h(5),       CliffordGate::cnot(1, 0), CliffordGate::cnot(6, 1),
                                     CliffordGate::cnot(7, 6), CliffordGate::h(7)};
    EXPECT_EQ(d.circuit.gates, expect);
    ASSERT_EQ(d.form.entries.size(), 2u);
    EXPECT_EQ(d.form.entries[0].diagonal.label(), "IIZIIZII");
    EXPECT_EQ(d.form.entries[1].diagonal.label(), "IIZIZIZZ");
}

TEST(diagonalize, three_generators) {
    auto d = diagonalize_strings(strings_of({"XXI", "XIX", "ZZZ"}), 3);
    EXPECT_EQ(diagonal_labels(d), (std::set<std::string>{"IZI", "ZII", "IIZ"}));
}

TEST(diagonalize, generator_circuit_handles_whole_blue_set) {
    auto d = diagonalize_strings(strings_of({"XXI", "XIX", "ZZZ"}), 3);
    auto blue = strings_of({"XIX", "YZY", "IXX", "ZYY", "XXI", "YYZ"});
    auto rep = verify_diagonalization(blue, d.circuit);
    EXPECT_TRUE(rep.all_diagonal);
    EXPECT_TRUE(rep.matrix_checked);
    EXPECT_TRUE(rep.matrix_ok);
    EXPECT_TRUE(rep.ok());
}

TEST(diagonalize, diagonal_group_needs_no_gates) {
    auto d = diagonalize_strings(strings_of({"ZIZI", "IIII", "ZZZZ"}), 4);
    EXPECT_TRUE(d.circuit.gates.empty());
    for (const auto& e : d.form.entries) EXPECT_EQ(e.sign, 1);
}

TEST(diagonalize, anticommuting_input_is_an_error) {
    EXPECT_THROW(diagonalize_strings(strings_of({"XI", "ZI"}), 2), DiagonalizationError);
    EXPECT_THROW(diagonalize_strings(strings_of({"XX"}), 3), std::invalid_argument);
}

TEST(diagonalize, random_commuting_sets_against_matrices) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 2 + rng() % 4;
        auto set = random_commuting_set(rng, n, 1 + rng() % 6);
        auto d = diagonalize_strings(set, n);
        oracle::Mat u = oracle::circuit_matrix(d.circuit);
        for (std::size_t i = 0; i < set.size(); ++i) {
            const auto& e = d.form.entries[i];
            ASSERT_TRUE(e.diagonal.is_diagonal());
            ASSERT_TRUE(e.sign == 1 || e.sign == -1);
            oracle::Mat lhs = u * oracle::pauli_matrix(set[i]) * u.adjoint();
            oracle::Mat rhs = static_cast<double>(e.sign) * oracle::pauli_matrix(e.diagonal);
            ASSERT_LT(oracle::max_abs(lhs - rhs), 1e-10) << set[i].label();
            // Off-diagonal entries vanish.
            ASSERT_LT(oracle::max_abs(lhs - oracle::Mat(lhs.diagonal().asDiagonal())), 1e-10);
        }
        auto rep = verify_diagonalization(set, d.circuit);
        ASSERT_TRUE(rep.all_diagonal);
        ASSERT_TRUE(rep.matrix_ok);
    }
}

TEST(diagonalize, gate_budget_per_string) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 3 + rng() % 10;
        auto set = random_commuting_set(rng, n, 1 + rng() % 8);
        auto d = diagonalize_strings(set, n);
        // Each processed string costs |X support| gates at most.
        std::size_t budget = 0;
        for (const auto& s : set) budget += s.x_support().empty() ? 0 : n;
        EXPECT_LE(d.circuit.gates.size(), budget);
        for (const auto& g : d.circuit.gates) {
            EXPECT_TRUE(g.kind == GateKind::H || g.kind == GateKind::RX90 || g.kind == GateKind::CNOT);
        }
    }
}

TEST(verify, reports_failures) {
    auto set = strings_of({"XXI", "ZZI"});
    auto rep = verify_diagonalization(set, CliffordCircuit{3, {}});
    EXPECT_FALSE(rep.all_diagonal);
    EXPECT_FALSE(rep.ok());

    CliffordCircuit long_circuit{1, {}};
    for (int i = 0; i < 4; ++i) long_circuit.gates.push_back(CliffordGate::h(0));
    auto rep2 = verify_diagonalization(strings_of({"Z"}), long_circuit);
    EXPECT_TRUE(rep2.all_diagonal);
    EXPECT_FALSE(rep2.within_bound);
    EXPECT_FALSE(rep2.ok());
}

TEST(verify, pipeline_groups_within_three_n) {
    std::vector<SpinOrbitalHamiltonian> hs{to_qubit_hamiltonian(h2()),
                                           to_qubit_hamiltonian(synth_hamiltonian({SynthKind::dense, 4, 1, 1})),
                                           to_qubit_hamiltonian(synth_hamiltonian({SynthKind::dense, 6, 1, 2})),
                                           to_qubit_hamiltonian(synth_hamiltonian({SynthKind::chain, 9, 2, 3}))};
    for (const auto& h : hs) {
        auto plan = build_measurement_plan(partition_hamiltonian(h));
        for (const auto& g : plan.groups) {
            EXPECT_TRUE(g.verified);
            EXPECT_LE(g.circuit.gates.size(), 3 * h.n_qubits);
            for (const auto& t : g.terms) EXPECT_TRUE(t.diagonal.is_diagonal());
        }
    }
}

TEST(verify, expectation_identity_on_random_states) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 3 + rng() % 8;
        auto set = random_commuting_set(rng, n, 5);
        auto d = diagonalize_strings(set, n);
        StateVector psi = StateVector::random(n, rng());
        StateVector rotated = psi;
        rotated.apply(d.circuit);
        for (std::size_t i = 0; i < set.size(); ++i) {
            double w = std::uniform_real_distribution<double>(-2, 2)(rng);
            double lhs = (w * psi.expectation(set[i])).real();
            double rhs = w * d.form.entries[i].sign * rotated.expectation(d.form.entries[i].diagonal).real();
            ASSERT_NEAR(lhs, rhs, 1e-10);
        }
    }
}
