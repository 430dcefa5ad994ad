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

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hampart/pauli.hpp"

namespace hampart {

inline constexpr std::size_t kMaxStateQubits = 14;

using amp_t = std::complex<double>;

/// Dense state on n <= 14 qubits. Qubit q is bit q of the basis index.
class StateVector {
   public:
    explicit StateVector(std::size_t n_qubits) : n_(n_qubits) {
        if (n_qubits > kMaxStateQubits) {
            throw std::length_error("state vector limited to " + std::to_string(kMaxStateQubits) + " qubits, got " +
                                    std::to_string(n_qubits));
        }
        amps_.assign(std::size_t{1} << n_qubits, amp_t{0, 0});
        amps_[0] = 1;
    }

    static StateVector basis(std::size_t n_qubits, std::uint64_t index) {
        StateVector s(n_qubits);
        if (index >= s.dim()) throw std::out_of_range("basis index out of range");
        s.amps_[0] = 0;
        s.amps_[index] = 1;
        return s;
    }

    /// Haar-random state from normalized complex normals.
    static StateVector random(std::size_t n_qubits, std::uint64_t seed) {
        StateVector s(n_qubits);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        for (auto& a : s.amps_) a = {normal(rng), normal(rng)};
        s.normalize();
        return s;
    }

    std::size_t n_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    amp_t& operator[](std::size_t i) { return amps_[i]; }
    const amp_t& operator[](std::size_t i) const { return amps_[i]; }
    const std::vector<amp_t>& amplitudes() const { return amps_; }

    double norm() const {
        double s = 0;
        for (const auto& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    void normalize() {
        double n = norm();
        if (n == 0) throw std::domain_error("cannot normalize the zero vector");
        for (auto& a : amps_) a /= n;
    }

    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
        return p;
    }

    void apply(const CliffordGate& g) { apply_kernel(g, false); }
    void apply_inverse(const CliffordGate& g) { apply_kernel(g, true); }

    void apply(const CliffordCircuit& c) {
        check_circuit(c);
        for (const auto& g : c.gates) apply(g);
    }

    void apply_inverse(const CliffordCircuit& c) {
        check_circuit(c);
        for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) apply_inverse(*it);
    }

    /// P|psi> with P = i^phase X^x Z^z.
    StateVector apply_pauli(const PauliString& p) const {
        check_string(p);
        auto [x, z] = masks(p);
        amp_t ph = phase_factor(p.phase_exp());
        StateVector out(n_);
        for (std::size_t b = 0; b < dim(); ++b) {
            double s = (std::popcount(z & b) & 1U) ? -1.0 : 1.0;
            out.amps_[b ^ x] = ph * s * amps_[b];
        }
        return out;
    }

    /// <psi|P|psi>.
    amp_t expectation(const PauliString& p) const {
        check_string(p);
        auto [x, z] = masks(p);
        amp_t acc = 0;
        for (std::size_t b = 0; b < dim(); ++b) {
            double s = (std::popcount(z & b) & 1U) ? -1.0 : 1.0;
            acc += std::conj(amps_[b ^ x]) * s * amps_[b];
        }
        return acc * phase_factor(p.phase_exp());
    }

    static std::pair<std::uint64_t, std::uint64_t> masks(const PauliString& p) {
        std::uint64_t x = p.size() == 0 ? 0 : p.x_words()[0];
        std::uint64_t z = p.size() == 0 ? 0 : p.z_words()[0];
        return {x, z};
    }

   private:
    static amp_t phase_factor(int k) {
        switch (PauliString::mod4(k)) {
            case 0:
                return {1, 0};
            case 1:
                return {0, 1};
            case 2:
                return {-1, 0};
            default:
                return {0, -1};
        }
    }

    void check_string(const PauliString& p) const {
        if (p.size() != n_) throw std::invalid_argument("Pauli string size does not match state");
    }

    void check_circuit(const CliffordCircuit& c) const {
        if (c.n_qubits != n_) throw std::invalid_argument("circuit size does not match state");
    }

    void check_qubit(std::size_t q) const {
        if (q >= n_) throw std::out_of_range("gate qubit out of range");
    }

    void apply_kernel(const CliffordGate& g, bool inverse) {
        const double r = 1.0 / std::sqrt(2.0);
        switch (g.kind) {
            case GateKind::H: {
                check_qubit(g.qubit);
                const std::size_t m = std::size_t{1} << g.qubit;
                for (std::size_t b = 0; b < dim(); ++b) {
                    if (b & m) continue;
                    amp_t a0 = amps_[b], a1 = amps_[b | m];
                    amps_[b] = r * (a0 + a1);
                    amps_[b | m] = r * (a0 - a1);
                }
                break;
            }
            case GateKind::RX90: {
                check_qubit(g.qubit);
                const std::size_t m = std::size_t{1} << g.qubit;
                const amp_t mi = inverse ? amp_t{0, 1} : amp_t{0, -1};
                for (std::size_t b = 0; b < dim(); ++b) {
                    if (b & m) continue;
                    amp_t a0 = amps_[b], a1 = amps_[b | m];
                    amps_[b] = r * (a0 + mi * a1);
                    amps_[b | m] = r * (a1 + mi * a0);
                }
                break;
            }
            case GateKind::CNOT: {
                check_qubit(g.control);
                check_qubit(g.target);
                if (g.control == g.target) throw std::invalid_argument("CNOT control and target must differ");
                const std::size_t c = std::size_t{1} << g.control;
                const std::size_t t = std::size_t{1} << g.target;
                for (std::size_t b = 0; b < dim(); ++b) {
                    if ((b & c) && !(b & t)) std::swap(amps_[b], amps_[b | t]);
                }
                break;
            }
        }
    }

    std::size_t n_;
    std::vector<amp_t> amps_;
};

}  // namespace hampart
