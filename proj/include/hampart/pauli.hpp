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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hampart {

inline constexpr std::size_t kMaxQubits = 1024;

/// N-qubit Pauli operator in symplectic form.
///
/// The operator is i^phase_exp * prod_q X_q^x_q Z_q^z_q, so a qubit with both
/// bits set holds XZ = -iY. Labels ("IXYZ", qubit 0 leftmost) use textbook Y;
/// label_phase() gives the phase relative to the textbook tensor product.
class PauliString {
   public:
    PauliString() = default;

    explicit PauliString(std::size_t n_qubits) : n_(n_qubits), xs_(word_count(n_qubits)), zs_(word_count(n_qubits)) {
        if (n_qubits > kMaxQubits) {
            throw std::invalid_argument("PauliString: at most 1024 qubits are supported");
        }
    }

    static PauliString from_labels(std::string_view labels, int label_phase = 0) {
        if (labels.empty()) {
            throw std::invalid_argument("PauliString: empty label");
        }
        PauliString p(labels.size());
        int ys = 0;
        for (std::size_t q = 0; q < labels.size(); ++q) {
            switch (labels[q]) {
                case 'I':
                case '_':
                    break;
                case 'X':
                    p.set(q, true, false);
                    break;
                case 'Z':
                    p.set(q, false, true);
                    break;
                case 'Y':
                    p.set(q, true, true);
                    ++ys;
                    break;
                default:
                    throw std::invalid_argument(std::string("PauliString: invalid label character '") + labels[q] + "'");
            }
        }
        p.phase_ = static_cast<std::uint8_t>(mod4(label_phase + ys));
        return p;
    }

    std::size_t size() const { return n_; }

    bool x(std::size_t q) const { return (xs_[q / 64] >> (q % 64)) & 1U; }
    bool z(std::size_t q) const { return (zs_[q / 64] >> (q % 64)) & 1U; }

    void set(std::size_t q, bool x_bit, bool z_bit) {
        check_index(q);
        std::uint64_t mask = std::uint64_t{1} << (q % 64);
        xs_[q / 64] = x_bit ? (xs_[q / 64] | mask) : (xs_[q / 64] & ~mask);
        zs_[q / 64] = z_bit ? (zs_[q / 64] | mask) : (zs_[q / 64] & ~mask);
    }

    void flip_x(std::size_t q) { xs_[q / 64] ^= std::uint64_t{1} << (q % 64); }
    void flip_z(std::size_t q) { zs_[q / 64] ^= std::uint64_t{1} << (q % 64); }

    int phase_exp() const { return phase_; }
    void set_phase_exp(int p) { phase_ = static_cast<std::uint8_t>(mod4(p)); }

    int y_count() const {
        int c = 0;
        for (std::size_t w = 0; w < xs_.size(); ++w) {
            c += std::popcount(xs_[w] & zs_[w]);
        }
        return c;
    }

    /// Phase k such that this operator equals i^k times the labelled tensor product.
    int label_phase() const { return mod4(phase_ - y_count()); }

    std::string label() const {
        std::string out(n_, 'I');
        for (std::size_t q = 0; q < n_; ++q) {
            out[q] = "IXZY"[static_cast<int>(x(q)) + 2 * static_cast<int>(z(q))];
        }
        return out;
    }

    /// Same Pauli letters with the phase chosen so the operator is Hermitian and
    /// equal to the textbook product (label_phase() == 0).
    PauliString hermitian_form() const {
        PauliString p = *this;
        p.phase_ = static_cast<std::uint8_t>(mod4(y_count()));
        return p;
    }

    bool is_diagonal() const {
        for (auto w : xs_) {
            if (w != 0) {
                return false;
            }
        }
        return true;
    }

    bool is_identity() const {
        for (std::size_t w = 0; w < xs_.size(); ++w) {
            if (xs_[w] != 0 || zs_[w] != 0) {
                return false;
            }
        }
        return true;
    }

    /// Qubits carrying X or Y, ascending.
    std::vector<std::size_t> x_support() const { return support(xs_); }

    std::span<const std::uint64_t> x_words() const { return xs_; }
    std::span<const std::uint64_t> z_words() const { return zs_; }
    std::span<std::uint64_t> x_words() { return xs_; }
    std::span<std::uint64_t> z_words() { return zs_; }

    friend bool operator==(const PauliString&, const PauliString&) = default;
    friend auto operator<=>(const PauliString& a, const PauliString& b) {
        if (auto c = a.n_ <=> b.n_; c != 0) return c;
        if (auto c = a.xs_ <=> b.xs_; c != 0) return c;
        if (auto c = a.zs_ <=> b.zs_; c != 0) return c;
        return a.phase_ <=> b.phase_;
    }

    static int mod4(int v) { return ((v % 4) + 4) % 4; }

   private:
    static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

    void check_index(std::size_t q) const {
        if (q >= n_) {
            throw std::out_of_range("PauliString: qubit index out of range");
        }
    }

    static std::vector<std::size_t> support(const std::vector<std::uint64_t>& words) {
        std::vector<std::size_t> out;
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t bits = words[w];
            while (bits != 0) {
                out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> xs_;
    std::vector<std::uint64_t> zs_;
    std::uint8_t phase_ = 0;
};

inline void require_same_size(const PauliString& p, const PauliString& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("Pauli strings have different qubit counts");
    }
}

/// Matrix product p*q with exact phase.
inline PauliString multiply(const PauliString& p, const PauliString& q) {
    require_same_size(p, q);
    PauliString r(p.size());
    int swaps = 0;
    auto px = p.x_words(), pz = p.z_words(), qx = q.x_words(), qz = q.z_words();
    auto rx = r.x_words(), rz = r.z_words();
    for (std::size_t w = 0; w < px.size(); ++w) {
        // Z^a X^b = (-1)^(ab) X^b Z^a when moving q's X left past p's Z.
        swaps += std::popcount(pz[w] & qx[w]);
        rx[w] = px[w] ^ qx[w];
        rz[w] = pz[w] ^ qz[w];
    }
    r.set_phase_exp(p.phase_exp() + q.phase_exp() + 2 * swaps);
    return r;
}

inline bool commutes(const PauliString& p, const PauliString& q) {
    require_same_size(p, q);
    int parity = 0;
    auto px = p.x_words(), pz = p.z_words(), qx = q.x_words(), qz = q.z_words();
    for (std::size_t w = 0; w < px.size(); ++w) {
        parity ^= std::popcount((px[w] & qz[w]) ^ (qx[w] & pz[w])) & 1;
    }
    return parity == 0;
}

enum class GateKind { H, RX90, CNOT };

inline std::string_view gate_name(GateKind k) {
    switch (k) {
        case GateKind::H:
            return "H";
        case GateKind::RX90:
            return "RX90";
        case GateKind::CNOT:
            return "CNOT";
    }
    return "?";
}

/// One generator of the Clifford group. H and RX90 use `qubit`; CNOT uses
/// `control` and `target`.
struct CliffordGate {
    GateKind kind = GateKind::H;
    std::size_t qubit = 0;
    std::size_t control = 0;
    std::size_t target = 0;

    static CliffordGate h(std::size_t q) { return {GateKind::H, q, 0, 0}; }
    static CliffordGate rx90(std::size_t q) { return {GateKind::RX90, q, 0, 0}; }
    static CliffordGate cnot(std::size_t c, std::size_t t) {
        if (c == t) {
            throw std::invalid_argument("CNOT control and target must differ");
        }
        return {GateKind::CNOT, 0, c, t};
    }

    friend bool operator==(const CliffordGate& a, const CliffordGate& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == GateKind::CNOT) return a.control == b.control && a.target == b.target;
        return a.qubit == b.qubit;
    }
};

struct CliffordCircuit {
    std::size_t n_qubits = 0;
    std::vector<CliffordGate> gates;
};

/// Returns g P g^dagger.
///
/// H:    X <-> Z, XZ -> -XZ.
/// RX90: (I - iX)/sqrt(2); Z -> -Y, Y -> Z, X -> X.
/// CNOT: X_c -> X_c X_t, Z_t -> Z_c Z_t; no phase in the XZ convention.
inline PauliString apply_gate(PauliString p, const CliffordGate& g) {
    const std::size_t n = p.size();
    switch (g.kind) {
        case GateKind::H: {
            if (g.qubit >= n) throw std::out_of_range("H: qubit index out of range");
            bool x = p.x(g.qubit), z = p.z(g.qubit);
            p.set(g.qubit, z, x);
            if (x && z) p.set_phase_exp(p.phase_exp() + 2);
            break;
        }
        case GateKind::RX90: {
            if (g.qubit >= n) throw std::out_of_range("RX90: qubit index out of range");
            bool x = p.x(g.qubit), z = p.z(g.qubit);
            if (z) {
                p.set(g.qubit, !x, true);
                p.set_phase_exp(p.phase_exp() + 3);
            }
            break;
        }
        case GateKind::CNOT: {
            if (g.control >= n || g.target >= n) throw std::out_of_range("CNOT: qubit index out of range");
            if (g.control == g.target) throw std::invalid_argument("CNOT control and target must differ");
            if (p.x(g.control)) p.flip_x(g.target);
            if (p.z(g.target)) p.flip_z(g.control);
            break;
        }
    }
    return p;
}

inline PauliString apply_circuit(PauliString p, const CliffordCircuit& c) {
    for (const auto& g : c.gates) {
        p = apply_gate(std::move(p), g);
    }
    return p;
}

inline nlohmann::json to_json(const PauliString& p) {
    return {{"label", p.label()}, {"phase_exp", p.label_phase()}};
}

inline PauliString pauli_from_json(const nlohmann::json& j) {
    return PauliString::from_labels(j.at("label").get<std::string>(), j.value("phase_exp", 0));
}

inline nlohmann::json to_json(const CliffordGate& g) {
    if (g.kind == GateKind::CNOT) {
        return {{"gate", "CNOT"}, {"control", g.control}, {"target", g.target}};
    }
    return {{"gate", std::string(gate_name(g.kind))}, {"qubit", g.qubit}};
}

inline CliffordGate gate_from_json(const nlohmann::json& j) {
    auto name = j.at("gate").get<std::string>();
    if (name == "CNOT") return CliffordGate::cnot(j.at("control").get<std::size_t>(), j.at("target").get<std::size_t>());
    if (name == "H") return CliffordGate::h(j.at("qubit").get<std::size_t>());
    if (name == "RX90") return CliffordGate::rx90(j.at("qubit").get<std::size_t>());
    throw std::invalid_argument("unknown gate '" + name + "'");
}

inline nlohmann::json to_json(const CliffordCircuit& c) {
    auto arr = nlohmann::json::array();
    for (const auto& g : c.gates) arr.push_back(to_json(g));
    return arr;
}

/// Flat text rendering: "h q[i];", "rx(pi/2) q[i];", "cx q[c],q[t];".
inline std::string to_qasm_like(const CliffordCircuit& c) {
    std::string out;
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case GateKind::H:
                out += "h q[" + std::to_string(g.qubit) + "];\n";
                break;
            case GateKind::RX90:
                out += "rx(pi/2) q[" + std::to_string(g.qubit) + "];\n";
                break;
            case GateKind::CNOT:
                out += "cx q[" + std::to_string(g.control) + "],q[" + std::to_string(g.target) + "];\n";
                break;
        }
    }
    return out;
}

}  // namespace hampart
