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
#include <complex>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hampart/pauli.hpp"

namespace hampart {

inline constexpr double kDefaultThreshold = 1e-12;

enum class ExcitationArity { diagonal, single, repeated_double, disjoint_double };

/// coefficient * (op + op^dagger) / 2 where op = a^dag_{c...} a_{a...}.
///
/// Canonical form: creation indices strictly ascending, annihilation indices
/// strictly descending, and (creation, annihilation) lexicographically no
/// larger than the same key of op^dagger.
struct ExcitationTerm {
    std::vector<std::size_t> creation;
    std::vector<std::size_t> annihilation;
    double coefficient = 0.0;

    std::vector<std::size_t> active_indices() const {
        std::set<std::size_t> s(creation.begin(), creation.end());
        s.insert(annihilation.begin(), annihilation.end());
        return {s.begin(), s.end()};
    }

    bool is_self_adjoint() const {
        return std::set<std::size_t>(creation.begin(), creation.end()) ==
               std::set<std::size_t>(annihilation.begin(), annihilation.end());
    }

    ExcitationArity arity() const {
        if (is_self_adjoint()) return ExcitationArity::diagonal;
        if (creation.size() == 1) return ExcitationArity::single;
        return active_indices().size() == 4 ? ExcitationArity::disjoint_double : ExcitationArity::repeated_double;
    }

    std::size_t max_index() const {
        std::size_t m = 0;
        for (auto i : creation) m = std::max(m, i);
        for (auto i : annihilation) m = std::max(m, i);
        return m;
    }

    std::vector<std::size_t> key() const {
        std::vector<std::size_t> k = creation;
        k.insert(k.end(), annihilation.begin(), annihilation.end());
        return k;
    }

    /// Key of op^dagger in canonical ordering.
    std::vector<std::size_t> adjoint_key() const {
        std::vector<std::size_t> c = annihilation, a = creation;
        std::sort(c.begin(), c.end());
        std::sort(a.rbegin(), a.rend());
        c.insert(c.end(), a.begin(), a.end());
        return c;
    }

    bool is_canonical() const {
        if (creation.size() != annihilation.size() || creation.empty() || creation.size() > 2) return false;
        if (creation.size() == 2 && !(creation[0] < creation[1])) return false;
        if (annihilation.size() == 2 && !(annihilation[0] > annihilation[1])) return false;
        return key() <= adjoint_key();
    }

    friend bool operator==(const ExcitationTerm&, const ExcitationTerm&) = default;
};

struct WeightedPauli {
    PauliString string;
    double weight = 0.0;
};

/// Real-weighted Pauli sum keyed by Hermitian strings.
using PauliSum = std::map<PauliString, double>;

inline void accumulate(PauliSum& sum, const WeightedPauli& wp) { sum[wp.string.hermitian_form()] += wp.weight; }

inline std::vector<WeightedPauli> to_weighted(const PauliSum& sum, double threshold = 0.0) {
    std::vector<WeightedPauli> out;
    for (const auto& [p, w] : sum) {
        if (std::abs(w) > threshold) out.push_back({p, w});
    }
    return out;
}

namespace detail {

// Pauli sum with complex coefficients; keys carry phase 0 (X^x Z^z form).
using ComplexPauliSum = std::map<PauliString, std::complex<double>>;

inline std::complex<double> i_pow(int k) {
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

// a^dag_j = Z_{<j} (X + XZ)/2, a_j = Z_{<j} (X - XZ)/2.
inline ComplexPauliSum ladder(std::size_t j, bool creation, std::size_t n) {
    PauliString bare(n);
    for (std::size_t q = 0; q < j; ++q) bare.set(q, false, true);
    PauliString with_z = bare;
    bare.set(j, true, false);
    with_z.set(j, true, true);
    return {{bare, 0.5}, {with_z, creation ? 0.5 : -0.5}};
}

inline ComplexPauliSum product(const ComplexPauliSum& a, const ComplexPauliSum& b) {
    ComplexPauliSum out;
    for (const auto& [pa, ca] : a) {
        for (const auto& [pb, cb] : b) {
            PauliString r = multiply(pa, pb);
            std::complex<double> c = ca * cb * i_pow(r.phase_exp());
            r.set_phase_exp(0);
            out[r] += c;
        }
    }
    return out;
}

}  // namespace detail

/// Pauli expansion of term.coefficient * (op + op^dagger)/2 under Jordan-Wigner.
/// Imaginary parts cancel between op and its adjoint, so only the real part of
/// each textbook-string coefficient survives.
inline std::vector<WeightedPauli> jw_excitation(const ExcitationTerm& term, std::size_t n_qubits) {
    if (!term.is_canonical()) {
        throw std::invalid_argument("jw_excitation: term is not in canonical form");
    }
    if (term.max_index() >= n_qubits) {
        throw std::out_of_range("jw_excitation: spin-orbital index out of range");
    }
    PauliString id(n_qubits);
    detail::ComplexPauliSum acc{{id, 1.0}};
    for (auto c : term.creation) acc = detail::product(acc, detail::ladder(c, true, n_qubits));
    for (auto a : term.annihilation) acc = detail::product(acc, detail::ladder(a, false, n_qubits));

    std::vector<WeightedPauli> out;
    for (const auto& [key, c] : acc) {
        // key = X^x Z^z = (-i)^m * textbook string, m = number of Y letters.
        PauliString h = key.hermitian_form();
        double re = (c * detail::i_pow(-h.y_count())).real();
        double w = term.coefficient * re;
        if (std::abs(w) > 1e-15 * std::max(1.0, std::abs(term.coefficient))) {
            out.push_back({std::move(h), w});
        }
    }
    return out;
}

/// One operator of a raw second-quantized sum: the first half of `indices`
/// are creation indices, the second half annihilation indices.
struct RawTerm {
    std::vector<std::size_t> indices;
    double coefficient = 0.0;
};

class NonHermitianError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Pairs every operator with its adjoint and emits canonical, duplicate-free
/// terms. Adjoint pairs must carry equal accumulated coefficients.
inline std::vector<ExcitationTerm> reduce_hermitian(std::span<const RawTerm> raw,
                                                    double threshold = kDefaultThreshold,
                                                    double tolerance = 1e-8) {
    struct Accum {
        ExcitationTerm rep;
        double forward = 0.0;
        double backward = 0.0;
    };
    std::map<std::vector<std::size_t>, Accum> by_rep;

    for (const auto& r : raw) {
        if (r.indices.size() != 2 && r.indices.size() != 4) {
            throw std::invalid_argument("reduce_hermitian: operators must have 2 or 4 ladder indices");
        }
        std::size_t half = r.indices.size() / 2;
        std::vector<std::size_t> c(r.indices.begin(), r.indices.begin() + static_cast<std::ptrdiff_t>(half));
        std::vector<std::size_t> a(r.indices.begin() + static_cast<std::ptrdiff_t>(half), r.indices.end());
        double sign = 1.0;
        if (half == 2) {
            if (c[0] == c[1] || a[0] == a[1]) continue;  // a^dag_p a^dag_p = 0
            if (c[0] > c[1]) {
                std::swap(c[0], c[1]);
                sign = -sign;
            }
            if (a[0] < a[1]) {
                std::swap(a[0], a[1]);
                sign = -sign;
            }
        }
        ExcitationTerm t{c, a, 0.0};
        auto k = t.key();
        auto ka = t.adjoint_key();
        bool forward = k <= ka;
        const auto& rep_key = forward ? k : ka;
        auto it = by_rep.find(rep_key);
        if (it == by_rep.end()) {
            ExcitationTerm rep = t;
            if (!forward) {
                rep.creation.assign(ka.begin(), ka.begin() + static_cast<std::ptrdiff_t>(half));
                rep.annihilation.assign(ka.begin() + static_cast<std::ptrdiff_t>(half), ka.end());
            }
            it = by_rep.emplace(rep_key, Accum{rep}).first;
        }
        (forward ? it->second.forward : it->second.backward) += sign * r.coefficient;
    }

    std::vector<ExcitationTerm> out;
    for (auto& [key, acc] : by_rep) {
        double coeff;
        if (acc.rep.is_self_adjoint()) {
            coeff = acc.forward + acc.backward;
        } else {
            double scale = std::max({1.0, std::abs(acc.forward), std::abs(acc.backward)});
            if (std::abs(acc.forward - acc.backward) > tolerance * scale) {
                throw NonHermitianError("reduce_hermitian: adjoint coefficients differ for operator with key size " +
                                        std::to_string(key.size()));
            }
            coeff = acc.forward + acc.backward;
        }
        if (std::abs(coeff) < threshold) continue;
        acc.rep.coefficient = coeff;
        out.push_back(std::move(acc.rep));
    }
    return out;
}

/// Sum of the Jordan-Wigner expansions of all terms plus a constant offset.
inline PauliSum expand_terms(std::span<const ExcitationTerm> terms, std::size_t n_qubits, double constant = 0.0) {
    PauliSum sum;
    if (constant != 0.0) sum[PauliString(n_qubits)] += constant;
    for (const auto& t : terms) {
        for (const auto& wp : jw_excitation(t, n_qubits)) accumulate(sum, wp);
    }
    return sum;
}

}  // namespace hampart
