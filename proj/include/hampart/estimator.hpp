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
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "hampart/diag_circuit.hpp"
#include "hampart/fermion_jw.hpp"
#include "hampart/statevector.hpp"

namespace hampart {

/// sum_i w_i <psi|P_i|psi>. Throws if the imaginary part exceeds `imag_tol`.
inline double expectation_direct(std::span<const WeightedPauli> strings, const StateVector& psi,
                                 double imag_tol = 1e-10) {
    amp_t acc = 0;
    for (const auto& wp : strings) acc += wp.weight * psi.expectation(wp.string);
    if (std::abs(acc.imag()) > imag_tol) throw std::domain_error("expectation has an imaginary part; input is not Hermitian");
    return acc.real();
}

inline double expectation_direct(const PauliSum& sum, const StateVector& psi, double imag_tol = 1e-10) {
    auto ws = to_weighted(sum);
    return expectation_direct(ws, psi, imag_tol);
}

namespace detail {

inline double diagonal_value(const GroupMeasurement& g, std::uint64_t b) {
    double v = 0;
    for (const auto& t : g.terms) {
        auto z = StateVector::masks(t.diagonal).second;
        v += t.weight * t.sign * ((std::popcount(z & b) & 1U) ? -1.0 : 1.0);
    }
    return v;
}

inline std::vector<double> rotated_probabilities(const GroupMeasurement& g, const StateVector& psi) {
    if (!g.verified) throw std::logic_error("group circuit has not been verified");
    StateVector s = psi;
    s.apply(g.circuit);
    return s.probabilities();
}

}  // namespace detail

/// sum over groups of sum_t w_t sign_t <U psi|D_t|U psi>, using only
/// computational-basis probabilities of the rotated state.
inline double expectation_grouped(const MeasurementPlan& plan, const StateVector& psi) {
    if (plan.n_qubits != psi.n_qubits()) throw std::invalid_argument("plan and state sizes differ");
    double total = 0;
    for (const auto& g : plan.groups) {
        auto p = detail::rotated_probabilities(g, psi);
        for (const auto& t : g.terms) {
            auto z = StateVector::masks(t.diagonal).second;
            double e = 0;
            for (std::uint64_t b = 0; b < p.size(); ++b) e += (std::popcount(z & b) & 1U) ? -p[b] : p[b];
            total += t.weight * t.sign * e;
        }
    }
    return total;
}

struct SampledEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Draws `shots_per_group` outcomes per group from |U psi|^2 and averages the
/// per-shot diagonal value. Group g uses an mt19937_64 seeded from (seed, g).
/// Only running moments are kept.
inline SampledEstimate sample_grouped(const MeasurementPlan& plan, const StateVector& psi, std::uint64_t shots_per_group,
                                      std::uint64_t seed) {
    if (shots_per_group == 0) throw std::invalid_argument("shots_per_group must be >= 1");
    if (plan.n_qubits != psi.n_qubits()) throw std::invalid_argument("plan and state sizes differ");
    SampledEstimate out;
    double var_total = 0;
    for (std::size_t gi = 0; gi < plan.groups.size(); ++gi) {
        const auto& g = plan.groups[gi];
        auto p = detail::rotated_probabilities(g, psi);
        std::vector<double> cdf(p.size());
        std::partial_sum(p.begin(), p.end(), cdf.begin());
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(gi), static_cast<std::uint32_t>(gi >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> u01(0.0, cdf.back());
        double mean = 0, m2 = 0;
        for (std::uint64_t s = 1; s <= shots_per_group; ++s) {
            double r = u01(rng);
            auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
            auto b = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                                        static_cast<std::ptrdiff_t>(cdf.size()) - 1));
            double v = detail::diagonal_value(g, b);
            double delta = v - mean;
            mean += delta / static_cast<double>(s);
            m2 += delta * (v - mean);
        }
        out.estimate += mean;
        if (shots_per_group > 1) {
            var_total += m2 / static_cast<double>(shots_per_group - 1) / static_cast<double>(shots_per_group);
        }
    }
    out.std_error = std::sqrt(var_total);
    return out;
}

}  // namespace hampart
