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
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hampart/fermion_jw.hpp"
#include "json.hpp"

namespace hampart {

using OneBodyKey = std::array<int, 2>;
using TwoBodyKey = std::array<int, 4>;

/// Molecular integrals over spatial orbitals, 1-based as stored in FCIDUMP.
/// Two-body integrals are chemists' (pq|rs). Both maps hold every
/// symmetry-equivalent entry.
struct HamiltonianSpec {
    int n_spatial = 0;
    int n_electrons = 0;
    int ms2 = 0;
    double core_energy = 0.0;
    std::map<OneBodyKey, double> one_body;
    std::map<TwoBodyKey, double> two_body;

    std::size_t n_qubits() const { return 2 * static_cast<std::size_t>(n_spatial); }

    double h1(int p, int q) const {
        auto it = one_body.find({p, q});
        return it == one_body.end() ? 0.0 : it->second;
    }
    double h2(int p, int q, int r, int s) const {
        auto it = two_body.find({p, q, r, s});
        return it == two_body.end() ? 0.0 : it->second;
    }

    void set_one_body(int p, int q, double v) {
        one_body[{p, q}] = v;
        one_body[{q, p}] = v;
    }

    void set_two_body(int p, int q, int r, int s, double v) {
        for (const auto& k : two_body_orbit(p, q, r, s)) two_body[k] = v;
    }

    /// The eight index permutations sharing a real two-electron integral.
    static std::array<TwoBodyKey, 8> two_body_orbit(int p, int q, int r, int s) {
        return {{{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r}, {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}}};
    }

    static TwoBodyKey two_body_representative(const TwoBodyKey& k) {
        auto orbit = two_body_orbit(k[0], k[1], k[2], k[3]);
        return *std::min_element(orbit.begin(), orbit.end());
    }

    friend bool operator==(const HamiltonianSpec&, const HamiltonianSpec&) = default;
};

class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

   private:
    std::size_t line_;
};

namespace detail {

inline std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

inline double parse_real(std::string tok, std::size_t line) {
    for (auto& c : tok) {
        if (c == 'D' || c == 'd') c = 'E';
    }
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "non-numeric value '" + tok + "'");
    }
}

inline int parse_int(const std::string& tok, std::size_t line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "non-integer value '" + tok + "'");
    }
}

}  // namespace detail

/// Parses FCIDUMP text: a namelist header (&FCI ... &END or a "/" line)
/// followed by "value i j k l" records.
inline HamiltonianSpec parse_fcidump(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;

    std::string header;
    bool header_done = false;
    bool header_started = false;
    std::size_t header_line = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string up = detail::upper(line);
        if (!header_started) {
            auto pos = up.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (up.compare(pos, 4, "&FCI") != 0 && up.compare(pos, 4, "$FCI") != 0) {
                throw ParseError(line_no, "expected '&FCI' namelist header");
            }
            header_started = true;
            header_line = line_no;
            up = up.substr(pos + 4);
        }
        auto end = up.find("&END");
        if (end == std::string::npos) end = up.find("$END");
        if (end == std::string::npos) {
            auto trimmed = up;
            trimmed.erase(std::remove_if(trimmed.begin(), trimmed.end(), [](unsigned char c) { return std::isspace(c); }),
                          trimmed.end());
            if (trimmed == "/") end = up.find('/');
        }
        if (end != std::string::npos) {
            header += up.substr(0, end) + " ";
            header_done = true;
            break;
        }
        header += up + " ";
    }
    if (!header_started) throw ParseError(line_no + 1, "missing '&FCI' namelist header");
    if (!header_done) throw ParseError(line_no, "unterminated namelist header");

    // Normalise "KEY = v1, v2," into tokens.
    std::string norm;
    for (char c : header) norm += (c == ',') ? ' ' : c;
    std::map<std::string, std::vector<std::string>> fields;
    {
        std::string spaced;
        for (char c : norm) {
            if (c == '=') {
                spaced += " = ";
            } else {
                spaced += c;
            }
        }
        std::istringstream ts(spaced);
        std::vector<std::string> toks;
        for (std::string t; ts >> t;) toks.push_back(t);
        std::string current;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (i + 1 < toks.size() && toks[i + 1] == "=") {
                current = toks[i];
                fields[current];
                ++i;
                continue;
            }
            if (current.empty()) throw ParseError(header_line, "malformed header token '" + toks[i] + "'");
            fields[current].push_back(toks[i]);
        }
    }
    auto scalar = [&](const std::string& key, bool required, int fallback) {
        auto it = fields.find(key);
        if (it == fields.end()) {
            if (required) throw ParseError(header_line, "header is missing " + key);
            return fallback;
        }
        if (it->second.size() != 1) throw ParseError(header_line, "header field " + key + " must have one value");
        return detail::parse_int(it->second[0], header_line);
    };
    if (auto it = fields.find("UHF"); it != fields.end() && !it->second.empty()) {
        auto v = it->second[0];
        if (v == ".TRUE." || v == "T" || v == "1" || v == "TRUE") {
            throw ParseError(header_line, "unrestricted (UHF) integrals are not supported");
        }
    }

    HamiltonianSpec spec;
    spec.n_spatial = scalar("NORB", true, 0);
    spec.n_electrons = scalar("NELEC", true, 0);
    spec.ms2 = scalar("MS2", false, 0);
    if (spec.n_spatial <= 0) throw ParseError(header_line, "NORB must be positive");

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks.size() != 5) throw ParseError(line_no, "expected 'value i j k l'");
        double v = detail::parse_real(toks[0], line_no);
        std::array<int, 4> idx{};
        for (int t = 0; t < 4; ++t) {
            idx[static_cast<std::size_t>(t)] = detail::parse_int(toks[static_cast<std::size_t>(t) + 1], line_no);
            if (idx[static_cast<std::size_t>(t)] < 0 || idx[static_cast<std::size_t>(t)] > spec.n_spatial) {
                throw ParseError(line_no, "orbital index out of declared range 1.." + std::to_string(spec.n_spatial));
            }
        }
        auto [i, j, k, l] = idx;
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            spec.core_energy = v;
        } else if (k == 0 && l == 0) {
            if (i == 0 || j == 0) {
                if (j == 0 && i > 0) continue;  // orbital energy record, unused
                throw ParseError(line_no, "malformed one-body record");
            }
            spec.set_one_body(i, j, v);
        } else {
            if (i == 0 || j == 0 || k == 0 || l == 0) throw ParseError(line_no, "malformed two-body record");
            spec.set_two_body(i, j, k, l, v);
        }
    }
    return spec;
}

inline std::string write_fcidump(const HamiltonianSpec& spec) {
    std::ostringstream out;
    out << "&FCI NORB=" << spec.n_spatial << ",NELEC=" << spec.n_electrons << ",MS2=" << spec.ms2 << ",\n";
    out << " ORBSYM=";
    for (int p = 0; p < spec.n_spatial; ++p) out << "1,";
    out << "\n ISYM=1,\n&END\n";
    out << std::setprecision(17);
    for (const auto& [k, v] : spec.two_body) {
        if (HamiltonianSpec::two_body_representative(k) == k) {
            out << v << ' ' << k[0] << ' ' << k[1] << ' ' << k[2] << ' ' << k[3] << '\n';
        }
    }
    for (const auto& [k, v] : spec.one_body) {
        if (k[0] <= k[1]) out << v << ' ' << k[0] << ' ' << k[1] << " 0 0\n";
    }
    out << spec.core_energy << " 0 0 0 0\n";
    return out.str();
}

inline nlohmann::json to_json(const HamiltonianSpec& spec) {
    nlohmann::json j;
    j["n_spatial"] = spec.n_spatial;
    j["n_electrons"] = spec.n_electrons;
    j["core"] = spec.core_energy;
    auto ob = nlohmann::json::array();
    for (const auto& [k, v] : spec.one_body) {
        if (k[0] <= k[1]) ob.push_back({k[0], k[1], v});
    }
    auto tb = nlohmann::json::array();
    for (const auto& [k, v] : spec.two_body) {
        if (HamiltonianSpec::two_body_representative(k) == k) tb.push_back({k[0], k[1], k[2], k[3], v});
    }
    j["one_body"] = std::move(ob);
    j["two_body"] = std::move(tb);
    return j;
}

inline HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j) {
    HamiltonianSpec spec;
    spec.n_spatial = j.at("n_spatial").get<int>();
    spec.n_electrons = j.value("n_electrons", 0);
    spec.core_energy = j.value("core", 0.0);
    if (spec.n_spatial <= 0) throw std::invalid_argument("n_spatial must be positive");
    auto in_range = [&](int p) {
        if (p < 1 || p > spec.n_spatial) throw std::out_of_range("orbital index out of range in Hamiltonian JSON");
        return p;
    };
    for (const auto& e : j.value("one_body", nlohmann::json::array())) {
        spec.set_one_body(in_range(e.at(0).get<int>()), in_range(e.at(1).get<int>()), e.at(2).get<double>());
    }
    for (const auto& e : j.value("two_body", nlohmann::json::array())) {
        spec.set_two_body(in_range(e.at(0).get<int>()), in_range(e.at(1).get<int>()), in_range(e.at(2).get<int>()),
                          in_range(e.at(3).get<int>()), e.at(4).get<double>());
    }
    return spec;
}

/// Spin-orbital index of spatial orbital p (1-based) in the blocked layout:
/// alpha occupies 0..n-1, beta occupies n..2n-1.
inline std::size_t spin_orbital(const HamiltonianSpec& spec, int p, int spin) {
    return static_cast<std::size_t>(p - 1 + spin * spec.n_spatial);
}

/// H = sum h_pq a+_p a_q + 1/2 sum (pq|rs) a+_p a+_r a_s a_q over spins,
/// reduced to canonical Hermitian-paired terms.
inline std::vector<ExcitationTerm> to_spin_orbital_terms(const HamiltonianSpec& spec,
                                                         double threshold = kDefaultThreshold) {
    std::vector<RawTerm> raw;
    raw.reserve(spec.one_body.size() * 2 + spec.two_body.size() * 4);
    for (const auto& [k, v] : spec.one_body) {
        for (int s = 0; s < 2; ++s) {
            raw.push_back({{spin_orbital(spec, k[0], s), spin_orbital(spec, k[1], s)}, v});
        }
    }
    for (const auto& [k, v] : spec.two_body) {
        auto [p, q, r, s] = k;
        for (int sigma = 0; sigma < 2; ++sigma) {
            for (int tau = 0; tau < 2; ++tau) {
                raw.push_back({{spin_orbital(spec, p, sigma), spin_orbital(spec, r, tau), spin_orbital(spec, s, tau),
                                spin_orbital(spec, q, sigma)},
                               0.5 * v});
            }
        }
    }
    return reduce_hermitian(raw, threshold);
}

/// Qubit-level view of a Hamiltonian: canonical terms plus a constant.
struct SpinOrbitalHamiltonian {
    std::size_t n_qubits = 0;
    double constant = 0.0;
    std::vector<ExcitationTerm> terms;
};

inline SpinOrbitalHamiltonian to_qubit_hamiltonian(const HamiltonianSpec& spec, double threshold = kDefaultThreshold) {
    return {spec.n_qubits(), spec.core_energy, to_spin_orbital_terms(spec, threshold)};
}

// splitmix64
class SplitMix64 {
   public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

   private:
    std::uint64_t state_;
};

enum class SynthKind { dense, chain };

struct SynthParams {
    SynthKind kind = SynthKind::dense;
    int n_spatial = 0;
    int width = 1;
    std::uint64_t seed = 7;
    /// Probability of keeping each unique integral; 1 keeps everything.
    double density = 1.0;
};

/// Deterministic synthetic integrals. Magnitudes lie in [0.01, 1] with random
/// sign. For `chain`, an integral is nonzero only when all of its orbital
/// indices lie within `width` of each other.
inline HamiltonianSpec synth_hamiltonian(const SynthParams& params) {
    if (params.n_spatial < 1) throw std::invalid_argument("synth: n_spatial must be >= 1");
    if (params.kind == SynthKind::chain && params.width < 0) throw std::invalid_argument("synth: width must be >= 0");
    if (params.density <= 0.0 || params.density > 1.0) throw std::invalid_argument("synth: density must be in (0, 1]");

    SplitMix64 rng(params.seed);
    auto value = [&] {
        double mag = 0.01 + 0.99 * rng.uniform();
        return (rng.next() & 1U) ? -mag : mag;
    };
    auto keep = [&](std::initializer_list<int> idx) {
        if (params.kind == SynthKind::chain) {
            auto [lo, hi] = std::minmax(idx);
            if (hi - lo > params.width) return false;
        }
        if (params.density < 1.0) return rng.uniform() < params.density;
        return true;
    };

    HamiltonianSpec spec;
    spec.n_spatial = params.n_spatial;
    spec.n_electrons = params.n_spatial;
    spec.core_energy = 0.5 + rng.uniform();
    const int n = params.n_spatial;
    for (int p = 1; p <= n; ++p) {
        for (int q = p; q <= n; ++q) {
            if (keep({p, q})) spec.set_one_body(p, q, value());
        }
    }
    for (int p = 1; p <= n; ++p) {
        for (int q = 1; q <= n; ++q) {
            for (int r = 1; r <= n; ++r) {
                for (int s = 1; s <= n; ++s) {
                    TwoBodyKey k{p, q, r, s};
                    if (HamiltonianSpec::two_body_representative(k) != k) continue;
                    if (keep({p, q, r, s})) spec.set_two_body(p, q, r, s, value());
                }
            }
        }
    }
    return spec;
}

}  // namespace hampart
