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
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hampart/baranyai.hpp"
#include "hampart/fermion_jw.hpp"
#include "hampart/ham_io.hpp"
#include "hampart/pauli.hpp"
#include "json.hpp"

namespace hampart {

// Spin-blocked layout: indices [0, N/2) are alpha, [N/2, N) are beta.

enum class TermSector { diagonal, triple, alpha_double, beta_double, cross_double };

inline std::string_view sector_name(TermSector s) {
    switch (s) {
        case TermSector::diagonal:
            return "diagonal";
        case TermSector::triple:
            return "triple";
        case TermSector::alpha_double:
            return "alpha-double";
        case TermSector::beta_double:
            return "beta-double";
        case TermSector::cross_double:
            return "cross-double";
    }
    return "?";
}

struct TermClass {
    TermSector sector = TermSector::diagonal;
    std::vector<std::size_t> active_indices;

    friend auto operator<=>(const TermClass&, const TermClass&) = default;
};

class SpinRuleError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

inline TermClass classify_term(const ExcitationTerm& t, std::size_t n_qubits) {
    if (n_qubits % 2 != 0) throw std::invalid_argument("spin-blocked layout needs an even qubit count");
    if (t.max_index() >= n_qubits) throw std::out_of_range("term index out of range");
    const std::size_t half = n_qubits / 2;
    std::size_t alpha = 0;
    for (auto i : t.creation) alpha += i < half;
    for (auto i : t.annihilation) alpha += i < half;
    if (alpha % 2 != 0) {
        throw SpinRuleError("term mixes spins: an odd number of its ladder indices are alpha");
    }
    TermClass c{TermSector::diagonal, t.active_indices()};
    switch (t.arity()) {
        case ExcitationArity::diagonal:
            break;
        case ExcitationArity::single:
        case ExcitationArity::repeated_double:
            c.sector = TermSector::triple;
            break;
        case ExcitationArity::disjoint_double:
            c.sector = alpha == 4 ? TermSector::alpha_double
                       : alpha == 0 ? TermSector::beta_double
                                    : TermSector::cross_double;
            break;
    }
    return c;
}

inline std::map<TermClass, std::vector<ExcitationTerm>> classify_terms(std::span<const ExcitationTerm> terms,
                                                                      std::size_t n_qubits) {
    std::map<TermClass, std::vector<ExcitationTerm>> out;
    for (const auto& t : terms) out[classify_term(t, n_qubits)].push_back(t);
    return out;
}

// ---------------------------------------------------------------------------
// Dense schedules

/// Baranyai classes of 4-subsets of the alpha indices, each concatenated with
/// the matching class over the beta indices. Subsets with virtual elements
/// are dropped.
inline std::vector<std::vector<Subset>> pure_spin_schedule(std::size_t n_qubits) {
    const int half = static_cast<int>(n_qubits / 2);
    std::vector<std::vector<Subset>> out;
    if (half < 4) return out;
    const auto& sched = cached_schedule(half, 4);
    for (const auto& cls : sched.classes) {
        auto& merged = out.emplace_back();
        for (const auto& s : cls) {
            if (sched.is_real(s)) merged.push_back(s);
        }
        for (const auto& s : cls) {
            if (!sched.is_real(s)) continue;
            Subset b = s;
            for (auto& e : b) e += half;
            merged.push_back(std::move(b));
        }
    }
    return out;
}

/// Circle-method 1-factorization of the complete graph on n vertices. For odd
/// n a virtual vertex is added and the pair it sits in is dropped.
inline std::vector<std::vector<std::pair<int, int>>> circle_matchings(int n) {
    std::vector<std::vector<std::pair<int, int>>> rounds;
    if (n < 2) return rounds;
    const int m = n % 2 == 0 ? n : n + 1;
    const int ring = m - 1;
    for (int r = 0; r < ring; ++r) {
        auto& cls = rounds.emplace_back();
        auto add = [&](int a, int b) {
            if (a >= n || b >= n) return;
            cls.emplace_back(std::min(a, b), std::max(a, b));
        };
        add(r, m - 1);
        for (int i = 1; i < m / 2; ++i) add((r + i) % ring, (r - i + ring) % ring);
        std::sort(cls.begin(), cls.end());
    }
    return rounds;
}

struct CrossGroupSpec {
    int alpha_class = 0;
    int beta_class = 0;
    int rotation = 0;
    /// (alpha pair, beta pair); slot i pairs alpha pair i with beta pair i+rotation.
    std::vector<std::pair<Subset, Subset>> combos;
};

/// For every alpha matching, beta matching and rotation offset: one group
/// pairing the i-th alpha pair with the (i+rotation)-th beta pair.
inline std::vector<CrossGroupSpec> cross_double_schedule(std::size_t n_qubits) {
    const int half = static_cast<int>(n_qubits / 2);
    std::vector<CrossGroupSpec> out;
    auto matchings = circle_matchings(half);
    for (std::size_t a = 0; a < matchings.size(); ++a) {
        const auto& A = matchings[a];
        for (std::size_t b = 0; b < matchings.size(); ++b) {
            const auto& B = matchings[b];
            const std::size_t m = A.size();
            for (std::size_t rho = 0; rho < m; ++rho) {
                CrossGroupSpec g{static_cast<int>(a), static_cast<int>(b), static_cast<int>(rho), {}};
                for (std::size_t i = 0; i < m; ++i) {
                    const auto& pa = A[i];
                    const auto& pb = B[(i + rho) % m];
                    g.combos.push_back({{pa.first, pa.second}, {pb.first + half, pb.second + half}});
                }
                out.push_back(std::move(g));
            }
        }
    }
    return out;
}

enum class TripleColor { blue, red };

inline std::string_view color_name(TripleColor c) { return c == TripleColor::blue ? "blue" : "red"; }

struct TripleGroupSpec {
    int class_index = 0;
    TripleColor color = TripleColor::blue;
    std::vector<Subset> triples;
};

/// Baranyai classes of 3-subsets over all indices (embedded when 3 does not
/// divide N), each split into a blue and a red group. Triples touching
/// virtual indices are omitted.
inline std::vector<TripleGroupSpec> triple_schedule(std::size_t n_qubits) {
    const auto& sched = cached_schedule(std::max(static_cast<int>(n_qubits), 3), 3);
    std::vector<TripleGroupSpec> out;
    for (std::size_t c = 0; c < sched.classes.size(); ++c) {
        std::vector<Subset> real;
        for (const auto& s : sched.classes[c]) {
            if (sched.is_real(s) && s.back() < static_cast<int>(n_qubits)) real.push_back(s);
        }
        out.push_back({static_cast<int>(c), TripleColor::blue, real});
        out.push_back({static_cast<int>(c), TripleColor::red, std::move(real)});
    }
    return out;
}

/// A triple-sector string: X or Y on a pair (a, b) with the Jordan-Wigner Z
/// chain between them, optionally with the letter at one further index
/// `decoration` flipped between I and Z.
struct TripleShape {
    std::size_t a = 0;
    std::size_t b = 0;
    bool yy = false;
    std::optional<std::size_t> decoration;
};

inline std::optional<TripleShape> triple_shape(const PauliString& p) {
    auto xs = p.x_support();
    if (xs.size() != 2) return std::nullopt;
    TripleShape s{xs[0], xs[1], p.z(xs[0]), std::nullopt};
    if (p.z(xs[1]) != s.yy) return std::nullopt;
    for (std::size_t q = 0; q < p.size(); ++q) {
        if (q == s.a || q == s.b) continue;
        bool chain = q > s.a && q < s.b;
        if (p.z(q) != chain) {
            if (s.decoration) return std::nullopt;
            s.decoration = q;
        }
    }
    return s;
}

/// Blue holds {XIX, YZY, IXX, ZYY, XXI, YYZ}; red holds {YIY, XZX, IYY, ZXX,
/// YYI, XXZ}: blue iff (pair is XX) == (letter at the third index is I).
inline TripleColor triple_color(const TripleShape& s, std::size_t third) {
    bool chain_z = third > s.a && third < s.b;
    bool letter_z = (s.decoration && *s.decoration == third) ? !chain_z : chain_z;
    bool xx = !s.yy;
    return (xx == !letter_z) ? TripleColor::blue : TripleColor::red;
}

/// The six strings of one color on triple p < q < r, with Jordan-Wigner
/// chains, on n_qubits qubits.
inline std::vector<PauliString> triple_pattern_strings(const Subset& triple, TripleColor color, std::size_t n_qubits) {
    if (triple.size() != 3) throw std::invalid_argument("triple_pattern_strings needs three indices");
    std::vector<PauliString> out;
    const std::size_t idx[3] = {static_cast<std::size_t>(triple[0]), static_cast<std::size_t>(triple[1]),
                                static_cast<std::size_t>(triple[2])};
    for (int third = 2; third >= 0; --third) {
        std::size_t a = idx[third == 0 ? 1 : 0];
        std::size_t b = idx[third == 2 ? 1 : 2];
        std::size_t j = idx[third];
        for (bool yy : {false, true}) {
            PauliString p(n_qubits);
            for (std::size_t q = a + 1; q < b; ++q) p.set(q, false, true);
            p.set(a, true, yy);
            p.set(b, true, yy);
            // blue: XX with I at j, YY with Z at j.
            bool letter_z = (color == TripleColor::blue) ? yy : !yy;
            p.set(j, false, letter_z);
            out.push_back(p.hermitian_form());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Groups

enum class GroupSector { diagonal, pure_spin_double, cross_double, triple_blue, triple_red };

inline std::string_view sector_name(GroupSector s) {
    switch (s) {
        case GroupSector::diagonal:
            return "diagonal";
        case GroupSector::pure_spin_double:
            return "pure-spin-double";
        case GroupSector::cross_double:
            return "cross-double";
        case GroupSector::triple_blue:
            return "triple-blue";
        case GroupSector::triple_red:
            return "triple-red";
    }
    return "?";
}

inline GroupSector group_sector_from_name(std::string_view name) {
    for (auto s : {GroupSector::diagonal, GroupSector::pure_spin_double, GroupSector::cross_double,
                   GroupSector::triple_blue, GroupSector::triple_red}) {
        if (sector_name(s) == name) return s;
    }
    throw std::invalid_argument("unknown group sector '" + std::string(name) + "'");
}

inline bool is_double_sector(GroupSector s) {
    return s == GroupSector::pure_spin_double || s == GroupSector::cross_double;
}

/// Dense-schedule coordinates of a group's first member. For cross doubles
/// class_index = alpha_class * n_matchings + beta_class.
struct ScheduleId {
    int class_index = -1;
    int rotation = -1;
};

/// Strings sharing one index set (the item that was packed), with the terms
/// they came from.
struct GroupMember {
    std::vector<std::size_t> indices;
    std::vector<ExcitationTerm> terms;
    std::vector<WeightedPauli> strings;
};

struct CommutingGroup {
    std::size_t n_qubits = 0;
    GroupSector sector = GroupSector::diagonal;
    ScheduleId schedule_id;
    std::vector<GroupMember> members;

    std::vector<WeightedPauli> strings() const {
        std::vector<WeightedPauli> out;
        for (const auto& m : members) out.insert(out.end(), m.strings.begin(), m.strings.end());
        return out;
    }

    std::size_t string_count() const {
        std::size_t n = 0;
        for (const auto& m : members) n += m.strings.size();
        return n;
    }
};

/// Index of the first pair of strings that fail to commute, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> first_anticommuting_pair(std::span<const WeightedPauli> s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (!commutes(s[i].string, s[j].string)) return std::make_pair(i, j);
        }
    }
    return std::nullopt;
}

class GroupVerificationError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

struct Partition {
    std::size_t n_qubits = 0;
    std::vector<CommutingGroup> groups;

    std::size_t string_count() const {
        std::size_t n = 0;
        for (const auto& g : groups) n += g.string_count();
        return n;
    }

    std::size_t count(GroupSector s) const {
        return static_cast<std::size_t>(
            std::count_if(groups.begin(), groups.end(), [&](const CommutingGroup& g) { return g.sector == s; }));
    }

    std::size_t double_group_count() const { return count(GroupSector::pure_spin_double) + count(GroupSector::cross_double); }
};

namespace detail {

struct SectorSum {
    PauliSum sum;
    std::map<PauliString, std::vector<const ExcitationTerm*>> origin;

    void add(const ExcitationTerm& t, std::size_t n) {
        for (auto& wp : jw_excitation(t, n)) {
            sum[wp.string] += wp.weight;
            auto& o = origin[wp.string];
            if (o.empty() || o.back() != &t) o.push_back(&t);
        }
    }
};

inline void collect_terms(GroupMember& m, const SectorSum& ss) {
    std::set<const ExcitationTerm*> seen;
    for (const auto& wp : m.strings) {
        auto it = ss.origin.find(wp.string);
        if (it == ss.origin.end()) continue;
        for (auto* t : it->second) {
            if (seen.insert(t).second) m.terms.push_back(*t);
        }
    }
}

inline std::vector<std::size_t> to_indices(const Subset& s) { return {s.begin(), s.end()}; }

inline Subset sorted_subset(std::initializer_list<std::size_t> idx) {
    Subset s;
    for (auto i : idx) s.push_back(static_cast<int>(i));
    std::sort(s.begin(), s.end());
    return s;
}

struct PackedItem {
    std::pair<int, int> position;
    GroupMember member;
};

// Sort by dense position, first-fit by index disjointness, emit groups.
inline void pack_members(std::vector<PackedItem> items, std::size_t n_qubits, GroupSector sector,
                         const std::vector<int>& rotation_of_class, PackOrder order, std::vector<CommutingGroup>& out) {
    std::stable_sort(items.begin(), items.end(),
                     [](const PackedItem& x, const PackedItem& y) { return x.position < y.position; });
    std::vector<std::vector<int>> sets;
    sets.reserve(items.size());
    for (const auto& it : items) sets.emplace_back(it.member.indices.begin(), it.member.indices.end());
    for (const auto& grp : first_fit_pack(sets, order)) {
        CommutingGroup g;
        g.n_qubits = n_qubits;
        g.sector = sector;
        int cls = items[grp.front()].position.first;
        g.schedule_id = {cls, rotation_of_class.empty() ? -1 : rotation_of_class[static_cast<std::size_t>(cls)]};
        for (auto i : grp) g.members.push_back(std::move(items[i].member));
        out.push_back(std::move(g));
    }
}

}  // namespace detail

/// Classify, expand, schedule and pack every sector; one diagonal group holds
/// all {Z,I} strings. Every group is checked for pairwise commutation before
/// it is returned.
inline Partition partition_hamiltonian(std::span<const ExcitationTerm> terms, std::size_t n_qubits,
                                       double constant = 0.0, double threshold = kDefaultThreshold,
                                       PackOrder order = PackOrder::fewest) {
    Partition part;
    part.n_qubits = n_qubits;
    if (n_qubits == 0) return part;
    const std::size_t half = n_qubits / 2;
    auto classes = classify_terms(terms, n_qubits);

    // Diagonal.
    {
        detail::SectorSum ss;
        if (constant != 0.0) ss.sum[PauliString(n_qubits)] += constant;
        for (const auto& [cls, ts] : classes) {
            if (cls.sector != TermSector::diagonal) continue;
            for (const auto& t : ts) ss.add(t, n_qubits);
        }
        GroupMember m;
        m.strings = to_weighted(ss.sum, threshold);
        detail::collect_terms(m, ss);
        if (!m.strings.empty()) {
            CommutingGroup g;
            g.n_qubits = n_qubits;
            g.sector = GroupSector::diagonal;
            g.members.push_back(std::move(m));
            part.groups.push_back(std::move(g));
        }
    }

    // Pure-spin doubles.
    {
        std::vector<detail::PackedItem> items;
        std::map<Subset, std::pair<int, int>> pos;
        int slots = 0;
        if (half >= 4) {
            const auto& sched = cached_schedule(static_cast<int>(half), 4);
            pos = sched.positions();
            slots = sched.n / 4;
        }
        for (const auto& [cls, ts] : classes) {
            if (cls.sector != TermSector::alpha_double && cls.sector != TermSector::beta_double) continue;
            detail::SectorSum ss;
            for (const auto& t : ts) ss.add(t, n_qubits);
            GroupMember m;
            m.indices = cls.active_indices;
            m.strings = to_weighted(ss.sum, threshold);
            if (m.strings.empty()) continue;
            detail::collect_terms(m, ss);
            bool beta = cls.sector == TermSector::beta_double;
            Subset local;
            for (auto i : cls.active_indices) local.push_back(static_cast<int>(beta ? i - half : i));
            auto it = pos.find(local);
            if (it == pos.end()) throw std::logic_error("pure-spin subset missing from schedule");
            items.push_back({{it->second.first, it->second.second + (beta ? slots : 0)}, std::move(m)});
        }
        detail::pack_members(std::move(items), n_qubits, GroupSector::pure_spin_double, {}, order, part.groups);
    }

    // Cross doubles.
    {
        auto sched = cross_double_schedule(n_qubits);
        std::map<std::pair<Subset, Subset>, std::pair<int, int>> pos;
        std::vector<int> rotation;
        std::vector<int> class_of_group;
        const int n_match = static_cast<int>(circle_matchings(static_cast<int>(half)).size());
        for (std::size_t g = 0; g < sched.size(); ++g) {
            for (std::size_t s = 0; s < sched[g].combos.size(); ++s) {
                pos.emplace(sched[g].combos[s], std::pair<int, int>{static_cast<int>(g), static_cast<int>(s)});
            }
            rotation.push_back(sched[g].rotation);
        }
        std::vector<detail::PackedItem> items;
        for (const auto& [cls, ts] : classes) {
            if (cls.sector != TermSector::cross_double) continue;
            detail::SectorSum ss;
            for (const auto& t : ts) ss.add(t, n_qubits);
            GroupMember m;
            m.indices = cls.active_indices;
            m.strings = to_weighted(ss.sum, threshold);
            if (m.strings.empty()) continue;
            detail::collect_terms(m, ss);
            Subset a, b;
            for (auto i : cls.active_indices) (i < half ? a : b).push_back(static_cast<int>(i));
            auto it = pos.find({a, b});
            if (it == pos.end()) throw std::logic_error("cross double missing from schedule");
            items.push_back({it->second, std::move(m)});
        }
        std::size_t first = part.groups.size();
        detail::pack_members(std::move(items), n_qubits, GroupSector::cross_double, rotation, order, part.groups);
        for (std::size_t g = first; g < part.groups.size(); ++g) {
            auto& id = part.groups[g].schedule_id;
            const auto& spec = sched[static_cast<std::size_t>(id.class_index)];
            id.class_index = spec.alpha_class * n_match + spec.beta_class;
        }
    }

    // Singles and one-repeat doubles share the triple schedule.
    {
        detail::SectorSum ss;
        for (const auto& [cls, ts] : classes) {
            if (cls.sector != TermSector::triple) continue;
            for (const auto& t : ts) ss.add(t, n_qubits);
        }
        auto strings = to_weighted(ss.sum, threshold);
        if (!strings.empty()) {
            const auto& sched = cached_schedule(std::max(static_cast<int>(n_qubits), 3), 3);
            auto pos = sched.positions();
            std::set<Subset> present;
            struct Placed {
                WeightedPauli wp;
                Subset triple;
                TripleColor color;
            };
            std::vector<Placed> placed;
            std::vector<std::pair<WeightedPauli, TripleShape>> pure;
            for (auto& wp : strings) {
                auto shape = triple_shape(wp.string);
                if (!shape) throw std::logic_error("string " + wp.string.label() + " does not fit the triple sector");
                if (shape->decoration) {
                    Subset t = detail::sorted_subset({shape->a, shape->b, *shape->decoration});
                    present.insert(t);
                    placed.push_back({std::move(wp), t, triple_color(*shape, *shape->decoration)});
                } else {
                    pure.emplace_back(std::move(wp), *shape);
                }
            }
            for (auto& [wp, shape] : pure) {
                std::optional<Subset> best;
                std::pair<int, int> best_pos{};
                bool best_present = false;
                for (int j = 0; j < sched.n; ++j) {
                    if (static_cast<std::size_t>(j) == shape.a || static_cast<std::size_t>(j) == shape.b) continue;
                    Subset t = detail::sorted_subset({shape.a, shape.b, static_cast<std::size_t>(j)});
                    bool is_present = present.count(t) != 0;
                    auto p = pos.at(t);
                    // Prefer a triple that is already present, then the earliest.
                    if (!best || (is_present && !best_present) || (is_present == best_present && p < best_pos)) {
                        best = t;
                        best_pos = p;
                        best_present = is_present;
                    }
                }
                const Subset& t = *best;
                std::size_t third = 0;
                for (int e : t) {
                    if (static_cast<std::size_t>(e) != shape.a && static_cast<std::size_t>(e) != shape.b) {
                        third = static_cast<std::size_t>(e);
                    }
                }
                present.insert(t);
                placed.push_back({std::move(wp), t, triple_color(shape, third)});
            }

            std::map<Subset, std::vector<const Placed*>> by_triple;
            for (const auto& p : placed) by_triple[p.triple].push_back(&p);
            auto packed = greedy_pack(std::vector<Subset>(present.begin(), present.end()), sched, order);
            for (const auto& grp : packed) {
                int cls = pos.at(grp.front()).first;
                for (auto color : {TripleColor::blue, TripleColor::red}) {
                    CommutingGroup g;
                    g.n_qubits = n_qubits;
                    g.sector = color == TripleColor::blue ? GroupSector::triple_blue : GroupSector::triple_red;
                    g.schedule_id = {cls, -1};
                    for (const auto& t : grp) {
                        GroupMember m;
                        m.indices = detail::to_indices(t);
                        for (const auto* p : by_triple[t]) {
                            if (p->color == color) m.strings.push_back(p->wp);
                        }
                        if (m.strings.empty()) continue;
                        detail::collect_terms(m, ss);
                        g.members.push_back(std::move(m));
                    }
                    if (!g.members.empty()) part.groups.push_back(std::move(g));
                }
            }
        }
    }

    // Verify: pairwise commutation and no string in two groups.
    std::set<PauliString> seen;
    for (std::size_t gi = 0; gi < part.groups.size(); ++gi) {
        const auto& g = part.groups[gi];
        auto s = g.strings();
        for (const auto& wp : s) {
            if (!seen.insert(wp.string).second) {
                throw GroupVerificationError("string " + wp.string.label() + " placed in two groups");
            }
        }
        if (g.sector == GroupSector::diagonal) {
            for (const auto& wp : s) {
                if (!wp.string.is_diagonal()) throw GroupVerificationError("non-diagonal string in diagonal group");
            }
        } else if (auto bad = first_anticommuting_pair(s)) {
            throw GroupVerificationError("group " + std::to_string(gi) + " (" + std::string(sector_name(g.sector)) +
                                         "): " + s[bad->first].string.label() + " and " +
                                         s[bad->second].string.label() + " anticommute");
        }
    }
    return part;
}

inline Partition partition_hamiltonian(const SpinOrbitalHamiltonian& h, double threshold = kDefaultThreshold,
                                       PackOrder order = PackOrder::fewest) {
    return partition_hamiltonian(h.terms, h.n_qubits, h.constant, threshold, order);
}

/// Dense-case double-excitation group count with spin factorization:
/// pure-spin classes plus C(N/2, 2) * (matching classes on N/2 indices).
inline std::uint64_t spin_predicted_counts(std::size_t n_qubits) {
    if (n_qubits % 2 != 0) throw std::invalid_argument("spin_predicted_counts needs an even qubit count");
    const int half = static_cast<int>(n_qubits / 2);
    std::uint64_t pure = half >= 4 ? predicted_class_count(half, 4) : 0;
    std::uint64_t cross = half >= 2 ? binomial(half, 2) * predicted_class_count(half, 2) : 0;
    return pure + cross;
}

/// Double-excitation group count without spin factorization.
inline std::uint64_t unfactorized_double_count(std::size_t n_qubits) {
    return n_qubits >= 4 ? predicted_class_count(static_cast<int>(n_qubits), 4) : 0;
}

/// Dense prediction for all sectors: doubles, blue and red triple halves, and
/// the diagonal group.
inline std::uint64_t predicted_total_groups(std::size_t n_qubits) {
    return spin_predicted_counts(n_qubits) + 2 * predicted_class_count(std::max(static_cast<int>(n_qubits), 3), 3) + 1;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const CommutingGroup& g) {
    nlohmann::json strings = nlohmann::json::array();
    for (const auto& wp : g.strings()) strings.push_back({{"label", wp.string.label()}, {"weight", wp.weight}});
    return {{"sector", std::string(sector_name(g.sector))},
            {"schedule_id", {{"class", g.schedule_id.class_index}, {"rotation", g.schedule_id.rotation}}},
            {"strings", std::move(strings)}};
}

inline nlohmann::json to_json(const Partition& p) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : p.groups) groups.push_back(to_json(g));
    return {{"n_qubits", p.n_qubits}, {"groups", std::move(groups)}};
}

/// Reads a groups file. Strings are taken as given; nothing is verified here.
inline Partition partition_from_json(const nlohmann::json& j) {
    Partition p;
    p.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const auto& jg : j.at("groups")) {
        CommutingGroup g;
        g.n_qubits = p.n_qubits;
        g.sector = group_sector_from_name(jg.value("sector", std::string("diagonal")));
        if (jg.contains("schedule_id")) {
            g.schedule_id = {jg["schedule_id"].value("class", -1), jg["schedule_id"].value("rotation", -1)};
        }
        GroupMember m;
        for (const auto& js : jg.at("strings")) {
            auto label = js.at("label").get<std::string>();
            if (label.size() != p.n_qubits) throw std::invalid_argument("string '" + label + "' has wrong length");
            m.strings.push_back({PauliString::from_labels(label), js.at("weight").get<double>()});
        }
        g.members.push_back(std::move(m));
        p.groups.push_back(std::move(g));
    }
    return p;
}

}  // namespace hampart
