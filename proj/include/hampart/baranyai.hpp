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
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hampart {

/// Sorted, 0-based element indices.
using Subset = std::vector<int>;

inline std::uint64_t binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (long long i = 1; i <= k; ++i) {
        // r * (n - k + i) / i is exact at every step.
        auto num = static_cast<unsigned __int128>(r) * static_cast<std::uint64_t>(n - k + i);
        num /= static_cast<std::uint64_t>(i);
        if (num > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("binomial overflow");
        r = static_cast<std::uint64_t>(num);
    }
    return r;
}

/// Size of the ground set after embedding: n itself when k | n, otherwise the
/// next multiple of k.
inline int embedded_size(int n, int k) {
    int r = n % k;
    return r == 0 ? n : n + k - r;
}

/// C(n-1, k-1) when k | n, else C(n+k-r-1, k-1) with r = n mod k.
inline std::uint64_t predicted_class_count(int n, int k) {
    if (k < 1 || n < k) throw std::invalid_argument("predicted_class_count requires n >= k >= 1");
    return binomial(embedded_size(n, k) - 1, k - 1);
}

/// Class count of the alternative that packs into the smaller space n - r and
/// repeats it for every choice of the r leftover elements.
inline std::uint64_t smaller_embedding_class_count(int n, int k) {
    int r = n % k;
    return binomial(n - r - 1, k - 1) * binomial(n, r);
}

/// Partition of all k-subsets of [n] into classes of n/k disjoint subsets.
/// Elements >= embedded_from are virtual (added so that k divides n).
struct SubsetSchedule {
    int n = 0;
    int k = 0;
    int embedded_from = 0;
    std::vector<std::vector<Subset>> classes;

    int virtual_count() const { return n - embedded_from; }
    bool is_real(const Subset& s) const { return s.empty() || s.back() < embedded_from; }

    /// (class, slot) of every subset, class-major.
    std::map<Subset, std::pair<int, int>> positions() const {
        std::map<Subset, std::pair<int, int>> pos;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            for (std::size_t s = 0; s < classes[c].size(); ++s) {
                pos.emplace(classes[c][s], std::pair<int, int>{static_cast<int>(c), static_cast<int>(s)});
            }
        }
        return pos;
    }

    friend bool operator==(const SubsetSchedule&, const SubsetSchedule&) = default;
};

/// Integer-capacity directed network with residual arcs. Ford-Fulkerson with
/// breadth-first augmenting paths; arcs are scanned in insertion order so the
/// result is deterministic.
class FlowNetwork {
   public:
    int add_node() {
        adj_.emplace_back();
        return static_cast<int>(adj_.size()) - 1;
    }

    int add_arc(int from, int to, long long capacity) {
        if (capacity < 0) throw std::invalid_argument("negative arc capacity");
        int id = static_cast<int>(arcs_.size());
        arcs_.push_back({to, capacity, 0});
        arcs_.push_back({from, 0, 0});
        adj_[static_cast<std::size_t>(from)].push_back(id);
        adj_[static_cast<std::size_t>(to)].push_back(id + 1);
        return id;
    }

    std::size_t node_count() const { return adj_.size(); }
    long long flow(int arc) const { return arcs_[static_cast<std::size_t>(arc)].flow; }
    long long capacity(int arc) const { return arcs_[static_cast<std::size_t>(arc)].cap; }
    int head(int arc) const { return arcs_[static_cast<std::size_t>(arc)].to; }

    long long max_flow(int source, int sink) {
        long long total = seed_short_paths(source, sink);
        std::vector<int> parent_arc(adj_.size());
        while (true) {
            std::fill(parent_arc.begin(), parent_arc.end(), -1);
            std::deque<int> queue{source};
            parent_arc[static_cast<std::size_t>(source)] = -2;
            while (!queue.empty() && parent_arc[static_cast<std::size_t>(sink)] == -1) {
                int u = queue.front();
                queue.pop_front();
                for (int a : adj_[static_cast<std::size_t>(u)]) {
                    const Arc& arc = arcs_[static_cast<std::size_t>(a)];
                    if (arc.cap - arc.flow > 0 && parent_arc[static_cast<std::size_t>(arc.to)] == -1) {
                        parent_arc[static_cast<std::size_t>(arc.to)] = a;
                        queue.push_back(arc.to);
                    }
                }
            }
            if (parent_arc[static_cast<std::size_t>(sink)] == -1) break;
            long long push = std::numeric_limits<long long>::max();
            for (int v = sink; v != source;) {
                int a = parent_arc[static_cast<std::size_t>(v)];
                push = std::min(push, arcs_[static_cast<std::size_t>(a)].cap - arcs_[static_cast<std::size_t>(a)].flow);
                v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
            }
            for (int v = sink; v != source;) {
                int a = parent_arc[static_cast<std::size_t>(v)];
                arcs_[static_cast<std::size_t>(a)].flow += push;
                arcs_[static_cast<std::size_t>(a ^ 1)].flow -= push;
                v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
            }
            total += push;
        }
        return total;
    }

   private:
    struct Arc {
        int to;
        long long cap;
        long long flow;
    };

    void push_along(std::initializer_list<int> path, long long amount) {
        for (int a : path) {
            arcs_[static_cast<std::size_t>(a)].flow += amount;
            arcs_[static_cast<std::size_t>(a ^ 1)].flow -= amount;
        }
    }

    long long residual(int a) const {
        return arcs_[static_cast<std::size_t>(a)].cap - arcs_[static_cast<std::size_t>(a)].flow;
    }

    // Augments along every source->u->v->sink path in scan order before the
    // breadth-first phase; these are the shortest augmenting paths anyway.
    long long seed_short_paths(int source, int sink) {
        std::vector<int> to_sink(adj_.size(), -1);
        for (int a : adj_[static_cast<std::size_t>(sink)]) {
            if ((a & 1) != 0) to_sink[static_cast<std::size_t>(arcs_[static_cast<std::size_t>(a)].to)] = a ^ 1;
        }
        long long total = 0;
        for (int a1 : adj_[static_cast<std::size_t>(source)]) {
            if ((a1 & 1) != 0) continue;
            int u = arcs_[static_cast<std::size_t>(a1)].to;
            for (int a2 : adj_[static_cast<std::size_t>(u)]) {
                if ((a2 & 1) != 0 || residual(a1) == 0) continue;
                int a3 = to_sink[static_cast<std::size_t>(arcs_[static_cast<std::size_t>(a2)].to)];
                if (a3 < 0) continue;
                long long push = std::min({residual(a1), residual(a2), residual(a3)});
                if (push > 0) {
                    push_along({a1, a2, a3}, push);
                    total += push;
                }
            }
        }
        return total;
    }

    std::vector<std::vector<int>> adj_;
    std::vector<Arc> arcs_;
};

/// Flow network for adding element m to every class of a partial schedule.
///
/// source -> class c (cap 1); class c -> partial subset A (cap = multiplicity
/// of A among c's slots, |A| < k); A -> sink (cap C(n-m-1, k-|A|-1)).
struct StageNetwork {
    FlowNetwork net;
    int source = 0;
    int sink = 0;
    std::vector<Subset> partials;
    // Per class: (arc id, index into partials).
    std::vector<std::vector<std::pair<int, int>>> class_arcs;
    long long required = 0;
};

inline StageNetwork build_stage(const std::vector<std::vector<Subset>>& classes, int n, int k, int m) {
    StageNetwork st;
    st.source = st.net.add_node();
    std::vector<int> class_nodes;
    class_nodes.reserve(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) class_nodes.push_back(st.net.add_node());

    std::map<Subset, int> partial_id;
    std::vector<int> partial_nodes;
    st.class_arcs.resize(classes.size());
    std::vector<std::pair<int, long long>> pending;  // (partial index, multiplicity)
    for (std::size_t c = 0; c < classes.size(); ++c) {
        st.net.add_arc(st.source, class_nodes[c], 1);
        pending.clear();
        for (const auto& slot : classes[c]) {
            if (static_cast<int>(slot.size()) >= k) continue;
            auto [it, inserted] = partial_id.emplace(slot, static_cast<int>(st.partials.size()));
            if (inserted) {
                st.partials.push_back(slot);
                partial_nodes.push_back(st.net.add_node());
            }
            auto found = std::find_if(pending.begin(), pending.end(), [&](const auto& p) { return p.first == it->second; });
            if (found == pending.end()) {
                pending.emplace_back(it->second, 1);
            } else {
                ++found->second;
            }
        }
        for (auto [pid, mult] : pending) {
            int arc = st.net.add_arc(class_nodes[c], partial_nodes[static_cast<std::size_t>(pid)], mult);
            st.class_arcs[c].emplace_back(arc, pid);
        }
    }
    st.sink = st.net.add_node();
    for (std::size_t p = 0; p < st.partials.size(); ++p) {
        auto cap = binomial(n - m - 1, k - static_cast<long long>(st.partials[p].size()) - 1);
        st.net.add_arc(partial_nodes[p], st.sink, static_cast<long long>(cap));
    }
    st.required = static_cast<long long>(classes.size());
    return st;
}

class FlowInfeasibleError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// Integral max flow for one stage; returns, per class, the index into
/// `stage.partials` of the subset that receives the new element.
inline std::vector<int> solve_stage(StageNetwork& stage) {
    long long value = stage.net.max_flow(stage.source, stage.sink);
    if (value != stage.required) {
        throw FlowInfeasibleError("stage max flow " + std::to_string(value) + " below class count " +
                                  std::to_string(stage.required));
    }
    std::vector<int> choice(stage.class_arcs.size(), -1);
    for (std::size_t c = 0; c < stage.class_arcs.size(); ++c) {
        for (auto [arc, pid] : stage.class_arcs[c]) {
            if (stage.net.flow(arc) > 0) {
                choice[c] = pid;
                break;
            }
        }
        if (choice[c] < 0) throw FlowInfeasibleError("class left without an extended subset");
    }
    return choice;
}

/// Baranyai partition of the k-subsets of [n], built element by element with
/// one integral max-flow per element. When k does not divide n the ground set
/// is padded with virtual elements n..n'-1.
inline SubsetSchedule baranyai_partition(int n, int k) {
    if (k < 1 || n < k) throw std::invalid_argument("baranyai_partition requires n >= k >= 1");
    SubsetSchedule sched;
    sched.embedded_from = n;
    sched.n = embedded_size(n, k);
    sched.k = k;
    const int slots = sched.n / k;
    const auto n_classes = binomial(sched.n - 1, k - 1);
    std::vector<std::vector<Subset>> classes(n_classes, std::vector<Subset>(static_cast<std::size_t>(slots)));

    for (int m = 0; m < sched.n; ++m) {
        StageNetwork stage = build_stage(classes, sched.n, k, m);
        auto choice = solve_stage(stage);
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const Subset& target = stage.partials[static_cast<std::size_t>(choice[c])];
            for (auto& slot : classes[c]) {
                if (slot == target) {
                    slot.push_back(m);
                    break;
                }
            }
        }
    }
    for (auto& cls : classes) std::sort(cls.begin(), cls.end());
    sched.classes = std::move(classes);
    return sched;
}

/// Checks exactly-once coverage, per-class disjoint perfect covers and the
/// class count. Returns an empty string when valid.
inline std::string schedule_violation(const SubsetSchedule& s) {
    if (s.k < 1 || s.n % s.k != 0) return "k does not divide n";
    if (s.classes.size() != binomial(s.n - 1, s.k - 1)) return "wrong class count";
    std::set<Subset> seen;
    for (const auto& cls : s.classes) {
        if (static_cast<int>(cls.size()) != s.n / s.k) return "class has wrong number of subsets";
        std::vector<bool> used(static_cast<std::size_t>(s.n), false);
        for (const auto& sub : cls) {
            if (static_cast<int>(sub.size()) != s.k) return "subset of wrong size";
            for (int e : sub) {
                if (e < 0 || e >= s.n) return "element out of range";
                if (used[static_cast<std::size_t>(e)]) return "class is not disjoint";
                used[static_cast<std::size_t>(e)] = true;
            }
            if (!seen.insert(sub).second) return "subset appears twice";
        }
    }
    if (seen.size() != binomial(s.n, s.k)) return "not every subset covered";
    return {};
}

/// Process-wide schedule cache keyed by (n, k). Returned references stay valid.
inline const SubsetSchedule& cached_schedule(int n, int k) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, SubsetSchedule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, baranyai_partition(n, k)).first;
    return it->second;
}

inline constexpr int kScheduleFormatVersion = 1;

inline nlohmann::json to_json(const SubsetSchedule& s) {
    return {{"version", kScheduleFormatVersion},
            {"n", s.n},
            {"k", s.k},
            {"embedded_from", s.embedded_from},
            {"classes", s.classes}};
}

inline SubsetSchedule schedule_from_json(const nlohmann::json& j) {
    if (j.value("version", 0) != kScheduleFormatVersion) throw std::invalid_argument("unsupported schedule cache version");
    SubsetSchedule s;
    s.n = j.at("n").get<int>();
    s.k = j.at("k").get<int>();
    s.embedded_from = j.value("embedded_from", s.n);
    s.classes = j.at("classes").get<std::vector<std::vector<Subset>>>();
    if (auto err = schedule_violation(s); !err.empty()) throw std::invalid_argument("invalid schedule cache: " + err);
    return s;
}

/// First-fit packing of index sets, in the given order: an item joins the
/// first group whose members are all index-disjoint from it.
inline std::vector<std::vector<std::size_t>> first_fit_pack(const std::vector<std::vector<int>>& items) {
    int universe = 0;
    for (const auto& it : items) {
        for (int e : it) universe = std::max(universe, e + 1);
    }
    const std::size_t words = (static_cast<std::size_t>(universe) + 63) / 64;
    std::vector<std::vector<std::uint64_t>> used;
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::uint64_t> mask(words);
    for (std::size_t i = 0; i < items.size(); ++i) {
        std::fill(mask.begin(), mask.end(), 0);
        for (int e : items[i]) mask[static_cast<std::size_t>(e) / 64] |= std::uint64_t{1} << (e % 64);
        std::size_t g = 0;
        for (; g < groups.size(); ++g) {
            bool clash = false;
            for (std::size_t w = 0; w < words && !clash; ++w) clash = (used[g][w] & mask[w]) != 0;
            if (!clash) break;
        }
        if (g == groups.size()) {
            groups.emplace_back();
            used.emplace_back(words, 0);
        }
        groups[g].push_back(i);
        for (std::size_t w = 0; w < words; ++w) used[g][w] |= mask[w];
    }
    return groups;
}

/// Visit order for first-fit packing. `schedule` keeps the caller's order
/// (dense-schedule position); `lexicographic` sorts items by their sorted
/// index lists; `fewest` runs both and keeps the smaller packing, preferring
/// `schedule` on ties.
enum class PackOrder { schedule, lexicographic, fewest };

/// first_fit_pack with `items` given in schedule order.
inline std::vector<std::vector<std::size_t>> first_fit_pack(const std::vector<std::vector<int>>& items, PackOrder order) {
    if (order == PackOrder::schedule) return first_fit_pack(items);
    std::vector<std::size_t> perm(items.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return items[a] < items[b]; });
    std::vector<std::vector<int>> sorted;
    sorted.reserve(items.size());
    for (auto i : perm) sorted.push_back(items[i]);
    auto lex = first_fit_pack(sorted);
    for (auto& g : lex) {
        for (auto& i : g) i = perm[i];
    }
    if (order == PackOrder::lexicographic) return lex;
    auto sched = first_fit_pack(items);
    return lex.size() < sched.size() ? lex : sched;
}

/// Orders `present` by its position in the dense schedule (class-major,
/// slot-minor) and packs it first-fit. With every real subset present the
/// groups equal the schedule's classes.
inline std::vector<std::vector<Subset>> greedy_pack(const std::vector<Subset>& present, const SubsetSchedule& schedule,
                                                    PackOrder pack_order = PackOrder::fewest) {
    auto pos = schedule.positions();
    std::vector<std::pair<std::pair<int, int>, const Subset*>> order;
    order.reserve(present.size());
    std::set<Subset> distinct;
    for (const auto& s : present) {
        auto it = pos.find(s);
        if (it == pos.end()) throw std::invalid_argument("greedy_pack: subset is not in the schedule");
        if (!distinct.insert(s).second) throw std::invalid_argument("greedy_pack: duplicate subset");
        order.emplace_back(it->second, &s);
    }
    std::sort(order.begin(), order.end());
    std::vector<std::vector<int>> items;
    items.reserve(order.size());
    for (const auto& o : order) items.push_back(*o.second);
    auto packed = first_fit_pack(items, pack_order);
    std::vector<std::vector<Subset>> out;
    out.reserve(packed.size());
    for (const auto& g : packed) {
        auto& grp = out.emplace_back();
        for (auto i : g) grp.push_back(items[i]);
    }
    return out;
}

}  // namespace hampart
