#pragma once

// Connected trivalent graphs with leaves and short loops, plus binary rooted
// trees. Graphs are stored as dart (half-edge) structures: dart 3*v+s sits in
// slot s of vertex v, the involution pairs darts into edges and fixes leaves.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace csm {

struct TrivalentGraph {
    int n_vertices = 0;
    std::vector<int> pairing;  // pairing[d] = partner dart, or d itself for a leaf
    bool single_edge = false;  // the V=0 two-leaf graph carrying the Theta term
    long long aut_order = 1;
    int loop_number = 0;

    int n_darts() const { return single_edge ? 2 : 3 * n_vertices; }
    int vertex_of(int dart) const { return dart / 3; }
    bool is_leaf(int dart) const { return pairing[dart] == dart; }

    int n_leaves() const {
        if (single_edge) return 2;  // the two ends carry the leaf decorations
        int c = 0;
        for (int d = 0; d < n_darts(); ++d)
            if (is_leaf(d)) ++c;
        return c;
    }
    int n_edges() const { return single_edge ? 1 : (n_darts() - n_leaves()) / 2; }

    // Edges as ordered pairs (d1 < d2), deterministic order.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> e;
        for (int d = 0; d < n_darts(); ++d)
            if (pairing[d] > d) e.emplace_back(d, pairing[d]);
        return e;
    }
    std::vector<int> leaves() const {
        std::vector<int> l;
        for (int d = 0; d < n_darts(); ++d)
            if (is_leaf(d)) l.push_back(d);
        return l;
    }

    bool is_short_loop(int d1, int d2) const { return vertex_of(d1) == vertex_of(d2); }

    // Canonical text encoding, one line per graph.
    std::string encode() const {
        if (single_edge) return "E";
        std::string s = "V" + std::to_string(n_vertices) + ":";
        for (int d = 0; d < n_darts(); ++d) {
            if (d) s += ",";
            s += std::to_string(pairing[d]);
        }
        return s;
    }
};

namespace detail {

// Relabel the involution by a dart permutation perm (new dart = perm[old]).
inline std::vector<int> relabel(const std::vector<int>& pairing, const std::vector<int>& perm) {
    std::vector<int> out(pairing.size());
    for (size_t d = 0; d < pairing.size(); ++d) out[perm[d]] = perm[pairing[d]];
    return out;
}

inline const std::array<std::array<int, 3>, 6>& slot_perms() {
    static const std::array<std::array<int, 3>, 6> p = {{{0, 1, 2},
                                                         {0, 2, 1},
                                                         {1, 0, 2},
                                                         {1, 2, 0},
                                                         {2, 0, 1},
                                                         {2, 1, 0}}};
    return p;
}

// Enumerates the wreath group S_3 wr S_V acting on darts; calls fn with each
// dart permutation. V <= 6 keeps this affordable.
template <class Fn>
void for_each_dart_perm(int V, Fn&& fn) {
    std::vector<int> vperm(V);
    std::iota(vperm.begin(), vperm.end(), 0);
    std::vector<int> dperm(3 * V);
    std::vector<int> slot_choice(V, 0);
    do {
        std::fill(slot_choice.begin(), slot_choice.end(), 0);
        while (true) {
            for (int v = 0; v < V; ++v) {
                const auto& sp = slot_perms()[slot_choice[v]];
                for (int s = 0; s < 3; ++s) dperm[3 * v + s] = 3 * vperm[v] + sp[s];
            }
            fn(dperm);
            int v = 0;
            while (v < V && slot_choice[v] == 5) slot_choice[v++] = 0;
            if (v == V) break;
            ++slot_choice[v];
        }
    } while (std::next_permutation(vperm.begin(), vperm.end()));
}

inline bool connected(int V, const std::vector<int>& pairing) {
    if (V == 0) return true;
    std::vector<int> stack = {0};
    std::vector<bool> seen(V, false);
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int s = 0; s < 3; ++s) {
            int d = 3 * v + s;
            int w = pairing[d] / 3;
            if (pairing[d] != d && !seen[w]) {
                seen[w] = true;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == V;
}

}  // namespace detail

// Lexicographically minimal relabeled pairing over the wreath group, found by
// placing vertices one at a time with sound prefix pruning: an entry whose
// partner vertex is not yet placed will end up >= 3*(placed+1) in any
// completion, which bounds the comparison against the best known vector.
inline std::vector<int> canonical_pairing(int V, const std::vector<int>& pairing) {
    int nd = 3 * V;
    std::vector<int> best;
    {
        std::vector<int> perm(nd);
        std::iota(perm.begin(), perm.end(), 0);
        best = detail::relabel(pairing, perm);
    }
    std::vector<int> pos_of_vertex(V, -1), vertex_at(V, -1), slot_at(V, 0);
    std::vector<int> newid(nd, -1);

    auto rec = [&](auto&& self, int p) -> void {
        if (p == V) {
            std::vector<int> cand(nd);
            for (int d = 0; d < nd; ++d) cand[newid[d]] = newid[pairing[d]];
            if (cand < best) best = cand;
            return;
        }
        for (int w = 0; w < V; ++w) {
            if (pos_of_vertex[w] >= 0) continue;
            for (int sp = 0; sp < 6; ++sp) {
                pos_of_vertex[w] = p;
                vertex_at[p] = w;
                slot_at[p] = sp;
                const auto& s = detail::slot_perms()[sp];
                for (int k = 0; k < 3; ++k) newid[3 * w + s[k]] = 3 * p + k;
                // prefix comparison against best
                int floor_unknown = 3 * (p + 1);
                bool prune = false, undecided = false;
                for (int nd2 = 0; nd2 < floor_unknown; ++nd2) {
                    // old dart at new position nd2
                    int pp = nd2 / 3, kk = nd2 % 3;
                    int old_d = 3 * vertex_at[pp] + detail::slot_perms()[slot_at[pp]][kk];
                    int partner = pairing[old_d];
                    int val = newid[partner];  // -1 if partner not placed
                    if (val >= 0) {
                        if (val < best[nd2]) break;          // strictly better prefix
                        if (val > best[nd2]) {
                            prune = true;
                            break;
                        }
                    } else {
                        if (floor_unknown > best[nd2]) {
                            prune = true;
                        }
                        undecided = true;
                        break;
                    }
                }
                (void)undecided;
                if (!prune) self(self, p + 1);
                for (int k = 0; k < 3; ++k) newid[3 * w + s[k]] = -1;
                pos_of_vertex[w] = -1;
                vertex_at[p] = -1;
            }
        }
    };
    rec(rec, 0);
    return best;
}

inline long long automorphism_order_of(int V, const std::vector<int>& pairing) {
    long long count = 0;
    detail::for_each_dart_perm(V, [&](const std::vector<int>& perm) {
        if (detail::relabel(pairing, perm) == pairing) ++count;
    });
    return count;
}

inline long long automorphism_order(const TrivalentGraph& g) {
    if (g.single_edge) return 2;
    return automorphism_order_of(g.n_vertices, g.pairing);
}

// One representative per isomorphism class of connected trivalent graphs with
// the given vertex and leaf counts. Short loops allowed. Deterministic order;
// results are memoized per (V, L).
inline std::vector<TrivalentGraph> enumerate_trivalent_graphs(int n_vertices, int n_leaves) {
    if (n_vertices < 0 || n_leaves < 0)
        throw std::invalid_argument("enumerate_trivalent_graphs: negative counts");
    static std::map<std::pair<int, int>, std::vector<TrivalentGraph>> memo;
    auto hit = memo.find({n_vertices, n_leaves});
    if (hit != memo.end()) return hit->second;
    if (n_vertices == 0) {
        if (n_leaves == 2) {
            TrivalentGraph g;
            g.single_edge = true;
            g.pairing = {1, 0};
            g.aut_order = 2;
            g.loop_number = 0;
            return {g};
        }
        if (n_leaves == 0) return {};
        throw std::invalid_argument("no trivalent graph exists for these counts");
    }
    int paired = 3 * n_vertices - n_leaves;
    if (paired < 0 || paired % 2 != 0)
        throw std::invalid_argument("no trivalent graph exists for these counts");

    int nd = 3 * n_vertices;
    std::set<std::vector<int>> canon_seen;
    std::vector<TrivalentGraph> out;
    std::vector<int> pairing(nd, -1);

    // Recursive pairing of the lowest unresolved dart: leaf or edge partner.
    auto rec = [&](auto&& self, int leaves_left) -> void {
        int d = 0;
        while (d < nd && pairing[d] != -1) ++d;
        if (d == nd) {
            if (leaves_left != 0) return;
            if (!detail::connected(n_vertices, pairing)) return;
            std::vector<int> canon = canonical_pairing(n_vertices, pairing);
            if (canon_seen.insert(canon).second) {
                TrivalentGraph g;
                g.n_vertices = n_vertices;
                g.pairing = canon;
                g.aut_order = automorphism_order_of(n_vertices, canon);
                g.loop_number = g.n_edges() - n_vertices + 1;
                out.push_back(std::move(g));
            }
            return;
        }
        if (leaves_left > 0) {
            pairing[d] = d;
            self(self, leaves_left - 1);
            pairing[d] = -1;
        }
        for (int e = d + 1; e < nd; ++e) {
            if (pairing[e] != -1) continue;
            pairing[d] = e;
            pairing[e] = d;
            self(self, leaves_left);
            pairing[d] = -1;
            pairing[e] = -1;
        }
    };
    rec(rec, n_leaves);
    std::sort(out.begin(), out.end(), [](const TrivalentGraph& a, const TrivalentGraph& b) {
        return a.pairing < b.pairing;
    });
    memo[{n_vertices, n_leaves}] = out;
    return out;
}

// ---------------------------------------------------------------------------
// Binary rooted trees (children unordered, single leaf allowed).

struct RootedTree {
    // -1 children marks a leaf
    int left = -1, right = -1;
    std::vector<RootedTree> sub;  // size 0 (leaf) or 2
    int n_leaves = 1;
    long long aut_order = 1;

    bool is_leaf() const { return sub.empty(); }

    std::string encode() const {
        if (is_leaf()) return "*";
        std::string a = sub[0].encode(), b = sub[1].encode();
        if (b < a) std::swap(a, b);
        return "(" + a + b + ")";
    }
};

inline RootedTree make_node(RootedTree a, RootedTree b) {
    RootedTree t;
    t.n_leaves = a.n_leaves + b.n_leaves;
    bool same = a.encode() == b.encode();
    t.aut_order = a.aut_order * b.aut_order * (same ? 2 : 1);
    t.sub = {std::move(a), std::move(b)};
    return t;
}

inline std::vector<RootedTree> enumerate_binary_trees(int n_leaves) {
    if (n_leaves < 1) throw std::invalid_argument("enumerate_binary_trees: n_leaves >= 1");
    static std::vector<std::vector<RootedTree>> cache;  // cache[n] = trees with n leaves
    if (cache.empty()) {
        cache.resize(2);
        cache[1].push_back(RootedTree{});
    }
    for (int n = static_cast<int>(cache.size()); n <= n_leaves; ++n) {
        std::vector<RootedTree> trees;
        std::set<std::string> seen;
        for (int k = 1; 2 * k <= n; ++k) {
            for (const auto& a : cache[k])
                for (const auto& b : cache[n - k]) {
                    RootedTree t = make_node(a, b);
                    if (seen.insert(t.encode()).second) trees.push_back(std::move(t));
                }
        }
        cache.push_back(std::move(trees));
    }
    return cache[n_leaves];
}

}  // namespace csm
