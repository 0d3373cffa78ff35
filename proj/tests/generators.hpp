#pragma once

// Test-side tree generators and brute-force oracles, independent of the
// library's enumeration and automorphism code paths.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "treeshuffle/tree.hpp"

namespace tsgen {

using treeshuffle::Tree;

// All stump-free trees with exactly n edges, up to isomorphism.
inline const std::vector<Tree>& trees_with_edges(int n) {
    static std::map<int, std::vector<Tree>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<Tree> out;
    if (n == 1) {
        out.push_back(Tree());
    } else {
        // Pool of candidate subtrees, ordered so multisets can be chosen as
        // non-decreasing index sequences.
        std::vector<Tree> pool;
        for (int k = 1; k < n; ++k)
            for (const Tree& t : trees_with_edges(k)) pool.push_back(t);

        std::vector<Tree> chosen;
        auto rec = [&](auto&& self, int remaining, std::size_t min_idx) -> void {
            if (remaining == 0) {
                if (!chosen.empty()) out.push_back(Tree::graft(chosen));
                return;
            }
            for (std::size_t i = min_idx; i < pool.size(); ++i) {
                int k = pool[i].edge_count();
                if (k > remaining) continue;
                chosen.push_back(pool[i]);
                self(self, remaining - k, i);
                chosen.pop_back();
            }
        };
        rec(rec, n - 1, 0);
    }
    return cache.emplace(n, std::move(out)).first->second;
}

inline std::vector<Tree> trees_with_edges_up_to(int n) {
    std::vector<Tree> out;
    for (int k = 1; k <= n; ++k)
        for (const Tree& t : trees_with_edges(k)) out.push_back(t);
    return out;
}

// All reduced trees with exactly v >= 1 vertices, up to isomorphism.
inline const std::vector<Tree>& reduced_trees(int v) {
    static std::map<int, std::vector<Tree>> cache;
    auto it = cache.find(v);
    if (it != cache.end()) return it->second;

    std::vector<Tree> out;
    if (v == 1) {
        out.push_back(Tree::corolla(1));
    } else {
        std::vector<Tree> pool;
        for (int k = 1; k < v; ++k)
            for (const Tree& t : reduced_trees(k)) pool.push_back(t);
        std::vector<Tree> chosen;
        auto rec = [&](auto&& self, int remaining, std::size_t min_idx) -> void {
            if (remaining == 0) {
                out.push_back(Tree::graft(chosen));
                return;
            }
            for (std::size_t i = min_idx; i < pool.size(); ++i) {
                int k = pool[i].vertex_count();
                if (k > remaining) continue;
                chosen.push_back(pool[i]);
                self(self, remaining - k, i);
                chosen.pop_back();
            }
        };
        rec(rec, v - 1, 0);
    }
    return cache.emplace(v, std::move(out)).first->second;
}

inline std::vector<Tree> reduced_trees_up_to(int v) {
    std::vector<Tree> out;
    for (int k = 1; k <= v; ++k)
        for (const Tree& t : reduced_trees(k)) out.push_back(t);
    return out;
}

// Random stump-free tree with at most `vertex_budget` vertices.
inline Tree random_tree(std::mt19937_64& rng, int vertex_budget) {
    if (vertex_budget <= 0) return Tree();
    auto rec = [&](auto&& self, int budget) -> Tree {
        if (budget == 0 || (rng() % 5) == 0) return Tree();
        int inner = budget - 1;
        int k = 1 + static_cast<int>(rng() % 3);
        std::vector<Tree> kids;
        for (int i = 0; i < k; ++i) {
            int share = inner > 0 ? static_cast<int>(rng() % (inner + 1)) : 0;
            kids.push_back(self(self, share));
            inner -= kids.back().vertex_count();
        }
        return Tree::graft(kids);
    };
    return rec(rec, vertex_budget);
}

// Brute-force count of order-automorphisms of a poset by backtracking.
inline long long count_poset_automorphisms(const treeshuffle::Poset& p) {
    int n = p.size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) leq[a][b] = p.leq(a, b);

    std::vector<int> img(n, -1);
    std::vector<bool> used(n, false);
    long long count = 0;
    auto rec = [&](auto&& self, int x) -> void {
        if (x == n) {
            ++count;
            return;
        }
        for (int y = 0; y < n; ++y) {
            if (used[y]) continue;
            bool ok = true;
            for (int z = 0; z < x && ok; ++z)
                ok = (leq[x][z] == leq[y][img[z]]) && (leq[z][x] == leq[img[z]][y]);
            if (!ok) continue;
            img[x] = y;
            used[y] = true;
            self(self, x + 1);
            used[y] = false;
            img[x] = -1;
        }
    };
    rec(rec, 0);
    return count;
}

}  // namespace tsgen
