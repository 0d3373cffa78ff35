#include "treeshuffle/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace treeshuffle {

namespace {

void check_root_and_leaves(const Tree& S, const Tree& T, const std::vector<EdgePair>& edges,
                           const char* who) {
    if (edges.empty() || edges.front() != EdgePair{0, 0})
        throw std::logic_error(std::string(who) + ": intersection lost the root pair");
    std::set<EdgePair> expected;
    for (EdgeId ls : S.leaves())
        for (EdgeId lt : T.leaves()) expected.insert({ls, lt});
    for (EdgePair p : expected)
        if (!std::binary_search(edges.begin(), edges.end(), p))
            throw std::logic_error(std::string(who) + ": intersection lost a leaf pair");
}

}  // namespace

PairTree intersect_shuffles(const PairTree& a, const PairTree& b) {
    if (!a.same_pair(b))
        throw std::invalid_argument("intersect_shuffles: operands from different tree pairs");
    std::vector<EdgePair> common;
    std::set_intersection(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
                          std::back_inserter(common));
    check_root_and_leaves(*a.S, *a.T, common, "intersect_shuffles");
    try {
        return make_shuffle(a.S, a.T, std::move(common));
    } catch (const std::invalid_argument&) {
        // Would falsify the remark that intersections are again trees.
        throw std::logic_error("intersect_shuffles: intersection is not treelike");
    }
}

IntersectionDiagram intersection_diagram(const Tree& S, const Tree& T,
                                         std::uint64_t max_shuffles) {
    IntersectionDiagram d;
    d.shuffles = enumerate_shuffles(S, T, max_shuffles);

    // Close the node set under pairwise intersection; dedup by edge set.
    std::map<std::vector<EdgePair>, int> index;
    std::vector<PairTree> trees;
    for (const Shuffle& a : d.shuffles)
        if (index.emplace(a.edges, static_cast<int>(trees.size())).second) trees.push_back(a);
    for (std::size_t i = 0; i < trees.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            PairTree meet = intersect_shuffles(trees[i], trees[j]);
            if (index.emplace(meet.edges, static_cast<int>(trees.size())).second)
                trees.push_back(std::move(meet));
        }

    for (PairTree& t : trees) {
        DiagramNode node;
        for (std::size_t k = 0; k < d.shuffles.size(); ++k)
            if (std::includes(d.shuffles[k].edges.begin(), d.shuffles[k].edges.end(),
                              t.edges.begin(), t.edges.end()))
                node.shuffle_indices.push_back(static_cast<int>(k));
        node.tree = std::move(t);
        d.nodes.push_back(std::move(node));
    }

    // Arrows: covers of reverse inclusion of index sets (node with the
    // larger index set maps into the one with the smaller).
    auto subset = [](const std::vector<int>& a, const std::vector<int>& b) {
        return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    for (std::size_t i = 0; i < d.nodes.size(); ++i)
        for (std::size_t j = 0; j < d.nodes.size(); ++j) {
            if (!subset(d.nodes[i].shuffle_indices, d.nodes[j].shuffle_indices)) continue;
            bool cover = true;
            for (std::size_t k = 0; k < d.nodes.size() && cover; ++k)
                cover = k == i || k == j ||
                        !(subset(d.nodes[i].shuffle_indices, d.nodes[k].shuffle_indices) &&
                          subset(d.nodes[k].shuffle_indices, d.nodes[j].shuffle_indices));
            if (cover) d.arrows.emplace_back(static_cast<int>(j), static_cast<int>(i));
        }
    std::sort(d.arrows.begin(), d.arrows.end());
    return d;
}

std::string diagram_to_dot(const IntersectionDiagram& d) {
    std::ostringstream os;
    os << "digraph intersections {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        os << "  n" << i << " [shape=box, label=\"I={";
        for (std::size_t k = 0; k < d.nodes[i].shuffle_indices.size(); ++k)
            os << (k ? "," : "") << d.nodes[i].shuffle_indices[k];
        os << "}\"];\n";
    }
    for (auto [from, to] : d.arrows) os << "  n" << from << " -> n" << to << ";\n";
    os << "}\n";
    return os.str();
}

std::vector<MaximalChain> maximal_chains(const Tree& S, const Tree& T,
                                         std::uint64_t max_results) {
    std::vector<MaximalChain> out;
    MaximalChain chain;
    auto rec = [&](auto&& self, EdgeId s, EdgeId t) -> void {
        chain.push_back({s, t});
        bool sl = S.is_leaf_edge(s), tl = T.is_leaf_edge(t);
        if (sl && tl) {
            if (out.size() >= max_results)
                throw ResourceLimitError("maximal_chains: more chains than the configured cap");
            out.push_back(chain);
        } else {
            if (!sl)
                for (EdgeId c : S.children_of_edge(s)) self(self, c, t);
            if (!tl)
                for (EdgeId c : T.children_of_edge(t)) self(self, s, c);
        }
        chain.pop_back();
    };
    rec(rec, S.root_edge(), T.root_edge());
    return out;
}

bool chains_cover_check(const Tree& S, const Tree& T, std::uint64_t max_results) {
    std::set<MaximalChain> chains;
    for (MaximalChain& c : maximal_chains(S, T, max_results)) chains.insert(std::move(c));

    std::set<MaximalChain> branch_chains;
    for_each_shuffle(
        S, T,
        [&](const Shuffle& a) {
            auto kids = a.children_lists();
            for (int i = 0; i < a.size(); ++i) {
                if (!kids[i].empty()) continue;  // branches end at leaf pairs
                MaximalChain c;
                for (int x = i; x >= 0; x = a.parent[x]) c.push_back(a.edges[x]);
                std::reverse(c.begin(), c.end());
                branch_chains.insert(std::move(c));
            }
        },
        max_results);
    return chains == branch_chains;
}

std::string chains_to_json(const std::vector<MaximalChain>& chains) {
    nlohmann::json j = nlohmann::json::array();
    for (const MaximalChain& c : chains) {
        nlohmann::json jc = nlohmann::json::array();
        for (auto [s, t] : c) jc.push_back({s, t});
        j.push_back(std::move(jc));
    }
    return j.dump();
}

}  // namespace treeshuffle
