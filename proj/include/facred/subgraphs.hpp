#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "facred/dpoly.hpp"
#include "facred/types.hpp"

namespace facred {

// Pattern graph on vertices 0..k-1. Edge sets over [k] are bitmasks indexed by pair_index.
struct Pattern {
    unsigned k = 0;
    std::vector<std::pair<unsigned, unsigned>> edges;

    std::uint32_t mask() const;
};

Pattern pattern_triangle();
Pattern pattern_p3();  // 0-1-2
Pattern pattern_k4();
// "triangle", "p3", "k4", or an edge list such as "0-1,1-2,2-3".
Pattern parse_pattern(const std::string& text);

// Simple undirected graph on at most 64 nodes.
struct Graph {
    std::size_t nodes = 0;
    std::vector<std::uint64_t> adj;

    explicit Graph(std::size_t n = 0);
    void add_edge(std::size_t a, std::size_t b);
    bool has_edge(std::size_t a, std::size_t b) const { return (adj[a] >> b) & 1U; }
};

// k partitions of n nodes; node i of partition a is a * n + i. Edges inside a partition are allowed.
struct PartitionedGraph {
    unsigned k = 0;
    std::size_t n = 0;
    Graph g;

    PartitionedGraph(unsigned k, std::size_t n);
    std::size_t node(unsigned part, std::size_t i) const { return part * n + i; }
    bool edge(unsigned a, std::size_t i, unsigned b, std::size_t j) const { return g.has_edge(node(a, i), node(b, j)); }
};

// Each cross pair of partitions (all pairs, or only pattern pairs when only_pairs != 0) gets edges
// with probability 1/b.
PartitionedGraph random_kpartite(unsigned k, std::size_t n, unsigned b, std::uint64_t seed, std::uint32_t only_pairs = 0);

// Edge sets on [k] isomorphic to the pattern.
std::vector<std::uint32_t> placements(const Pattern& h);
std::uint64_t automorphism_count(const Pattern& h);

// Unlabeled copies of h in g (subgraphs, not necessarily induced).
BigInt count_subgraphs_brute(const Pattern& h, const Graph& g);
// Choices of one node per partition with every pattern edge present.
BigInt count_chghp_brute(const Pattern& h, const PartitionedGraph& g);
// Copies of h with exactly one node in each partition.
BigInt count_transversal_brute(const Pattern& h, const PartitionedGraph& g);

// One variable per (pattern edge, node pair); evaluates to the CHGHP count mod p.
PartitePolynomial build_chghp_poly(const Pattern& h, std::size_t n, std::uint64_t p);
std::vector<std::uint8_t> chghp_indicator(const Pattern& h, const PartitionedGraph& g);
// Smallest prime >= 2 n^k.
std::uint64_t chghp_prime(unsigned k, std::size_t n);

// Labeled count of the forest with the given edge mask, over the vertices it touches.
BigInt count_labeled_trees(std::uint32_t edges, const PartitionedGraph& g);
BigInt count_disconnected_union(const BigInt& a, const BigInt& b);

struct BaseCounts {
    std::vector<std::size_t> vertices;  // per partition
    std::vector<BigInt> edges;          // per pair_index
};
BaseCounts base_counts(const PartitionedGraph& g);

std::vector<unsigned> mask_vertices(std::uint32_t mask, unsigned k);
bool mask_is_forest(std::uint32_t mask, unsigned k);
// Edge masks of connected components with at least one edge.
std::vector<std::uint32_t> mask_components(std::uint32_t mask, unsigned k);

using SubgraphOracle = std::function<BigInt(const Graph&)>;
SubgraphOracle brute_oracle(const Pattern& h);

// Family of graphs indexed by one label in [1, b] per partition pair. Edges of g have label 1;
// other cross pairs get a uniform label in [2, b].
struct LabelFamily {
    unsigned k = 0;
    unsigned b = 0;
    std::size_t n = 0;
    std::vector<std::uint8_t> label;  // label[pair_index * n * n + i * n + j]

    std::size_t size() const;
    // Member with digit q of idx (base b) selecting label digit+1 for pair q.
    PartitionedGraph member(std::size_t idx, const Graph& within) const;
};
LabelFamily make_label_family(const PartitionedGraph& g, unsigned b, std::uint64_t seed);

struct EdgesclusionContext {
    Pattern h;
    unsigned b = 2;
    std::size_t n = 0;
    std::vector<BigInt> family_counts;  // transversal copies of h in every family member
};

// Sum of family counts over members whose label is 1 on every pair in l.
BigInt family_sum(const EdgesclusionContext& ctx, std::uint32_t l);
// Labeled count of l given the labeled counts of every proper sub-mask with nonzero overlap weight.
BigInt edgesclusion_step(const EdgesclusionContext& ctx, const std::map<std::uint32_t, BigInt>& table, std::uint32_t l);
// #{P placement of h : P & s == a}.
std::uint64_t overlap_weight(const Pattern& h, std::uint32_t a, std::uint32_t s);

struct ErStats {
    std::uint64_t oracle_calls = 0;
    std::uint64_t edgesclusion_steps = 0;
};

// Labeled count of h in g using only the unlabeled oracle on randomized graphs.
BigInt count_labeled_H_er(const PartitionedGraph& g, const Pattern& h, unsigned b, const SubgraphOracle& oracle,
                          std::uint64_t seed, ErStats* stats = nullptr);
// Copies of h with one node per partition, summed over the placements of h.
BigInt count_H_kpartite_via_er(const PartitionedGraph& g, const Pattern& h, unsigned b, const SubgraphOracle& oracle,
                               std::uint64_t seed, ErStats* stats = nullptr);

// Summed transversal counts over the family members that split only the pairs used by h, and the same
// count on the complete h-partite graph.
std::pair<BigInt, BigInt> warm_up_totals(const PartitionedGraph& g, const Pattern& h, unsigned b, std::uint64_t seed);

}  // namespace facred
