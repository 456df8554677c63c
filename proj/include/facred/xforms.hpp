#pragma once

#include <cstdint>
#include <vector>

#include "facred/factored.hpp"

namespace facred {

// Plain k-OV over d-bit vectors to factored k-OV with g = b = ceil(sqrt(d)); padding coordinates
// are zero in every vector, so orthogonality is unchanged.
FkfInstance embed_kov(const std::vector<std::vector<BitString>>& lists);
BigInt count_kov(const std::vector<std::vector<BitString>>& lists);

// k-SUM over integers in [-bound, bound] to a family of factored SUM_ZERO instances, one per
// guess of the carries between chunks. Each zero-sum tuple is counted by exactly one member.
std::vector<FkfInstance> embed_ksum(const std::vector<std::vector<std::int64_t>>& lists, std::uint64_t bound);
BigInt count_ksum(const std::vector<std::vector<std::int64_t>>& lists);

// Per-vector maps; slot is the 0-based list index, k the tuple length.
// f -> XOR: strings of k^3 b bits, one b-bit block per (x, y, z) in lexicographic order.
FactoredVector gamma_f_to_xor(const FactoredVector& v, unsigned slot, const Predicate& pred, unsigned k,
                              std::size_t cap = 1U << 16);
// XOR -> OV: strings of 2 k^3 b bits.
FactoredVector xor_to_ov(const FactoredVector& v, unsigned slot, unsigned k, std::size_t cap = 1U << 16);
// XOR -> SUM_TARGET: strings of (ceil(lg k) + 1) b bits.
FactoredVector gamma_xor_to_sum(const FactoredVector& v, unsigned slot, unsigned k, std::size_t cap = 1U << 16);
// f -> SUM_TARGET through the XOR encoding, with the last slot emitting one target per tuple.
FactoredVector gamma_f_to_sum(const FactoredVector& v, unsigned slot, const Predicate& pred, unsigned k,
                              std::size_t cap = 1U << 16);

// Whole-instance versions.
FkfInstance f_to_xor(const FkfInstance& inst);
FkfInstance xor_to_ov(const FkfInstance& inst);
FkfInstance xor_to_sum(const FkfInstance& inst);
FkfInstance f_to_sum(const FkfInstance& inst);

// Factored SUM (SUM_ZERO or SUM_TARGET) with k >= 3 to factored zero-k-clique on a complete
// k-partite graph.
FfkcInstance sum_to_zkc(const FkfInstance& inst);
// Any predicate on k(k-1)/2 labels to SUM_TARGET labels.
FfkcInstance ffkc_to_fzkc(const FfkcInstance& inst);

struct ColoredGraph {
    std::size_t nodes = 0;
    std::vector<std::uint32_t> color;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

struct PmtInstance {
    std::size_t colors = 0;
    std::vector<ColoredGraph> graphs;
};

// Factored zero-triangle (k = 3, SUM_ZERO or SUM_TARGET) to partitioned matching triangles.
PmtInstance fzkc3_to_pmt(const FfkcInstance& inst);
// Sum over color triples of the product over graphs of triangle counts with that coloring.
BigInt count_pmt(const PmtInstance& inst);

}  // namespace facred
