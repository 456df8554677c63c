#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "facred/types.hpp"

namespace facred {

// Complete k-partite graph, n nodes per partition, weights in [0, R).
// Pair q = pair_index(a, c, k) with a < c stores w(a:i, c:j) at i * n + j.
struct ZkcInstance {
    unsigned k = 0;
    std::size_t n = 0;
    std::uint64_t R = 1;
    std::vector<std::vector<std::uint64_t>> weights;

    std::uint64_t weight(unsigned a, std::size_t i, unsigned c, std::size_t j) const;
};

// One node index per partition.
using Clique = std::vector<std::uint32_t>;

void validate(const ZkcInstance& inst);
ZkcInstance gen_aczkc(std::size_t n, unsigned k, std::uint64_t R, std::uint64_t seed);
bool is_zero_clique(const ZkcInstance& inst, const Clique& c);

std::uint64_t brute_count(const ZkcInstance& inst);
std::optional<Clique> brute_search(const ZkcInstance& inst);
std::set<Clique> brute_list(const ZkcInstance& inst);

// Triangle-of-blocks algorithm; cost grows with R^2. Throws memory_cap_exceeded when a block
// has more than max_super_nodes tuples.
std::uint64_t count_small_range(const ZkcInstance& inst, std::size_t max_super_nodes = 1U << 14);

struct SubInstance {
    ZkcInstance inst;
    std::vector<std::vector<std::uint32_t>> origin;  // origin[partition][local node] = original node

    Clique to_original(const Clique& c) const;
};

// Random per-partition division into n/x blocks of x nodes; one sub-instance per block choice.
std::vector<SubInstance> split(const ZkcInstance& inst, std::size_t x, std::uint64_t seed);

using Detector = std::function<bool(const ZkcInstance&)>;
using Searcher = std::function<std::optional<Clique>(const ZkcInstance&)>;

Detector exact_detector();
// Each call answers wrongly with probability p.
Detector noisy_detector(double p, std::uint64_t seed);

std::optional<Clique> search_via_detection(const ZkcInstance& inst, const Detector& det, double epsilon,
                                           std::uint64_t seed);
std::set<Clique> list_all_via_search(const ZkcInstance& inst, const Searcher& search, std::uint64_t seed);

struct RangeReduction {
    // One instance per additive shift; every zero clique of the source is a zero clique of exactly one.
    std::vector<ZkcInstance> shifted;
    std::function<bool(const Clique&)> verify;
};
RangeReduction reduce_range(const ZkcInstance& inst, std::uint64_t target_R, std::uint64_t seed);

// R at or below this goes straight to count_small_range.
constexpr std::uint64_t kSmallRange = 16;

struct ChainStats {
    std::uint64_t detector_calls = 0;
    std::uint64_t search_calls = 0;
    std::size_t subinstances = 0;
    const char* path = "";
};

std::uint64_t count_via_detection(const ZkcInstance& inst, const Detector& det, std::uint64_t seed,
                                  ChainStats* stats = nullptr);

// ceil(lg^2(max(n, 16))).
std::uint64_t lg2_factor(std::size_t n);

}  // namespace facred
