#pragma once

// Slow reference implementations used only by the tests. They share no code with the library
// beyond the plain data types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "facred/factored.hpp"
#include "facred/seqalign.hpp"
#include "facred/subgraphs.hpp"
#include "facred/xforms.hpp"
#include "facred/zkc.hpp"

namespace oracle {

using facred::BigInt;
using facred::BitString;

// Calls fn(idx) for every index vector with idx[i] < sizes[i].
inline void odometer(const std::vector<std::size_t>& sizes, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    for (std::size_t s : sizes) {
        if (s == 0) return;
    }
    std::vector<std::size_t> idx(sizes.size(), 0);
    while (true) {
        fn(idx);
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == sizes[pos]) idx[pos++] = 0;
        if (pos == idx.size()) return;
    }
}

inline BigInt as_uint(const BitString& s) {
    BigInt v = 0;
    for (unsigned i = s.width(); i-- > 0;) v = v * 2 + s.bit(i);
    return v;
}

// Predicate test written out from the definitions.
inline bool accepts(const facred::Predicate& p, const std::vector<BitString>& t) {
    const unsigned w = t.at(0).width();
    switch (p.kind) {
    case facred::PredKind::OV:
        for (unsigned i = 0; i < w; ++i) {
            bool all = true;
            for (const auto& s : t) all = all && s.bit(i);
            if (all) return false;
        }
        return true;
    case facred::PredKind::XOR:
        for (unsigned i = 0; i < w; ++i) {
            unsigned ones = 0;
            for (const auto& s : t) ones += s.bit(i);
            if (ones % 2) return false;
        }
        return true;
    case facred::PredKind::SUM_ZERO: {
        BigInt sum = 0;
        for (const auto& s : t) sum += as_uint(s);
        return sum % (BigInt(1) << w) == 0;
    }
    case facred::PredKind::SUM_TARGET: {
        BigInt sum = 0;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) sum += as_uint(t[i]);
        return sum == as_uint(t.back());
    }
    case facred::PredKind::TABLE:
        return p.table.count(t) > 0;
    }
    return false;
}

// Every represented full vector, as its list of g group strings.
inline std::vector<std::vector<BitString>> represented(const facred::FactoredVector& v) {
    std::vector<std::size_t> sizes;
    for (const auto& g : v.groups) sizes.push_back(g.size());
    std::vector<std::vector<BitString>> out;
    odometer(sizes, [&](const std::vector<std::size_t>& idx) {
        std::vector<BitString> full;
        for (std::size_t j = 0; j < idx.size(); ++j) full.push_back(v.groups[j].items()[idx[j]]);
        out.push_back(full);
    });
    if (v.groups.empty()) out.push_back({});
    return out;
}

// Number of accepted tuples of represented vectors, one per argument.
inline BigInt count_represented(const std::vector<const facred::FactoredVector*>& vs, unsigned g, const facred::Predicate& p) {
    std::vector<std::vector<std::vector<BitString>>> reps;
    std::vector<std::size_t> sizes;
    for (const auto* v : vs) {
        reps.push_back(represented(*v));
        sizes.push_back(reps.back().size());
    }
    BigInt total = 0;
    odometer(sizes, [&](const std::vector<std::size_t>& idx) {
        for (unsigned grp = 0; grp < g; ++grp) {
            std::vector<BitString> t;
            for (std::size_t i = 0; i < vs.size(); ++i) t.push_back(reps[i][idx[i]][grp]);
            if (!accepts(p, t)) return;
        }
        ++total;
    });
    return total;
}

inline BigInt fkf_count(const facred::FkfInstance& inst) {
    std::vector<std::size_t> sizes;
    for (const auto& l : inst.lists) sizes.push_back(l.size());
    BigInt total = 0;
    odometer(sizes, [&](const std::vector<std::size_t>& idx) {
        std::vector<const facred::FactoredVector*> vs;
        for (std::size_t l = 0; l < idx.size(); ++l) vs.push_back(&inst.lists[l][idx[l]]);
        total += count_represented(vs, inst.g, inst.pred);
    });
    return total;
}

inline BigInt ffkc_count(const facred::FfkcInstance& inst) {
    BigInt total = 0;
    odometer(std::vector<std::size_t>(inst.k, inst.n), [&](const std::vector<std::size_t>& node) {
        std::vector<const facred::FactoredVector*> labels;
        for (unsigned a = 0; a < inst.k; ++a) {
            for (unsigned c = a + 1; c < inst.k; ++c) {
                const auto& e = inst.edge(a, node[a], c, node[c]);
                if (!e) return;
                labels.push_back(&*e);
            }
        }
        total += count_represented(labels, inst.g, inst.pred);
    });
    return total;
}

inline std::uint64_t kov_count(const std::vector<std::vector<BitString>>& lists) {
    std::vector<std::size_t> sizes;
    for (const auto& l : lists) sizes.push_back(l.size());
    if (lists.empty()) return 0;
    std::uint64_t total = 0;
    odometer(sizes, [&](const std::vector<std::size_t>& idx) {
        std::vector<BitString> t;
        for (std::size_t l = 0; l < idx.size(); ++l) t.push_back(lists[l][idx[l]]);
        total += accepts(facred::make_predicate(facred::PredKind::OV, static_cast<unsigned>(t.size())), t);
    });
    return total;
}

inline std::uint64_t ksum_count(const std::vector<std::vector<std::int64_t>>& lists) {
    std::vector<std::size_t> sizes;
    for (const auto& l : lists) sizes.push_back(l.size());
    if (lists.empty()) return 0;
    std::uint64_t total = 0;
    odometer(sizes, [&](const std::vector<std::size_t>& idx) {
        std::int64_t s = 0;
        for (std::size_t l = 0; l < idx.size(); ++l) s += lists[l][idx[l]];
        total += s == 0;
    });
    return total;
}

inline std::uint64_t zkc_count(const facred::ZkcInstance& inst) {
    std::uint64_t total = 0;
    odometer(std::vector<std::size_t>(inst.k, inst.n), [&](const std::vector<std::size_t>& node) {
        std::uint64_t s = 0;
        for (unsigned a = 0; a < inst.k; ++a) {
            for (unsigned c = a + 1; c < inst.k; ++c) s = (s + inst.weights[facred::pair_index(a, c, inst.k)][node[a] * inst.n + node[c]]) % inst.R;
        }
        total += s == 0;
    });
    return total;
}

inline std::set<facred::Clique> zkc_list(const facred::ZkcInstance& inst) {
    std::set<facred::Clique> out;
    odometer(std::vector<std::size_t>(inst.k, inst.n), [&](const std::vector<std::size_t>& node) {
        std::uint64_t s = 0;
        for (unsigned a = 0; a < inst.k; ++a) {
            for (unsigned c = a + 1; c < inst.k; ++c) s = (s + inst.weights[facred::pair_index(a, c, inst.k)][node[a] * inst.n + node[c]]) % inst.R;
        }
        if (s == 0) out.insert(facred::Clique(node.begin(), node.end()));
    });
    return out;
}

inline std::uint64_t ov_pairs(const std::vector<BitString>& a, const std::vector<BitString>& b) {
    std::uint64_t total = 0;
    for (const auto& x : a) {
        for (const auto& y : b) {
            bool ok = true;
            for (unsigned i = 0; i < x.width() && ok; ++i) ok = !(x.bit(i) && y.bit(i));
            total += ok;
        }
    }
    return total;
}

// Copies of pattern h with node i of the pattern placed in partition i.
inline BigInt labeled_count(const facred::Pattern& h, const facred::PartitionedGraph& g) {
    BigInt total = 0;
    odometer(std::vector<std::size_t>(h.k, g.n), [&](const std::vector<std::size_t>& node) {
        for (auto [a, c] : h.edges) {
            if (!g.edge(a, node[a], c, node[c])) return;
        }
        ++total;
    });
    return total;
}

// Copies of h using one node from each partition, with any assignment of pattern nodes to
// partitions, each copy counted once.
inline BigInt transversal_count(const facred::Pattern& h, const facred::PartitionedGraph& g) {
    std::set<std::set<std::pair<std::size_t, std::size_t>>> copies;
    std::vector<unsigned> perm(h.k);
    for (unsigned i = 0; i < h.k; ++i) perm[i] = i;
    odometer(std::vector<std::size_t>(h.k, g.n), [&](const std::vector<std::size_t>& node) {
        std::vector<unsigned> p = perm;
        do {
            bool ok = true;
            std::set<std::pair<std::size_t, std::size_t>> edges;
            for (auto [a, c] : h.edges) {
                const std::size_t x = g.node(p[a], node[p[a]]), y = g.node(p[c], node[p[c]]);
                if (!g.g.has_edge(x, y)) {
                    ok = false;
                    break;
                }
                edges.insert({std::min(x, y), std::max(x, y)});
            }
            if (ok) copies.insert(edges);
        } while (std::next_permutation(p.begin(), p.end()));
    });
    return copies.size();
}

// Derivation counts of e on text[i..j), by end position, for a start position i.
inline std::map<std::size_t, BigInt> regex_ends(const facred::Regex& e, const std::string& text, std::size_t i) {
    using K = facred::Regex::Kind;
    std::map<std::size_t, BigInt> out;
    switch (e.kind) {
    case K::Symbol:
        if (i < text.size() && text[i] == e.symbol) out[i + 1] = 1;
        break;
    case K::Or:
        for (const auto& k : e.kids) {
            for (const auto& [j, c] : regex_ends(k, text, i)) out[j] += c;
        }
        break;
    case K::Concat: {
        out[i] = 1;
        for (const auto& k : e.kids) {
            std::map<std::size_t, BigInt> next;
            for (const auto& [p, c] : out) {
                for (const auto& [j, d] : regex_ends(k, text, p)) next[j] += c * d;
            }
            out = std::move(next);
        }
        break;
    }
    case K::Star: {
        // Zero iterations, then any number of non-empty ones.
        out[i] = 1;
        std::map<std::size_t, BigInt> frontier = out;
        while (!frontier.empty()) {
            std::map<std::size_t, BigInt> next;
            for (const auto& [p, c] : frontier) {
                for (const auto& [j, d] : regex_ends(e.kids[0], text, p)) {
                    if (j > p) next[j] += c * d;
                }
            }
            for (const auto& [j, c] : next) out[j] += c;
            frontier = std::move(next);
        }
        break;
    }
    }
    return out;
}

// (substring, derivation) pairs over all non-empty and empty substrings starting inside text.
inline BigInt regex_matches(const facred::Regex& e, const std::string& text) {
    BigInt total = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        for (const auto& [j, c] : regex_ends(e, text, i)) total += c;
    }
    return total;
}

inline bool regex_accepts(const facred::Regex& e, const std::string& s) {
    const auto ends = regex_ends(e, s, 0);
    const auto it = ends.find(s.size());
    return it != ends.end() && it->second != 0;
}

// Number of ways to pick sub as a subsequence of s.
inline BigInt embeddings(const std::string& sub, const std::string& s) {
    std::vector<BigInt> ways(sub.size() + 1, 0);
    ways[0] = 1;
    for (char ch : s) {
        for (std::size_t i = sub.size(); i-- > 0;) {
            if (sub[i] == ch) ways[i + 1] += ways[i];
        }
    }
    return ways[sub.size()];
}

// Maximum total weight of a common subsequence, and the number of index-tuple alignments
// realizing it.
inline std::pair<std::uint64_t, BigInt> wlcs(const std::vector<std::string>& strs, const std::map<char, std::uint64_t>& w) {
    std::set<std::string> subs;
    const std::string& s0 = strs.at(0);
    for (std::uint32_t mask = 0; mask < (1U << s0.size()); ++mask) {
        std::string sub;
        for (std::size_t i = 0; i < s0.size(); ++i) {
            if ((mask >> i) & 1U) sub += s0[i];
        }
        subs.insert(sub);
    }
    std::uint64_t best = 0;
    BigInt count = 0;
    for (const std::string& sub : subs) {
        BigInt c = 1;
        for (const auto& s : strs) c *= embeddings(sub, s);
        if (c == 0) continue;
        std::uint64_t weight = 0;
        for (char ch : sub) weight += w.count(ch) ? w.at(ch) : 1;
        if (weight > best) {
            best = weight;
            count = 0;
        }
        if (weight == best) count += c;
    }
    return {best, count};
}

}  // namespace oracle
