#include "facred/subgraphs.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

#include "facred/error.hpp"
#include "facred/factored.hpp"
#include "facred/field.hpp"

namespace facred {

namespace {

BigInt big_pow(std::uint64_t base, unsigned e) {
    BigInt r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

std::pair<unsigned, unsigned> pair_of(unsigned q, unsigned k) {
    for (unsigned a = 0; a < k; ++a) {
        for (unsigned c = a + 1; c < k; ++c) {
            if (pair_index(a, c, k) == q) return {a, c};
        }
    }
    throw Error(Errc::invalid_parameters, "pair index out of range");
}

Pattern pattern_from_mask(std::uint32_t mask, unsigned k) {
    Pattern p;
    p.k = k;
    for (unsigned q = 0; q < pair_count(k); ++q) {
        if ((mask >> q) & 1U) p.edges.push_back(pair_of(q, k));
    }
    return p;
}

void check_pattern(const Pattern& h) {
    if (h.k < 1 || h.k > 6) throw Error(Errc::invalid_parameters, "pattern needs 1..6 vertices");
    for (auto [a, b] : h.edges) {
        if (a == b || a >= h.k || b >= h.k) throw Error(Errc::invalid_parameters, "bad pattern edge");
    }
}

void count_homs(const Pattern& h, const Graph& g, const std::vector<std::uint64_t>& earlier_nbrs, unsigned pos,
                std::vector<std::size_t>& image, std::uint64_t used, BigInt& total) {
    if (pos == h.k) {
        ++total;
        return;
    }
    std::uint64_t cand = (g.nodes == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << g.nodes) - 1)) & ~used;
    for (unsigned u = 0; u < pos; ++u) {
        if ((earlier_nbrs[pos] >> u) & 1U) cand &= g.adj[image[u]];
    }
    while (cand) {
        const auto v = static_cast<std::size_t>(std::countr_zero(cand));
        cand &= cand - 1;
        image[pos] = v;
        count_homs(h, g, earlier_nbrs, pos + 1, image, used | (std::uint64_t{1} << v), total);
    }
}

Graph induced_on_partitions(const PartitionedGraph& g, unsigned subset) {
    std::vector<std::size_t> keep;
    for (unsigned a = 0; a < g.k; ++a) {
        if ((subset >> a) & 1U) {
            for (std::size_t i = 0; i < g.n; ++i) keep.push_back(g.node(a, i));
        }
    }
    Graph out(keep.size());
    for (std::size_t x = 0; x < keep.size(); ++x) {
        for (std::size_t y = x + 1; y < keep.size(); ++y) {
            if (g.g.has_edge(keep[x], keep[y])) out.add_edge(x, y);
        }
    }
    return out;
}

}  // namespace

std::uint32_t Pattern::mask() const {
    std::uint32_t m = 0;
    for (auto [a, b] : edges) m |= std::uint32_t{1} << pair_index(std::min(a, b), std::max(a, b), k);
    return m;
}

Pattern pattern_triangle() { return Pattern{3, {{0, 1}, {0, 2}, {1, 2}}}; }
Pattern pattern_p3() { return Pattern{3, {{0, 1}, {1, 2}}}; }
Pattern pattern_k4() { return Pattern{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}}; }

Pattern parse_pattern(const std::string& text) {
    if (text == "triangle") return pattern_triangle();
    if (text == "p3") return pattern_p3();
    if (text == "k4") return pattern_k4();
    Pattern p;
    std::stringstream ss(text);
    std::string item;
    unsigned top = 0;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) throw Error(Errc::parse_error, "pattern edge needs the form a-b: " + item);
        try {
            const unsigned a = static_cast<unsigned>(std::stoul(item.substr(0, dash)));
            const unsigned b = static_cast<unsigned>(std::stoul(item.substr(dash + 1)));
            if (a == b) throw Error(Errc::parse_error, "self-loop in pattern");
            p.edges.emplace_back(std::min(a, b), std::max(a, b));
            top = std::max({top, a + 1, b + 1});
        } catch (const std::logic_error&) {
            throw Error(Errc::parse_error, "bad pattern edge: " + item);
        }
    }
    if (p.edges.empty()) throw Error(Errc::parse_error, "empty pattern");
    p.k = top;
    std::sort(p.edges.begin(), p.edges.end());
    p.edges.erase(std::unique(p.edges.begin(), p.edges.end()), p.edges.end());
    check_pattern(p);
    return p;
}

Graph::Graph(std::size_t n) : nodes(n), adj(n, 0) {
    if (n > 64) throw Error(Errc::invalid_parameters, "graphs are capped at 64 nodes");
}

void Graph::add_edge(std::size_t a, std::size_t b) {
    if (a == b) return;
    adj[a] |= std::uint64_t{1} << b;
    adj[b] |= std::uint64_t{1} << a;
}

PartitionedGraph::PartitionedGraph(unsigned k_, std::size_t n_) : k(k_), n(n_), g(k_ * n_) {}

PartitionedGraph random_kpartite(unsigned k, std::size_t n, unsigned b, std::uint64_t seed, std::uint32_t only_pairs) {
    if (b < 1) throw Error(Errc::invalid_parameters, "b must be positive");
    Rng rng = substream(seed, "random_kpartite");
    PartitionedGraph g(k, n);
    const double prob = 1.0 / b;
    for (unsigned a = 0; a < k; ++a) {
        for (unsigned c = a + 1; c < k; ++c) {
            const bool active = only_pairs == 0 || ((only_pairs >> pair_index(a, c, k)) & 1U);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (bernoulli(rng, prob) && active) g.g.add_edge(g.node(a, i), g.node(c, j));
                }
            }
        }
    }
    return g;
}

std::vector<std::uint32_t> placements(const Pattern& h) {
    check_pattern(h);
    std::vector<unsigned> perm(h.k);
    std::iota(perm.begin(), perm.end(), 0U);
    std::set<std::uint32_t> seen;
    do {
        std::uint32_t m = 0;
        for (auto [a, b] : h.edges) {
            const unsigned x = perm[a], y = perm[b];
            m |= std::uint32_t{1} << pair_index(std::min(x, y), std::max(x, y), h.k);
        }
        seen.insert(m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {seen.begin(), seen.end()};
}

std::uint64_t automorphism_count(const Pattern& h) {
    std::uint64_t fact = 1;
    for (unsigned i = 2; i <= h.k; ++i) fact *= i;
    return fact / placements(h).size();
}

BigInt count_subgraphs_brute(const Pattern& h, const Graph& g) {
    check_pattern(h);
    std::vector<std::uint64_t> earlier(h.k, 0);
    for (auto [a, b] : h.edges) {
        const unsigned lo = std::min(a, b), hi = std::max(a, b);
        earlier[hi] |= std::uint64_t{1} << lo;
    }
    std::vector<std::size_t> image(h.k);
    BigInt homs = 0;
    count_homs(h, g, earlier, 0, image, 0, homs);
    return homs / automorphism_count(h);
}

BigInt count_chghp_brute(const Pattern& h, const PartitionedGraph& g) {
    if (h.k != g.k) throw Error(Errc::arity_mismatch, "pattern and graph differ in k");
    BigInt total = 0;
    std::vector<std::size_t> t(g.k, 0);
    if (g.n == 0) return total;
    while (true) {
        bool ok = true;
        for (auto [a, b] : h.edges) ok = ok && g.edge(a, t[a], b, t[b]);
        if (ok) ++total;
        unsigned pos = g.k;
        while (pos-- > 0) {
            if (++t[pos] < g.n) break;
            t[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) break;
    }
    return total;
}

BigInt count_transversal_brute(const Pattern& h, const PartitionedGraph& g) {
    if (h.k != g.k) throw Error(Errc::arity_mismatch, "pattern and graph differ in k");
    const auto places = placements(h);
    BigInt total = 0;
    std::vector<std::size_t> t(g.k, 0);
    if (g.n == 0) return total;
    while (true) {
        std::uint32_t q = 0;
        for (unsigned a = 0; a < g.k; ++a) {
            for (unsigned c = a + 1; c < g.k; ++c) {
                if (g.edge(a, t[a], c, t[c])) q |= std::uint32_t{1} << pair_index(a, c, g.k);
            }
        }
        for (std::uint32_t p : places) total += (p & q) == p;
        unsigned pos = g.k;
        while (pos-- > 0) {
            if (++t[pos] < g.n) break;
            t[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) break;
    }
    return total;
}

std::uint64_t chghp_prime(unsigned k, std::size_t n) {
    std::uint64_t lo = 2;
    for (unsigned i = 0; i < k; ++i) lo *= n;
    lo = std::max<std::uint64_t>(lo, 5);
    while (!is_prime(lo)) ++lo;
    return lo;
}

PartitePolynomial build_chghp_poly(const Pattern& h, std::size_t n, std::uint64_t p) {
    check_pattern(h);
    const auto e = static_cast<unsigned>(h.edges.size());
    if (e == 0) throw Error(Errc::invalid_parameters, "pattern needs an edge");
    double monos = 1;
    for (unsigned i = 0; i < h.k; ++i) monos *= static_cast<double>(n);
    if (monos > 1e7) throw Error(Errc::monomial_cap_exceeded, "too many monomials");
    const std::size_t nn = n * n;
    std::vector<unsigned> partition(e * nn);
    for (std::size_t v = 0; v < partition.size(); ++v) partition[v] = static_cast<unsigned>(v / nn);
    PartitePolynomial poly(e * nn, std::move(partition), e, p);
    std::vector<std::size_t> t(h.k, 0);
    std::vector<std::uint32_t> vars(e);
    if (n == 0) return poly;
    while (true) {
        for (unsigned q = 0; q < e; ++q) {
            const auto [a, b] = h.edges[q];
            const unsigned lo = std::min(a, b), hi = std::max(a, b);
            vars[q] = static_cast<std::uint32_t>(q * nn + t[lo] * n + t[hi]);
        }
        poly.add_monomial(vars);
        unsigned pos = h.k;
        while (pos-- > 0) {
            if (++t[pos] < n) break;
            t[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) break;
    }
    poly.canonicalize();
    return poly;
}

std::vector<std::uint8_t> chghp_indicator(const Pattern& h, const PartitionedGraph& g) {
    const std::size_t n = g.n, nn = n * n;
    std::vector<std::uint8_t> bits(h.edges.size() * nn);
    for (std::size_t q = 0; q < h.edges.size(); ++q) {
        const unsigned lo = std::min(h.edges[q].first, h.edges[q].second);
        const unsigned hi = std::max(h.edges[q].first, h.edges[q].second);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) bits[q * nn + i * n + j] = g.edge(lo, i, hi, j);
        }
    }
    return bits;
}

std::vector<unsigned> mask_vertices(std::uint32_t mask, unsigned k) {
    std::vector<bool> hit(k, false);
    for (unsigned q = 0; q < pair_count(k); ++q) {
        if ((mask >> q) & 1U) {
            auto [a, c] = pair_of(q, k);
            hit[a] = hit[c] = true;
        }
    }
    std::vector<unsigned> out;
    for (unsigned v = 0; v < k; ++v) {
        if (hit[v]) out.push_back(v);
    }
    return out;
}

bool mask_is_forest(std::uint32_t mask, unsigned k) {
    std::vector<unsigned> parent(k);
    std::iota(parent.begin(), parent.end(), 0U);
    auto find = [&](unsigned x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (unsigned q = 0; q < pair_count(k); ++q) {
        if (!((mask >> q) & 1U)) continue;
        auto [a, c] = pair_of(q, k);
        const unsigned ra = find(a), rc = find(c);
        if (ra == rc) return false;
        parent[ra] = rc;
    }
    return true;
}

std::vector<std::uint32_t> mask_components(std::uint32_t mask, unsigned k) {
    std::vector<unsigned> parent(k);
    std::iota(parent.begin(), parent.end(), 0U);
    auto find = [&](unsigned x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (unsigned q = 0; q < pair_count(k); ++q) {
        if ((mask >> q) & 1U) {
            auto [a, c] = pair_of(q, k);
            parent[find(a)] = find(c);
        }
    }
    std::map<unsigned, std::uint32_t> comp;
    for (unsigned q = 0; q < pair_count(k); ++q) {
        if ((mask >> q) & 1U) comp[find(pair_of(q, k).first)] |= std::uint32_t{1} << q;
    }
    std::vector<std::uint32_t> out;
    for (const auto& [root, m] : comp) out.push_back(m);
    return out;
}

BigInt count_labeled_trees(std::uint32_t edges, const PartitionedGraph& g) {
    const unsigned k = g.k;
    if (!mask_is_forest(edges, k)) throw Error(Errc::invalid_parameters, "pattern is not a forest");
    std::vector<std::vector<unsigned>> nbr(k);
    for (unsigned q = 0; q < pair_count(k); ++q) {
        if ((edges >> q) & 1U) {
            auto [a, c] = pair_of(q, k);
            nbr[a].push_back(c);
            nbr[c].push_back(a);
        }
    }
    // f(v)[x]: labeled copies of the subtree below v with v mapped to node x of its partition.
    std::function<std::vector<BigInt>(unsigned, int)> below = [&](unsigned v, int parent) {
        std::vector<BigInt> f(g.n, BigInt(1));
        for (unsigned c : nbr[v]) {
            if (static_cast<int>(c) == parent) continue;
            const std::vector<BigInt> fc = below(c, static_cast<int>(v));
            for (std::size_t x = 0; x < g.n; ++x) {
                BigInt s = 0;
                for (std::size_t y = 0; y < g.n; ++y) {
                    if (g.edge(v, x, c, y)) s += fc[y];
                }
                f[x] *= s;
            }
        }
        return f;
    };
    BigInt total = 1;
    for (std::uint32_t comp : mask_components(edges, k)) {
        const unsigned root = mask_vertices(comp, k).front();
        BigInt s = 0;
        for (const BigInt& x : below(root, -1)) s += x;
        total = count_disconnected_union(total, s);
    }
    return total;
}

BigInt count_disconnected_union(const BigInt& a, const BigInt& b) { return a * b; }

BaseCounts base_counts(const PartitionedGraph& g) {
    BaseCounts out;
    out.vertices.assign(g.k, g.n);
    out.edges.assign(pair_count(g.k), 0);
    for (unsigned a = 0; a < g.k; ++a) {
        for (unsigned c = a + 1; c < g.k; ++c) {
            for (std::size_t i = 0; i < g.n; ++i) {
                for (std::size_t j = 0; j < g.n; ++j) out.edges[pair_index(a, c, g.k)] += g.edge(a, i, c, j);
            }
        }
    }
    return out;
}

SubgraphOracle brute_oracle(const Pattern& h) {
    return [h](const Graph& g) { return count_subgraphs_brute(h, g); };
}

std::size_t LabelFamily::size() const {
    std::size_t s = 1;
    for (unsigned q = 0; q < pair_count(k); ++q) s *= b;
    return s;
}

PartitionedGraph LabelFamily::member(std::size_t idx, const Graph& within) const {
    PartitionedGraph out(k, n);
    const std::size_t nn = n * n;
    for (unsigned a = 0; a < k; ++a) {
        for (unsigned c = a + 1; c < k; ++c) {
            const unsigned q = pair_index(a, c, k);
            std::size_t digit = idx;
            for (unsigned r = 0; r < q; ++r) digit /= b;
            const auto want = static_cast<std::uint8_t>(digit % b + 1);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (label[q * nn + i * n + j] == want) out.g.add_edge(out.node(a, i), out.node(c, j));
                }
            }
        }
    }
    for (unsigned a = 0; a < k; ++a) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (within.has_edge(out.node(a, i), out.node(a, j))) out.g.add_edge(out.node(a, i), out.node(a, j));
            }
        }
    }
    return out;
}

LabelFamily make_label_family(const PartitionedGraph& g, unsigned b, std::uint64_t seed) {
    if (b < 2) throw Error(Errc::invalid_parameters, "b must be at least 2");
    LabelFamily fam;
    fam.k = g.k;
    fam.b = b;
    fam.n = g.n;
    const std::size_t nn = g.n * g.n;
    fam.label.resize(pair_count(g.k) * nn);
    Rng rng = substream(seed, "label_family");
    for (unsigned a = 0; a < g.k; ++a) {
        for (unsigned c = a + 1; c < g.k; ++c) {
            const unsigned q = pair_index(a, c, g.k);
            for (std::size_t i = 0; i < g.n; ++i) {
                for (std::size_t j = 0; j < g.n; ++j) {
                    fam.label[q * nn + i * g.n + j] =
                        g.edge(a, i, c, j) ? 1 : static_cast<std::uint8_t>(2 + uniform_below(rng, b - 1));
                }
            }
        }
    }
    return fam;
}

std::uint64_t overlap_weight(const Pattern& h, std::uint32_t a, std::uint32_t s) {
    std::uint64_t w = 0;
    for (std::uint32_t p : placements(h)) w += (p & s) == a;
    return w;
}

BigInt family_sum(const EdgesclusionContext& ctx, std::uint32_t l) {
    const unsigned pairs = pair_count(ctx.h.k);
    BigInt total = 0;
    for (std::size_t idx = 0; idx < ctx.family_counts.size(); ++idx) {
        std::size_t x = idx;
        bool keep = true;
        for (unsigned q = 0; q < pairs; ++q) {
            if (((l >> q) & 1U) && x % ctx.b != 0) keep = false;
            x /= ctx.b;
        }
        if (keep) total += ctx.family_counts[idx];
    }
    return total;
}

BigInt edgesclusion_step(const EdgesclusionContext& ctx, const std::map<std::uint32_t, BigInt>& table, std::uint32_t l) {
    const unsigned k = ctx.h.k;
    const auto pairs = static_cast<int>(pair_count(k));
    const int e_h = std::popcount(ctx.h.mask());
    const int e_l = std::popcount(l);
    BigInt rest = family_sum(ctx, l);
    // A transversal whose pattern copy P meets l in exactly a is counted once per family member
    // that fixes the pairs of P outside l: b^(pairs - |l| - |P \ l|) members.
    for (std::uint32_t a = (l - 1) & l;; a = (a - 1) & l) {
        const std::uint64_t w = overlap_weight(ctx.h, a, l);
        if (w != 0) {
            auto it = table.find(a);
            if (it == table.end()) throw Error(Errc::edgesclusion_inconsistency, "missing count for a sub-pattern");
            const int free_pairs = pairs - e_l - e_h + std::popcount(a);
            const auto v = static_cast<unsigned>(mask_vertices(a, k).size());
            rest -= it->second * big_pow(ctx.n, k - v) * big_pow(ctx.b, static_cast<unsigned>(free_pairs)) * w;
        }
        if (a == 0) break;
    }
    const std::uint64_t w_self = overlap_weight(ctx.h, l, l);
    const auto v_l = static_cast<unsigned>(mask_vertices(l, k).size());
    const BigInt denom = BigInt(w_self) * big_pow(ctx.n, k - v_l) * big_pow(ctx.b, static_cast<unsigned>(pairs - e_h));
    if (denom == 0) throw Error(Errc::edgesclusion_inconsistency, "sub-pattern is not contained in the pattern");
    if (rest < 0 || rest % denom != 0) throw Error(Errc::edgesclusion_inconsistency, "family counts do not divide evenly");
    return rest / denom;
}

BigInt count_labeled_H_er(const PartitionedGraph& g, const Pattern& h, unsigned b, const SubgraphOracle& oracle,
                          std::uint64_t seed, ErStats* stats) {
    check_pattern(h);
    if (h.k != g.k) throw Error(Errc::arity_mismatch, "pattern and graph differ in k");
    if (b < 2) throw Error(Errc::invalid_parameters, "b must be at least 2");
    ErStats local;
    ErStats& st = stats ? *stats : local;
    const unsigned k = h.k;

    EdgesclusionContext ctx{h, b, g.n, {}};
    bool family_ready = false;
    auto ensure_family = [&] {
        if (family_ready) return;
        family_ready = true;
        const LabelFamily fam = make_label_family(g, b, seed);
        if (fam.size() > 200000) throw Error(Errc::invalid_parameters, "label family too large");
        // Random edges inside partitions so every member looks like a plain random graph.
        Graph within(g.g.nodes);
        Rng rng = substream(seed, "within_edges");
        for (unsigned a = 0; a < k; ++a) {
            for (std::size_t i = 0; i < g.n; ++i) {
                for (std::size_t j = i + 1; j < g.n; ++j) {
                    if (bernoulli(rng, 1.0 / b)) within.add_edge(g.node(a, i), g.node(a, j));
                }
            }
        }
        ctx.family_counts.resize(fam.size());
        for (std::size_t idx = 0; idx < fam.size(); ++idx) {
            const PartitionedGraph member = fam.member(idx, within);
            // Copies with one node in every partition, by inclusion-exclusion over partition subsets.
            BigInt c = 0;
            for (unsigned s = 0; s < (1U << k); ++s) {
                ++st.oracle_calls;
                const BigInt x = oracle(induced_on_partitions(member, s));
                if ((k - static_cast<unsigned>(std::popcount(s))) % 2 == 0) {
                    c += x;
                } else {
                    c -= x;
                }
            }
            ctx.family_counts[idx] = c;
        }
    };

    std::map<std::uint32_t, BigInt> memo;
    std::function<BigInt(std::uint32_t)> labeled = [&](std::uint32_t m) -> BigInt {
        if (auto it = memo.find(m); it != memo.end()) return it->second;
        BigInt value;
        if (mask_is_forest(m, k)) {
            value = count_labeled_trees(m, g);
        } else if (auto comps = mask_components(m, k); comps.size() > 1) {
            value = 1;
            for (std::uint32_t c : comps) value = count_disconnected_union(value, labeled(c));
        } else {
            for (std::uint32_t a = (m - 1) & m;; a = (a - 1) & m) {
                if (overlap_weight(h, a, m) != 0) labeled(a);
                if (a == 0) break;
            }
            ensure_family();
            ++st.edgesclusion_steps;
            value = edgesclusion_step(ctx, memo, m);
        }
        memo[m] = value;
        return value;
    };
    const std::uint32_t full = h.mask();
    return labeled(full) * big_pow(g.n, k - static_cast<unsigned>(mask_vertices(full, k).size()));
}

BigInt count_H_kpartite_via_er(const PartitionedGraph& g, const Pattern& h, unsigned b, const SubgraphOracle& oracle,
                               std::uint64_t seed, ErStats* stats) {
    BigInt total = 0;
    unsigned i = 0;
    for (std::uint32_t p : placements(h)) {
        // Keep only the partition pairs this placement uses.
        PartitionedGraph gp(g.k, g.n);
        for (unsigned a = 0; a < g.k; ++a) {
            for (unsigned c = a + 1; c < g.k; ++c) {
                if (!((p >> pair_index(a, c, g.k)) & 1U)) continue;
                for (std::size_t x = 0; x < g.n; ++x) {
                    for (std::size_t y = 0; y < g.n; ++y) {
                        if (g.edge(a, x, c, y)) gp.g.add_edge(gp.node(a, x), gp.node(c, y));
                    }
                }
            }
        }
        total += count_labeled_H_er(gp, pattern_from_mask(p, g.k), b, oracle,
                                    substream_seed(seed, "placement" + std::to_string(i++)), stats);
    }
    return total;
}

std::pair<BigInt, BigInt> warm_up_totals(const PartitionedGraph& g, const Pattern& h, unsigned b, std::uint64_t seed) {
    const LabelFamily fam = make_label_family(g, b, seed);
    const std::uint32_t hmask = h.mask();
    std::vector<unsigned> pairs;
    for (unsigned q = 0; q < pair_count(g.k); ++q) {
        if ((hmask >> q) & 1U) pairs.push_back(q);
    }
    std::size_t members = 1;
    for (std::size_t r = 0; r < pairs.size(); ++r) members *= b;
    const std::size_t nn = g.n * g.n;
    BigInt family_total = 0;
    std::vector<std::uint8_t> want(pair_count(g.k), 0);
    for (std::size_t idx = 0; idx < members; ++idx) {
        std::size_t digit = idx;
        for (unsigned q : pairs) {
            want[q] = static_cast<std::uint8_t>(digit % b + 1);
            digit /= b;
        }
        PartitionedGraph member(g.k, g.n);
        for (unsigned a = 0; a < g.k; ++a) {
            for (unsigned c = a + 1; c < g.k; ++c) {
                const unsigned q = pair_index(a, c, g.k);
                if (!want[q]) continue;
                for (std::size_t i = 0; i < g.n; ++i) {
                    for (std::size_t j = 0; j < g.n; ++j) {
                        if (fam.label[q * nn + i * g.n + j] == want[q]) member.g.add_edge(member.node(a, i), member.node(c, j));
                    }
                }
            }
        }
        family_total += count_transversal_brute(h, member);
    }
    PartitionedGraph complete(g.k, g.n);
    for (unsigned a = 0; a < g.k; ++a) {
        for (unsigned c = a + 1; c < g.k; ++c) {
            if (!((hmask >> pair_index(a, c, g.k)) & 1U)) continue;
            for (std::size_t x = 0; x < g.n; ++x) {
                for (std::size_t y = 0; y < g.n; ++y) complete.g.add_edge(complete.node(a, x), complete.node(c, y));
            }
        }
    }
    return {family_total, count_transversal_brute(h, complete)};
}

}  // namespace facred
