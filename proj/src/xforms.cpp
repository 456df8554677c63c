#include "facred/xforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <tuple>

#include "facred/error.hpp"
#include "facred/field.hpp"

namespace facred {

namespace {

unsigned isqrt_ceil(unsigned d) {
    unsigned r = 0;
    while (r * r < d) ++r;
    return r;
}

// Bits [lo, lo + width) of s as a new string.
BitString slice_bits(const BitString& s, unsigned lo, unsigned width) {
    BitString out(width);
    for (unsigned i = 0; i < width; ++i) out.set_bit(i, s.bit(lo + i));
    return out;
}

// Writes src into dst starting at bit lo.
void put_bits(BitString& dst, unsigned lo, const BitString& src) {
    for (unsigned i = 0; i < src.width(); ++i) dst.set_bit(lo + i, src.bit(i));
}

void check_width(unsigned w) {
    if (w > BitString::kMaxWidth) throw Error(Errc::width_mismatch, "transformed strings exceed 256 bits");
}

// Calls fn(w) for every k-tuple over {0,1}^b with w[slot] == u.
void for_each_tuple_with(const BitString& u, unsigned slot, unsigned k, unsigned b,
                         const std::function<void(const std::vector<BitString>&)>& fn) {
    if (k > 1 && static_cast<double>(b) * (k - 1) > 24) {
        throw Error(Errc::expansion_cap_exceeded, "too many candidate tuples per string");
    }
    const std::uint64_t base = std::uint64_t{1} << b;
    std::uint64_t total = 1;
    for (unsigned i = 1; i < k; ++i) total *= base;
    std::vector<BitString> w(k, BitString(b));
    w[slot] = u;
    for (std::uint64_t it = 0; it < total; ++it) {
        std::uint64_t x = it;
        for (unsigned i = 0; i < k; ++i) {
            if (i == slot) continue;
            w[i] = BitString::from_uint(x % base, b);
            x /= base;
        }
        fn(w);
    }
}

// One b-bit block per (x, y, z); block 0 is leftmost.
BitString xor_encoding(const std::vector<BitString>& w, unsigned slot, unsigned k, unsigned b) {
    const unsigned blocks = k * k * k;
    BitString out(blocks * b);
    for (unsigned x = 0; x < k; ++x) {
        for (unsigned y = 0; y < k; ++y) {
            if (x == y || (x != slot && y != slot)) continue;
            for (unsigned z = 0; z < k; ++z) {
                const unsigned idx = (x * k + y) * k + z;
                put_bits(out, (blocks - 1 - idx) * b, w[z]);
            }
        }
    }
    return out;
}

unsigned field_bits(unsigned k) { return ceil_lg(k) + 1; }

// Every bit becomes an L-bit field holding that bit.
BitString spread_fields(const BitString& s, unsigned L) {
    BitString out(s.width() * L);
    for (unsigned i = 0; i < s.width(); ++i) out.set_bit(i * L, s.bit(i));
    return out;
}

void insert_capped(StringSet& set, const BitString& s, std::size_t cap) {
    set.insert(s);
    if (set.size() > cap) throw Error(Errc::expansion_cap_exceeded, "group expansion exceeds the cap");
}

FactoredVector empty_like(const FactoredVector& v, unsigned width) {
    FactoredVector out;
    out.b = width;
    out.groups.assign(v.g(), StringSet(width));
    return out;
}

void check_slot(unsigned slot, unsigned k) {
    if (k < 1 || slot >= k) throw Error(Errc::invalid_parameters, "slot must lie in [0, k)");
}

template <class F>
FkfInstance map_lists(const FkfInstance& inst, Predicate pred, unsigned width, F&& per_vector) {
    validate(inst);
    FkfInstance out;
    out.k = inst.k;
    out.g = inst.g;
    out.b = width;
    out.pred = std::move(pred);
    out.lists.resize(inst.k);
    for (unsigned slot = 0; slot < inst.k; ++slot) {
        for (const FactoredVector& v : inst.lists[slot]) out.lists[slot].push_back(per_vector(v, slot));
    }
    return out;
}

}  // namespace

FkfInstance embed_kov(const std::vector<std::vector<BitString>>& lists) {
    if (lists.empty()) throw Error(Errc::invalid_parameters, "need k >= 1 lists");
    unsigned d = 1;
    for (const auto& list : lists) {
        if (!list.empty()) {
            d = list[0].width();
            break;
        }
    }
    if (d == 0) throw Error(Errc::invalid_parameters, "vectors need at least one coordinate");
    for (const auto& list : lists) {
        for (const BitString& v : list) {
            if (v.width() != d) throw Error(Errc::width_mismatch, "vectors differ in dimension");
        }
    }
    const unsigned g = isqrt_ceil(d), b = g;
    const unsigned pad = g * b - d;
    FkfInstance inst;
    inst.k = static_cast<unsigned>(lists.size());
    inst.g = g;
    inst.b = b;
    inst.pred = make_predicate(PredKind::OV, inst.k);
    inst.lists.resize(inst.k);
    for (unsigned j = 0; j < inst.k; ++j) {
        for (const BitString& v : lists[j]) {
            const BitString padded = concat(v, BitString(pad));
            FactoredVector fv;
            fv.b = b;
            fv.groups.assign(g, StringSet(b));
            for (unsigned grp = 0; grp < g; ++grp) fv.groups[grp].insert(slice_bits(padded, (g - 1 - grp) * b, b));
            inst.lists[j].push_back(std::move(fv));
        }
    }
    return inst;
}

BigInt count_kov(const std::vector<std::vector<BitString>>& lists) {
    BigInt total = 0;
    if (lists.empty()) return total;
    for (const auto& list : lists) {
        if (list.empty()) return total;
    }
    const std::size_t k = lists.size();
    std::vector<std::size_t> idx(k, 0);
    while (true) {
        BitString acc = BitString::ones(lists[0][0].width());
        for (std::size_t j = 0; j < k; ++j) acc = acc & lists[j][idx[j]];
        if (acc.is_zero()) ++total;
        std::size_t pos = k;
        while (pos-- > 0) {
            if (++idx[pos] < lists[pos].size()) break;
            idx[pos] = 0;
        }
        if (pos == static_cast<std::size_t>(-1)) break;
    }
    return total;
}

std::vector<FkfInstance> embed_ksum(const std::vector<std::vector<std::int64_t>>& lists, std::uint64_t bound) {
    const auto k = static_cast<unsigned>(lists.size());
    if (k < 1) throw Error(Errc::invalid_parameters, "need at least one list");
    for (const auto& list : lists) {
        for (std::int64_t x : list) {
            const std::uint64_t mag = x < 0 ? static_cast<std::uint64_t>(-(x + 1)) + 1 : static_cast<std::uint64_t>(x);
            if (mag > bound) throw Error(Errc::range_violation, "value " + std::to_string(x) + " outside [-bound, bound]");
        }
    }
    // 2^W > k * bound makes zero mod 2^W the same as zero over the integers.
    unsigned W = 1;
    while (W < 62 && (std::uint64_t{1} << W) <= static_cast<std::uint64_t>(k) * bound) ++W;
    const unsigned g = isqrt_ceil(W);
    const unsigned b = (W + g - 1) / g;
    const unsigned Wp = g * b;
    if (Wp > 62) throw Error(Errc::range_violation, "bound too large");
    const unsigned wide = b + ceil_lg(k + 1) + 1;  // chunk sums never wrap at this width
    const std::uint64_t mod_wide = std::uint64_t{1} << wide;
    const std::uint64_t chunk_mask = (std::uint64_t{1} << b) - 1;

    auto chunk = [&](std::int64_t x, unsigned j) {
        const std::uint64_t u = static_cast<std::uint64_t>(x) & ((std::uint64_t{1} << Wp) - 1);
        return (u >> (j * b)) & chunk_mask;
    };

    std::vector<FkfInstance> family;
    std::vector<unsigned> carry(g + 1, 0);  // carry[0] = 0; carry[j] into chunk j; carry[g] out of the top
    while (true) {
        FkfInstance inst;
        inst.k = k;
        inst.g = g;
        inst.b = wide;
        inst.pred = make_predicate(PredKind::SUM_ZERO, k);
        inst.lists.resize(k);
        for (unsigned i = 0; i < k; ++i) {
            for (std::int64_t x : lists[i]) {
                FactoredVector fv;
                fv.b = wide;
                fv.groups.assign(g, StringSet(wide));
                for (unsigned j = 0; j < g; ++j) {
                    std::uint64_t val = chunk(x, j);
                    if (i == 0) {
                        // chunk + carry_in - carry_out * 2^b, taken mod 2^wide.
                        val = (val + carry[j] + mod_wide - ((static_cast<std::uint64_t>(carry[j + 1]) << b) % mod_wide)) % mod_wide;
                    }
                    fv.groups[g - 1 - j].insert(BitString::from_uint(val, wide));
                }
                inst.lists[i].push_back(std::move(fv));
            }
        }
        family.push_back(std::move(inst));
        unsigned pos = g + 1;
        while (--pos >= 1) {
            if (++carry[pos] < k) break;
            carry[pos] = 0;
        }
        if (pos == 0) break;
    }
    return family;
}

BigInt count_ksum(const std::vector<std::vector<std::int64_t>>& lists) {
    BigInt total = 0;
    if (lists.empty()) return total;
    for (const auto& list : lists) {
        if (list.empty()) return total;
    }
    const std::size_t k = lists.size();
    std::vector<std::size_t> idx(k, 0);
    while (true) {
        BigInt s = 0;
        for (std::size_t j = 0; j < k; ++j) s += lists[j][idx[j]];
        if (s == 0) ++total;
        std::size_t pos = k;
        while (pos-- > 0) {
            if (++idx[pos] < lists[pos].size()) break;
            idx[pos] = 0;
        }
        if (pos == static_cast<std::size_t>(-1)) break;
    }
    return total;
}

FactoredVector gamma_f_to_xor(const FactoredVector& v, unsigned slot, const Predicate& pred, unsigned k, std::size_t cap) {
    check_slot(slot, k);
    if (pred.arity != k) throw Error(Errc::arity_mismatch, "predicate arity differs from k");
    const unsigned b = v.b;
    check_width(k * k * k * b);
    FactoredVector out = empty_like(v, k * k * k * b);
    for (unsigned grp = 0; grp < v.g(); ++grp) {
        for (const BitString& u : v.groups[grp].items()) {
            for_each_tuple_with(u, slot, k, b, [&](const std::vector<BitString>& w) {
                if (pred.accepts(w)) insert_capped(out.groups[grp], xor_encoding(w, slot, k, b), cap);
            });
        }
    }
    return out;
}

FactoredVector xor_to_ov(const FactoredVector& v, unsigned slot, unsigned k, std::size_t cap) {
    check_slot(slot, k);
    const unsigned b = v.b;
    const unsigned blocks = k * k * k;
    check_width(2 * blocks * b);
    const Predicate pxor = make_predicate(PredKind::XOR, k);
    FactoredVector out = empty_like(v, 2 * blocks * b);
    for (unsigned grp = 0; grp < v.g(); ++grp) {
        for (const BitString& u : v.groups[grp].items()) {
            for_each_tuple_with(u, slot, k, b, [&](const std::vector<BitString>& w) {
                if (!pxor.accepts(w)) return;
                BitString s(2 * blocks * b);
                for (unsigned x = 0; x < k; ++x) {
                    for (unsigned y = 0; y < k; ++y) {
                        for (unsigned z = 0; z < k; ++z) {
                            const unsigned idx = (x * k + y) * k + z;
                            const unsigned lo = (blocks - 1 - idx) * 2 * b;
                            BitString block;
                            if (x == y) {
                                block = BitString(2 * b);
                            } else if (x == slot) {
                                block = concat(w[z], ~w[z]);
                            } else if (y == slot) {
                                block = concat(~w[z], w[z]);
                            } else {
                                block = BitString::ones(2 * b);
                            }
                            put_bits(s, lo, block);
                        }
                    }
                }
                insert_capped(out.groups[grp], s, cap);
            });
        }
    }
    return out;
}

FactoredVector gamma_xor_to_sum(const FactoredVector& v, unsigned slot, unsigned k, std::size_t cap) {
    check_slot(slot, k);
    const unsigned b = v.b;
    const unsigned L = field_bits(k);
    check_width(L * b);
    FactoredVector out = empty_like(v, L * b);
    for (unsigned grp = 0; grp < v.g(); ++grp) {
        for (const BitString& u : v.groups[grp].items()) {
            if (slot + 1 < k) {
                insert_capped(out.groups[grp], spread_fields(u, L), cap);
                continue;
            }
            // Last slot: every field takes each value in [0, k-1] with the bit's parity.
            std::vector<std::vector<unsigned>> choices(b);
            for (unsigned i = 0; i < b; ++i) {
                for (unsigned val = u.bit(i); val < k; val += 2) choices[i].push_back(val);
                if (choices[i].empty()) break;
            }
            if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); })) continue;
            std::vector<std::size_t> pick(b, 0);
            while (true) {
                BitString s(L * b);
                for (unsigned i = 0; i < b; ++i) put_bits(s, i * L, BitString::from_uint(choices[i][pick[i]], L));
                insert_capped(out.groups[grp], s, cap);
                unsigned pos = b;
                while (pos-- > 0) {
                    if (++pick[pos] < choices[pos].size()) break;
                    pick[pos] = 0;
                }
                if (pos == static_cast<unsigned>(-1)) break;
            }
        }
    }
    return out;
}

FactoredVector gamma_f_to_sum(const FactoredVector& v, unsigned slot, const Predicate& pred, unsigned k, std::size_t cap) {
    check_slot(slot, k);
    if (pred.arity != k) throw Error(Errc::arity_mismatch, "predicate arity differs from k");
    const unsigned b = v.b;
    const unsigned blocks = k * k * k;
    const unsigned L = field_bits(k);
    check_width(L * blocks * b);
    FactoredVector out = empty_like(v, L * blocks * b);
    const unsigned last = k - 1;
    for (unsigned grp = 0; grp < v.g(); ++grp) {
        for (const BitString& u : v.groups[grp].items()) {
            for_each_tuple_with(u, slot, k, b, [&](const std::vector<BitString>& w) {
                if (!pred.accepts(w)) return;
                if (slot != last) {
                    insert_capped(out.groups[grp], spread_fields(xor_encoding(w, slot, k, b), L), cap);
                    return;
                }
                // Target fields: how many of the other slots hold a one there when all slots agree on w.
                BitString s(L * blocks * b);
                for (unsigned x = 0; x < k; ++x) {
                    for (unsigned y = 0; y < k; ++y) {
                        if (x == y) continue;
                        for (unsigned z = 0; z < k; ++z) {
                            const unsigned idx = (x * k + y) * k + z;
                            for (unsigned i = 0; i < b; ++i) {
                                const unsigned writers = (x != last) + (y != last);
                                const unsigned val = w[z].bit(i) ? writers : 0;
                                put_bits(s, ((blocks - 1 - idx) * b + i) * L, BitString::from_uint(val, L));
                            }
                        }
                    }
                }
                insert_capped(out.groups[grp], s, cap);
            });
        }
    }
    return out;
}

FkfInstance f_to_xor(const FkfInstance& inst) {
    const unsigned k = inst.k;
    return map_lists(inst, make_predicate(PredKind::XOR, k), k * k * k * inst.b,
                     [&](const FactoredVector& v, unsigned slot) { return gamma_f_to_xor(v, slot, inst.pred, k); });
}

FkfInstance xor_to_ov(const FkfInstance& inst) {
    if (inst.pred.kind != PredKind::XOR) throw Error(Errc::invalid_parameters, "source predicate must be XOR");
    const unsigned k = inst.k;
    return map_lists(inst, make_predicate(PredKind::OV, k), 2 * k * k * k * inst.b,
                     [&](const FactoredVector& v, unsigned slot) { return xor_to_ov(v, slot, k); });
}

FkfInstance xor_to_sum(const FkfInstance& inst) {
    if (inst.pred.kind != PredKind::XOR) throw Error(Errc::invalid_parameters, "source predicate must be XOR");
    const unsigned k = inst.k;
    return map_lists(inst, make_predicate(PredKind::SUM_TARGET, k), field_bits(k) * inst.b,
                     [&](const FactoredVector& v, unsigned slot) { return gamma_xor_to_sum(v, slot, k); });
}

FkfInstance f_to_sum(const FkfInstance& inst) {
    const unsigned k = inst.k;
    return map_lists(inst, make_predicate(PredKind::SUM_TARGET, k), field_bits(k) * k * k * k * inst.b,
                     [&](const FactoredVector& v, unsigned slot) { return gamma_f_to_sum(v, slot, inst.pred, k); });
}

FfkcInstance sum_to_zkc(const FkfInstance& inst) {
    validate(inst);
    if (inst.pred.kind != PredKind::SUM_ZERO && inst.pred.kind != PredKind::SUM_TARGET) {
        throw Error(Errc::invalid_parameters, "source predicate must be a SUM variant");
    }
    const unsigned k = inst.k;
    if (k < 3) throw Error(Errc::invalid_parameters, "clique form needs k >= 3");
    const std::size_t n = inst.n();
    FfkcInstance out;
    out.k = k;
    out.g = inst.g;
    out.b = inst.b;
    out.n = n;
    out.pred = make_predicate(inst.pred.kind, pair_count(k));
    out.edges.assign(pair_count(k), std::vector<std::optional<FactoredVector>>(n * n));

    FactoredVector zero;
    zero.b = inst.b;
    zero.groups.assign(inst.g, StringSet(inst.b));
    for (auto& s : zero.groups) s.insert(BitString(inst.b));

    for (unsigned a = 0; a < k; ++a) {
        for (unsigned c = a + 1; c < k; ++c) {
            const unsigned q = pair_index(a, c, k);
            // Pair (i, i+1) carries the number of its second endpoint; pair (0, k-1) that of node 0.
            int owner = -1;
            if (c == a + 1) {
                owner = static_cast<int>(c);
            } else if (a == 0 && c == k - 1) {
                owner = 0;
            }
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (owner < 0) {
                        out.edges[q][i * n + j] = zero;
                    } else {
                        const std::size_t node = static_cast<unsigned>(owner) == a ? i : j;
                        out.edges[q][i * n + j] = inst.lists[static_cast<unsigned>(owner)][node];
                    }
                }
            }
        }
    }
    return out;
}

FfkcInstance ffkc_to_fzkc(const FfkcInstance& inst) {
    validate(inst);
    const unsigned l = pair_count(inst.k);
    FfkcInstance out;
    out.k = inst.k;
    out.g = inst.g;
    out.n = inst.n;
    out.b = field_bits(l) * l * l * l * inst.b;
    out.pred = make_predicate(PredKind::SUM_TARGET, l);
    out.edges.resize(l);
    for (unsigned q = 0; q < l; ++q) {
        for (const auto& lab : inst.edges[q]) {
            if (lab) {
                out.edges[q].emplace_back(gamma_f_to_sum(*lab, q, inst.pred, l));
            } else {
                out.edges[q].emplace_back(std::nullopt);
            }
        }
    }
    return out;
}

PmtInstance fzkc3_to_pmt(const FfkcInstance& inst) {
    validate(inst);
    if (inst.k != 3) throw Error(Errc::invalid_parameters, "needs k = 3");
    const PredKind kind = inst.pred.kind;
    if (kind != PredKind::SUM_ZERO && kind != PredKind::SUM_TARGET) {
        throw Error(Errc::invalid_parameters, "source predicate must be a SUM variant");
    }
    if (inst.b > 12) throw Error(Errc::memory_cap_exceeded, "needs b <= 12");
    const std::size_t n = inst.n;
    const std::uint64_t span = std::uint64_t{1} << inst.b;
    const std::uint64_t mask = span - 1;
    const unsigned q_uv = pair_index(0, 1, 3), q_uw = pair_index(0, 2, 3), q_vw = pair_index(1, 2, 3);

    auto v_node = [&](std::size_t v, std::uint64_t x) { return static_cast<std::uint32_t>(n + v * span + x); };
    auto w_node = [&](std::size_t w, std::uint64_t y) { return static_cast<std::uint32_t>(n + n * span + w * span + y); };

    PmtInstance out;
    out.colors = 3 * n;
    for (unsigned grp = 0; grp < inst.g; ++grp) {
        ColoredGraph G;
        G.nodes = n + 2 * n * span;
        G.color.resize(G.nodes);
        for (std::size_t u = 0; u < n; ++u) G.color[u] = static_cast<std::uint32_t>(u);
        for (std::size_t v = 0; v < n; ++v) {
            for (std::uint64_t x = 0; x < span; ++x) {
                G.color[v_node(v, x)] = static_cast<std::uint32_t>(n + v);
                G.color[w_node(v, x)] = static_cast<std::uint32_t>(2 * n + v);
            }
        }
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = 0; v < n; ++v) {
                if (const auto& e = inst.edges[q_uv][u * n + v]) {
                    for (const BitString& s : e->groups[grp].items()) G.edges.emplace_back(static_cast<std::uint32_t>(u), v_node(v, s.low64()));
                }
                if (const auto& e = inst.edges[q_uw][u * n + v]) {
                    for (const BitString& s : e->groups[grp].items()) G.edges.emplace_back(static_cast<std::uint32_t>(u), w_node(v, s.low64()));
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t w = 0; w < n; ++w) {
                const auto& e = inst.edges[q_vw][v * n + w];
                if (!e) continue;
                const StringSet& set = e->groups[grp];
                for (std::uint64_t x = 0; x < span; ++x) {
                    for (std::uint64_t y = 0; y < span; ++y) {
                        std::uint64_t z;
                        if (kind == PredKind::SUM_ZERO) {
                            z = (span - ((x + y) & mask)) & mask;
                        } else {
                            z = x + y;
                            if (z > mask) continue;
                        }
                        if (set.contains(BitString::from_uint(z, inst.b))) G.edges.emplace_back(v_node(v, x), w_node(w, y));
                    }
                }
            }
        }
        out.graphs.push_back(std::move(G));
    }
    return out;
}

BigInt count_pmt(const PmtInstance& inst) {
    using Triple = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;
    std::vector<std::map<Triple, std::uint64_t>> per_graph;
    for (const ColoredGraph& G : inst.graphs) {
        std::vector<std::vector<bool>> adj(G.nodes, std::vector<bool>(G.nodes, false));
        for (auto [a, b] : G.edges) {
            if (a == b) continue;
            adj[a][b] = adj[b][a] = true;
        }
        std::map<Triple, std::uint64_t> counts;
        for (std::size_t a = 0; a < G.nodes; ++a) {
            for (std::size_t b = a + 1; b < G.nodes; ++b) {
                if (!adj[a][b]) continue;
                for (std::size_t c = b + 1; c < G.nodes; ++c) {
                    if (!adj[a][c] || !adj[b][c]) continue;
                    std::array<std::uint32_t, 3> col{G.color[a], G.color[b], G.color[c]};
                    std::sort(col.begin(), col.end());
                    if (col[0] == col[1] || col[1] == col[2]) continue;
                    ++counts[{col[0], col[1], col[2]}];
                }
            }
        }
        per_graph.push_back(std::move(counts));
    }
    BigInt total = 0;
    if (per_graph.empty()) return total;
    for (const auto& [triple, c0] : per_graph[0]) {
        BigInt prod = c0;
        for (std::size_t gi = 1; gi < per_graph.size() && prod != 0; ++gi) {
            auto it = per_graph[gi].find(triple);
            prod = it == per_graph[gi].end() ? BigInt(0) : prod * it->second;
        }
        total += prod;
    }
    return total;
}

}  // namespace facred
