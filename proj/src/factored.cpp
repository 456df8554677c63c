#include "facred/factored.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <cmath>
#include <functional>

#include "facred/error.hpp"

namespace facred {

void StringSet::insert(const BitString& s) {
    if (s.width() != width_) throw Error(Errc::width_mismatch, "string width differs from set width");
    auto it = std::lower_bound(items_.begin(), items_.end(), s);
    if (it == items_.end() || *it != s) items_.insert(it, s);
}

bool StringSet::contains(const BitString& s) const {
    return s.width() == width_ && std::binary_search(items_.begin(), items_.end(), s);
}

bool Predicate::accepts(std::span<const BitString> tuple) const {
    if (tuple.size() != arity) throw Error(Errc::arity_mismatch, "tuple length differs from predicate arity");
    if (tuple.empty()) return true;
    const unsigned w = tuple[0].width();
    for (const BitString& s : tuple) {
        if (s.width() != w) throw Error(Errc::width_mismatch, "tuple strings differ in width");
    }
    switch (kind) {
    case PredKind::OV: {
        BitString acc = BitString::ones(w);
        for (const BitString& s : tuple) acc = acc & s;
        return acc.is_zero();
    }
    case PredKind::XOR: {
        BitString acc(w);
        for (const BitString& s : tuple) acc = acc ^ s;
        return acc.is_zero();
    }
    case PredKind::SUM_ZERO: {
        BitString acc(w);
        for (const BitString& s : tuple) acc = acc.add_mod(s);
        return acc.is_zero();
    }
    case PredKind::SUM_TARGET: {
        BitString acc(w);
        for (std::size_t i = 0; i + 1 < tuple.size(); ++i) {
            bool overflow = false;
            acc = acc.add_exact(tuple[i], overflow);
            if (overflow) return false;
        }
        return acc == tuple.back();
    }
    case PredKind::TABLE:
        return table.count(std::vector<BitString>(tuple.begin(), tuple.end())) != 0;
    }
    return false;
}

Predicate make_predicate(PredKind kind, unsigned arity) {
    if (arity < 1) throw Error(Errc::invalid_parameters, "predicate arity must be positive");
    Predicate p;
    p.kind = kind;
    p.arity = arity;
    return p;
}

std::string_view pred_name(PredKind kind) {
    switch (kind) {
    case PredKind::OV: return "OV";
    case PredKind::XOR: return "XOR";
    case PredKind::SUM_ZERO: return "SUM_ZERO";
    case PredKind::SUM_TARGET: return "SUM_TARGET";
    case PredKind::TABLE: return "TABLE";
    }
    return "?";
}

PredKind parse_pred_kind(std::string_view name) {
    if (name == "OV") return PredKind::OV;
    if (name == "XOR") return PredKind::XOR;
    if (name == "SUM_ZERO" || name == "SUM") return PredKind::SUM_ZERO;
    if (name == "SUM_TARGET") return PredKind::SUM_TARGET;
    if (name == "TABLE") return PredKind::TABLE;
    throw Error(Errc::parse_error, "unknown predicate '" + std::string(name) + "'");
}

std::vector<std::vector<BitString>> accepted_tuples(const Predicate& pred, unsigned b) {
    if (b > 16) throw Error(Errc::expansion_cap_exceeded, "accepted-tuple enumeration needs b <= 16");
    const std::uint64_t base = std::uint64_t{1} << b;
    double total = std::pow(static_cast<double>(base), pred.arity);
    if (total > 1e8) throw Error(Errc::expansion_cap_exceeded, "too many candidate tuples");
    std::vector<std::vector<BitString>> out;
    std::vector<BitString> tuple(pred.arity, BitString(b));
    std::vector<std::uint64_t> digits(pred.arity, 0);
    const auto count = static_cast<std::uint64_t>(total);
    for (std::uint64_t it = 0; it < count; ++it) {
        std::uint64_t x = it;
        for (unsigned i = pred.arity; i-- > 0;) {
            tuple[i] = BitString::from_uint(x % base, b);
            x /= base;
        }
        if (pred.accepts(tuple)) out.push_back(tuple);
    }
    return out;
}

namespace {

std::uint64_t circ_rec(std::span<const StringSet* const> sets, const Predicate& pred, std::size_t depth,
                       std::vector<BitString>& chosen, const BitString& acc, bool acc_overflow) {
    const std::size_t l = sets.size();
    if (depth + 1 == l && pred.kind != PredKind::TABLE) {
        const StringSet& last = *sets[depth];
        switch (pred.kind) {
        case PredKind::OV: {
            std::uint64_t c = 0;
            for (const BitString& s : last.items()) c += (acc & s).is_zero();
            return c;
        }
        case PredKind::XOR: return last.contains(acc);
        case PredKind::SUM_ZERO: return last.contains(acc.negate_mod());
        case PredKind::SUM_TARGET: return acc_overflow ? 0 : last.contains(acc);
        default: break;
        }
    }
    if (depth == l) return pred.accepts(chosen);
    std::uint64_t total = 0;
    for (const BitString& s : sets[depth]->items()) {
        chosen[depth] = s;
        BitString next = acc;
        bool overflow = acc_overflow;
        switch (pred.kind) {
        case PredKind::OV: next = acc & s; break;
        case PredKind::XOR: next = acc ^ s; break;
        case PredKind::SUM_ZERO: next = acc.add_mod(s); break;
        case PredKind::SUM_TARGET: {
            bool o = false;
            next = acc.add_exact(s, o);
            overflow = overflow || o;
            break;
        }
        case PredKind::TABLE: break;
        }
        total += circ_rec(sets, pred, depth + 1, chosen, next, overflow);
    }
    return total;
}

}  // namespace

std::uint64_t circ(std::span<const StringSet* const> sets, const Predicate& pred) {
    if (sets.size() != pred.arity) throw Error(Errc::arity_mismatch, "set count differs from predicate arity");
    if (sets.empty()) return 1;
    const unsigned w = sets[0]->width();
    for (const StringSet* s : sets) {
        if (s->width() != w) throw Error(Errc::width_mismatch, "group sets differ in width");
        if (s->empty()) return 0;
    }
    std::vector<BitString> chosen(sets.size(), BitString(w));
    const BitString start = pred.kind == PredKind::OV ? BitString::ones(w) : BitString(w);
    return circ_rec(sets, pred, 0, chosen, start, false);
}

BigInt circledast(std::span<const FactoredVector* const> vectors, const Predicate& pred) {
    if (vectors.size() != pred.arity) throw Error(Errc::arity_mismatch, "vector count differs from predicate arity");
    if (vectors.empty()) return 1;
    const unsigned g = vectors[0]->g();
    for (const FactoredVector* v : vectors) {
        if (v->g() != g) throw Error(Errc::shape_mismatch, "vectors differ in group count");
    }
    BigInt prod = 1;
    std::vector<const StringSet*> sets(vectors.size());
    for (unsigned grp = 0; grp < g; ++grp) {
        for (std::size_t i = 0; i < vectors.size(); ++i) sets[i] = &vectors[i]->groups[grp];
        const std::uint64_t c = circ(sets, pred);
        if (c == 0) return 0;
        prod *= c;
    }
    return prod;
}

unsigned pair_count(unsigned k) { return k * (k - 1) / 2; }

unsigned pair_index(unsigned a, unsigned b, unsigned k) {
    if (a > b) std::swap(a, b);
    if (a == b || b >= k) throw Error(Errc::invalid_parameters, "bad partition pair");
    // Pairs (a, *) start after a rows of decreasing length.
    return a * k - a * (a + 1) / 2 + (b - a - 1);
}

const std::optional<FactoredVector>& FfkcInstance::edge(unsigned pa, std::size_t i, unsigned pb, std::size_t j) const {
    if (pa > pb) {
        std::swap(pa, pb);
        std::swap(i, j);
    }
    return edges[pair_index(pa, pb, k)][i * n + j];
}

namespace {

void check_vector(const FactoredVector& v, unsigned g, unsigned b) {
    if (v.g() != g || v.b != b) throw Error(Errc::shape_mismatch, "factored vector shape differs from instance");
    for (const StringSet& s : v.groups) {
        if (s.width() != b) throw Error(Errc::width_mismatch, "group set width differs from b");
    }
}

}  // namespace

void validate(const FkfInstance& inst) {
    if (inst.k < 1 || inst.lists.size() != inst.k) throw Error(Errc::shape_mismatch, "need exactly k lists");
    if (inst.pred.arity != inst.k) throw Error(Errc::arity_mismatch, "predicate arity differs from k");
    const std::size_t n = inst.n();
    for (const auto& list : inst.lists) {
        if (list.size() != n) throw Error(Errc::shape_mismatch, "lists differ in length");
        for (const FactoredVector& v : list) check_vector(v, inst.g, inst.b);
    }
}

void validate(const FfkcInstance& inst) {
    if (inst.k < 2) throw Error(Errc::shape_mismatch, "need k >= 2 partitions");
    if (inst.pred.arity != pair_count(inst.k)) throw Error(Errc::arity_mismatch, "predicate arity differs from k(k-1)/2");
    if (inst.edges.size() != pair_count(inst.k)) throw Error(Errc::shape_mismatch, "edge table has wrong pair count");
    for (const auto& cls : inst.edges) {
        if (cls.size() != inst.n * inst.n) throw Error(Errc::shape_mismatch, "edge class has wrong size");
        for (const auto& e : cls) {
            if (e) check_vector(*e, inst.g, inst.b);
        }
    }
}

BigInt count_fkf(const FkfInstance& inst) {
    validate(inst);
    const std::size_t n = inst.n();
    BigInt total = 0;
    if (n == 0) return total;
    std::vector<std::size_t> idx(inst.k, 0);
    std::vector<const FactoredVector*> tuple(inst.k);
    while (true) {
        for (unsigned j = 0; j < inst.k; ++j) tuple[j] = &inst.lists[j][idx[j]];
        total += circledast(tuple, inst.pred);
        unsigned pos = inst.k;
        while (pos-- > 0) {
            if (++idx[pos] < n) break;
            idx[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) break;
    }
    return total;
}

BigInt count_ffkc(const FfkcInstance& inst) {
    validate(inst);
    BigInt total = 0;
    if (inst.n == 0) return total;
    const unsigned l = pair_count(inst.k);
    std::vector<std::size_t> idx(inst.k, 0);
    std::vector<const FactoredVector*> labels(l);
    while (true) {
        bool clique = true;
        for (unsigned a = 0; a < inst.k && clique; ++a) {
            for (unsigned b = a + 1; b < inst.k; ++b) {
                const auto& e = inst.edge(a, idx[a], b, idx[b]);
                if (!e) {
                    clique = false;
                    break;
                }
                labels[pair_index(a, b, inst.k)] = &*e;
            }
        }
        if (clique) total += circledast(labels, inst.pred);
        unsigned pos = inst.k;
        while (pos-- > 0) {
            if (++idx[pos] < inst.n) break;
            idx[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) break;
    }
    return total;
}

FactoredVector random_factored_vector(unsigned g, unsigned b, double mu, Rng& rng) {
    if (b > 16) throw Error(Errc::invalid_parameters, "random vectors need b <= 16");
    FactoredVector v;
    v.b = b;
    v.groups.assign(g, StringSet(b));
    for (unsigned grp = 0; grp < g; ++grp) {
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << b); ++s) {
            if (bernoulli(rng, mu)) v.groups[grp].insert(BitString::from_uint(s, b));
        }
    }
    return v;
}

FkfInstance gen_fkf(std::size_t n, unsigned k, unsigned g, unsigned b, double mu, std::uint64_t seed,
                    const Predicate& pred) {
    if (!(mu > 0.0 && mu < 1.0)) throw Error(Errc::invalid_bias, "mu must lie in (0, 1)");
    if (pred.arity != k) throw Error(Errc::arity_mismatch, "predicate arity differs from k");
    Rng rng = substream(seed, "gen_fkf");
    FkfInstance inst;
    inst.k = k;
    inst.g = g;
    inst.b = b;
    inst.pred = pred;
    inst.lists.resize(k);
    for (auto& list : inst.lists) {
        for (std::size_t i = 0; i < n; ++i) list.push_back(random_factored_vector(g, b, mu, rng));
    }
    return inst;
}

FfkcInstance gen_ffkc(std::size_t n, unsigned k, unsigned g, unsigned b, double mu, std::uint64_t seed,
                      const Predicate& pred) {
    if (!(mu > 0.0 && mu < 1.0)) throw Error(Errc::invalid_bias, "mu must lie in (0, 1)");
    if (k < 2 || pred.arity != pair_count(k)) throw Error(Errc::arity_mismatch, "predicate arity differs from k(k-1)/2");
    Rng rng = substream(seed, "gen_ffkc");
    FfkcInstance inst;
    inst.k = k;
    inst.g = g;
    inst.b = b;
    inst.n = n;
    inst.pred = pred;
    inst.edges.resize(pair_count(k));
    for (auto& cls : inst.edges) {
        for (std::size_t e = 0; e < n * n; ++e) cls.emplace_back(random_factored_vector(g, b, mu, rng));
    }
    return inst;
}

std::size_t FkfShape::var(unsigned list, unsigned group, std::size_t vec, std::uint32_t s) const {
    return ((static_cast<std::size_t>(list) * g + group) * n + vec) * (std::size_t{1} << b) + s;
}

std::size_t FfkcShape::n_vars() const {
    return static_cast<std::size_t>(pair_count(k)) * g * n * n * (std::size_t{1} << b);
}

std::size_t FfkcShape::var(unsigned q, unsigned group, std::size_t i, std::size_t j, std::uint32_t s) const {
    return ((static_cast<std::size_t>(q) * g + group) * n * n + i * n + j) * (std::size_t{1} << b) + s;
}

namespace {

// Cartesian product over groups of accepted tuples, each combined with a fixed node tuple.
void emit_monomials(PartitePolynomial& poly, const std::vector<std::vector<std::uint32_t>>& accepted_vals,
                    unsigned g, const std::function<std::uint32_t(unsigned, unsigned, std::uint32_t)>& var_of) {
    const std::size_t per = accepted_vals.size();
    if (per == 0) return;
    const std::size_t slots = accepted_vals[0].size();
    std::vector<std::size_t> choice(g, 0);
    std::vector<std::uint32_t> vars(static_cast<std::size_t>(g) * slots);
    while (true) {
        for (unsigned grp = 0; grp < g; ++grp) {
            const auto& tup = accepted_vals[choice[grp]];
            for (unsigned slot = 0; slot < slots; ++slot) vars[grp * slots + slot] = var_of(slot, grp, tup[slot]);
        }
        poly.add_monomial(vars, 1);
        unsigned pos = g;
        while (pos-- > 0) {
            if (++choice[pos] < per) break;
            choice[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) break;
    }
}

std::vector<std::vector<std::uint32_t>> accepted_values(const Predicate& pred, unsigned b) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& tup : accepted_tuples(pred, b)) {
        std::vector<std::uint32_t> vals;
        for (const BitString& s : tup) vals.push_back(static_cast<std::uint32_t>(s.low64()));
        out.push_back(std::move(vals));
    }
    return out;
}

}  // namespace

PartitePolynomial build_f_ckfunc(const FkfShape& shape, const Predicate& pred, std::uint64_t p,
                                 std::size_t monomial_cap) {
    if (pred.arity != shape.k) throw Error(Errc::arity_mismatch, "predicate arity differs from k");
    const auto acc = accepted_values(pred, shape.b);
    const double count = std::pow(static_cast<double>(shape.n), shape.k) * std::pow(static_cast<double>(acc.size()), shape.g);
    if (count > static_cast<double>(monomial_cap)) {
        throw Error(Errc::monomial_cap_exceeded, "n^k |S_f|^g exceeds the cap");
    }
    std::vector<unsigned> partition(shape.n_vars());
    for (unsigned list = 0; list < shape.k; ++list) {
        for (unsigned grp = 0; grp < shape.g; ++grp) {
            for (std::size_t vec = 0; vec < shape.n; ++vec) {
                for (std::uint32_t s = 0; s < (1U << shape.b); ++s) partition[shape.var(list, grp, vec, s)] = list * shape.g + grp;
            }
        }
    }
    PartitePolynomial poly(shape.n_vars(), std::move(partition), shape.k * shape.g, p);
    if (shape.n == 0) return poly;
    std::vector<std::size_t> idx(shape.k, 0);
    while (true) {
        emit_monomials(poly, acc, shape.g, [&](unsigned slot, unsigned grp, std::uint32_t s) {
            return static_cast<std::uint32_t>(shape.var(slot, grp, idx[slot], s));
        });
        unsigned pos = shape.k;
        while (pos-- > 0) {
            if (++idx[pos] < shape.n) break;
            idx[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) break;
    }
    poly.canonicalize();
    return poly;
}

PartitePolynomial build_f_ffkc(const FfkcShape& shape, const Predicate& pred, std::uint64_t p,
                               std::size_t monomial_cap) {
    const unsigned l = pair_count(shape.k);
    if (pred.arity != l) throw Error(Errc::arity_mismatch, "predicate arity differs from k(k-1)/2");
    const auto acc = accepted_values(pred, shape.b);
    const double count = std::pow(static_cast<double>(shape.n), shape.k) * std::pow(static_cast<double>(acc.size()), shape.g);
    if (count > static_cast<double>(monomial_cap)) {
        throw Error(Errc::monomial_cap_exceeded, "n^k |S_f|^g exceeds the cap");
    }
    std::vector<unsigned> partition(shape.n_vars());
    for (unsigned q = 0; q < l; ++q) {
        for (unsigned grp = 0; grp < shape.g; ++grp) {
            for (std::size_t e = 0; e < shape.n * shape.n; ++e) {
                for (std::uint32_t s = 0; s < (1U << shape.b); ++s) {
                    partition[shape.var(q, grp, e / shape.n, e % shape.n, s)] = q * shape.g + grp;
                }
            }
        }
    }
    PartitePolynomial poly(shape.n_vars(), std::move(partition), l * shape.g, p);
    if (shape.n == 0) return poly;
    // Endpoints of each pair index.
    std::vector<std::pair<unsigned, unsigned>> ends(l);
    for (unsigned a = 0; a < shape.k; ++a) {
        for (unsigned b = a + 1; b < shape.k; ++b) ends[pair_index(a, b, shape.k)] = {a, b};
    }
    std::vector<std::size_t> idx(shape.k, 0);
    while (true) {
        emit_monomials(poly, acc, shape.g, [&](unsigned slot, unsigned grp, std::uint32_t s) {
            const auto [a, b] = ends[slot];
            return static_cast<std::uint32_t>(shape.var(slot, grp, idx[a], idx[b], s));
        });
        unsigned pos = shape.k;
        while (pos-- > 0) {
            if (++idx[pos] < shape.n) break;
            idx[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) break;
    }
    poly.canonicalize();
    return poly;
}

std::vector<std::uint8_t> indicator(const FkfInstance& inst) {
    validate(inst);
    FkfShape shape{inst.n(), inst.k, inst.g, inst.b};
    std::vector<std::uint8_t> bits(shape.n_vars(), 0);
    for (unsigned list = 0; list < inst.k; ++list) {
        for (std::size_t vec = 0; vec < shape.n; ++vec) {
            for (unsigned grp = 0; grp < inst.g; ++grp) {
                for (const BitString& s : inst.lists[list][vec].groups[grp].items()) {
                    bits[shape.var(list, grp, vec, static_cast<std::uint32_t>(s.low64()))] = 1;
                }
            }
        }
    }
    return bits;
}

std::vector<std::uint8_t> indicator(const FfkcInstance& inst) {
    validate(inst);
    FfkcShape shape{inst.n, inst.k, inst.g, inst.b};
    std::vector<std::uint8_t> bits(shape.n_vars(), 0);
    for (unsigned q = 0; q < pair_count(inst.k); ++q) {
        for (std::size_t e = 0; e < inst.n * inst.n; ++e) {
            const auto& lab = inst.edges[q][e];
            if (!lab) continue;
            for (unsigned grp = 0; grp < inst.g; ++grp) {
                for (const BitString& s : lab->groups[grp].items()) {
                    bits[shape.var(q, grp, e / inst.n, e % inst.n, static_cast<std::uint32_t>(s.low64()))] = 1;
                }
            }
        }
    }
    return bits;
}

FkfInstance fkf_from_indicator(std::span<const std::uint8_t> bits, const FkfShape& shape, const Predicate& pred) {
    if (bits.size() != shape.n_vars()) throw Error(Errc::arity_mismatch, "indicator length differs from shape");
    FkfInstance inst;
    inst.k = shape.k;
    inst.g = shape.g;
    inst.b = shape.b;
    inst.pred = pred;
    inst.lists.assign(shape.k, {});
    for (unsigned list = 0; list < shape.k; ++list) {
        for (std::size_t vec = 0; vec < shape.n; ++vec) {
            FactoredVector v;
            v.b = shape.b;
            v.groups.assign(shape.g, StringSet(shape.b));
            for (unsigned grp = 0; grp < shape.g; ++grp) {
                for (std::uint32_t s = 0; s < (1U << shape.b); ++s) {
                    if (bits[shape.var(list, grp, vec, s)]) v.groups[grp].insert(BitString::from_uint(s, shape.b));
                }
            }
            inst.lists[list].push_back(std::move(v));
        }
    }
    return inst;
}

PairIndicatorCounter::PairIndicatorCounter(const FkfShape& shape, const Predicate& pred) : shape_(shape) {
    if (shape.k != 2 || pred.arity != 2) throw Error(Errc::invalid_parameters, "pair counter needs k = 2");
    if (shape.b > 3) throw Error(Errc::invalid_parameters, "pair counter needs b <= 3");
    const double bound = static_cast<double>(shape.n) * shape.n * std::pow(2.0, 2.0 * shape.b * shape.g);
    if (bound >= 0x1.0p63) throw Error(Errc::invalid_parameters, "count may overflow 64 bits");
    masks_ = 1U << (1U << shape.b);
    table_.assign(static_cast<std::size_t>(masks_) * masks_, 0);
    const unsigned strings = 1U << shape.b;
    for (unsigned mu = 0; mu < masks_; ++mu) {
        for (unsigned mv = 0; mv < masks_; ++mv) {
            std::uint64_t c = 0;
            for (unsigned s = 0; s < strings; ++s) {
                if (!((mu >> s) & 1U)) continue;
                for (unsigned t = 0; t < strings; ++t) {
                    if (!((mv >> t) & 1U)) continue;
                    const BitString tup[2] = {BitString::from_uint(s, shape.b), BitString::from_uint(t, shape.b)};
                    c += pred.accepts(tup);
                }
            }
            table_[static_cast<std::size_t>(mu) * masks_ + mv] = c;
        }
    }
    if (shape.g == 2 && shape.b == 2) {
        // Both groups in one lookup: index (mu0 + 16 mu1) * 256 + (mv0 + 16 mv1).
        pair_table_.assign(256 * 256, 0);
        for (unsigned u = 0; u < 256; ++u) {
            for (unsigned v = 0; v < 256; ++v) {
                if ((u >> 4) >= masks_ || (u & 15) >= masks_ || (v >> 4) >= masks_ || (v & 15) >= masks_) continue;
                pair_table_[u * 256 + v] = static_cast<std::uint16_t>(table_[(u & 15) * masks_ + (v & 15)] *
                                                                      table_[(u >> 4) * masks_ + (v >> 4)]);
            }
        }
    }
}

namespace {

template <unsigned S>
void gather_masks(const std::uint8_t* ptr, std::size_t blocks, std::uint32_t* masks) {
    for (std::size_t blk = 0; blk < blocks; ++blk, ptr += S) {
        std::uint64_t word = 0;
        std::memcpy(&word, ptr, S);
        // Moves the low bit of byte i to bit 56 + i.
        masks[blk] = static_cast<std::uint32_t>(((word & 0x0101010101010101ULL) * 0x0102040810204080ULL) >> 56);
    }
}

}  // namespace

std::uint64_t PairIndicatorCounter::count_pair_table(const std::uint8_t* bits) const {
    const std::size_t n = shape_.n;
    constexpr std::size_t stride = 4;
    const std::size_t group_bytes = stride * n;
    // Both group masks of a vector from one multiply: group 0 in the low nibble, group 1 in the high one.
    const auto key = [&](const std::uint8_t* p0, const std::uint8_t* p1) {
        std::uint32_t a = 0, b = 0;
        std::memcpy(&a, p0, stride);
        std::memcpy(&b, p1, stride);
        const std::uint64_t w = (static_cast<std::uint64_t>(b) << 32 | a) & 0x0101010101010101ULL;
        return static_cast<std::uint8_t>((w * 0x0102040810204080ULL) >> 56);
    };
    std::array<std::uint8_t, 64> uk, vk;
    for (std::size_t v = 0; v < n; ++v) {
        uk[v] = key(bits + stride * v, bits + group_bytes + stride * v);
        vk[v] = key(bits + 2 * group_bytes + stride * v, bits + 3 * group_bytes + stride * v);
    }
    const std::uint16_t* pt = pair_table_.data();
    std::uint64_t total = 0;
    for (std::size_t a = 0; a < n; ++a) {
        const std::uint16_t* row = pt + static_cast<std::size_t>(uk[a]) * 256;
        std::uint32_t p0 = 0, p1 = 0;
        std::size_t c = 0;
        for (; c + 2 <= n; c += 2) {
            p0 += row[vk[c]];
            p1 += row[vk[c + 1]];
        }
        if (c < n) p0 += row[vk[c]];
        total += p0 + p1;
    }
    return total;
}

std::uint64_t PairIndicatorCounter::count_u64(std::span<const std::uint8_t> bits) const {
    if (bits.size() != shape_.n_vars()) throw Error(Errc::arity_mismatch, "indicator length differs from shape");
    const std::size_t n = shape_.n;
    const unsigned g = shape_.g;
    if (!pair_table_.empty() && n <= 64) return count_pair_table(bits.data());
    const std::size_t blocks = 2 * static_cast<std::size_t>(g) * n;
    // Layout [list][grp * n + vec].
    std::array<std::uint32_t, 512> stack_masks;
    std::vector<std::uint32_t> heap_masks;
    std::uint32_t* masks = stack_masks.data();
    if (blocks > stack_masks.size()) {
        heap_masks.resize(blocks);
        masks = heap_masks.data();
    }
    switch (shape_.b) {
    case 0: gather_masks<1>(bits.data(), blocks, masks); break;
    case 1: gather_masks<2>(bits.data(), blocks, masks); break;
    case 2: gather_masks<4>(bits.data(), blocks, masks); break;
    default: gather_masks<8>(bits.data(), blocks, masks); break;
    }
    const std::uint32_t* mu = masks;
    const std::uint32_t* mv = masks + static_cast<std::size_t>(g) * n;
    const std::uint64_t* table = table_.data();
    std::uint64_t total = 0;
    if (g == 2) {
        for (std::size_t a = 0; a < n; ++a) {
            const std::uint64_t* r0 = table + static_cast<std::size_t>(mu[a]) * masks_;
            const std::uint64_t* r1 = table + static_cast<std::size_t>(mu[n + a]) * masks_;
            for (std::size_t c = 0; c < n; ++c) total += r0[mv[c]] * r1[mv[n + c]];
        }
        return total;
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t c = 0; c < n; ++c) {
            std::uint64_t prod = 1;
            for (unsigned grp = 0; grp < g && prod; ++grp) {
                prod *= table[static_cast<std::size_t>(mu[grp * n + a]) * masks_ + mv[grp * n + c]];
            }
            total += prod;
        }
    }
    return total;
}

BigInt PairIndicatorCounter::operator()(std::span<const std::uint8_t> bits) const { return BigInt(count_u64(bits)); }

}  // namespace facred
