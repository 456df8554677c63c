#include "facred/zkc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <memory>
#include <numeric>

#include "facred/error.hpp"
#include "facred/factored.hpp"

namespace facred {

namespace {

// Calls fn(clique) for every clique; partitions in `fixed` keep their current value.
template <class F>
void for_each_clique(const ZkcInstance& inst, Clique& c, const std::vector<bool>& fixed, F&& fn) {
    const unsigned k = inst.k;
    std::vector<unsigned> free;
    for (unsigned a = 0; a < k; ++a) {
        if (!fixed[a]) {
            free.push_back(a);
            c[a] = 0;
        }
    }
    if (inst.n == 0) return;
    while (true) {
        fn(c);
        std::size_t pos = free.size();
        while (pos-- > 0) {
            if (++c[free[pos]] < inst.n) break;
            c[free[pos]] = 0;
        }
        if (pos == static_cast<std::size_t>(-1)) break;
    }
}

SubInstance restrict_to(const ZkcInstance& inst, std::vector<std::vector<std::uint32_t>> chosen) {
    SubInstance sub;
    sub.origin = std::move(chosen);
    const std::size_t m = sub.origin[0].size();
    sub.inst.k = inst.k;
    sub.inst.n = m;
    sub.inst.R = inst.R;
    sub.inst.weights.resize(inst.weights.size());
    for (unsigned a = 0; a < inst.k; ++a) {
        for (unsigned c = a + 1; c < inst.k; ++c) {
            const unsigned q = pair_index(a, c, inst.k);
            auto& w = sub.inst.weights[q];
            w.resize(m * m);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) w[i * m + j] = inst.weights[q][sub.origin[a][i] * inst.n + sub.origin[c][j]];
            }
        }
    }
    return sub;
}

std::size_t nearest_divisor(std::size_t n, double target) {
    std::size_t best = 1;
    double best_gap = INFINITY;
    for (std::size_t x = 1; x <= n; ++x) {
        if (n % x != 0) continue;
        const double gap = std::fabs(std::log(static_cast<double>(x)) - std::log(std::max(target, 1.0)));
        if (gap < best_gap - 1e-12) {
            best_gap = gap;
            best = x;
        }
    }
    return best;
}

std::vector<std::uint32_t> sample_nodes(std::size_t n, std::size_t s, Rng& rng) {
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0U);
    std::vector<std::uint32_t> out;
    std::sample(all.begin(), all.end(), std::back_inserter(out), s, rng);
    return out;
}

std::uint64_t saturating_pow(std::uint64_t base, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
        r *= base;
    }
    return r;
}

}  // namespace

std::uint64_t ZkcInstance::weight(unsigned a, std::size_t i, unsigned c, std::size_t j) const {
    if (a > c) {
        std::swap(a, c);
        std::swap(i, j);
    }
    return weights[pair_index(a, c, k)][i * n + j];
}

void validate(const ZkcInstance& inst) {
    if (inst.k < 2) throw Error(Errc::invalid_parameters, "need k >= 2");
    if (inst.R < 1) throw Error(Errc::invalid_parameters, "need R >= 1");
    if (inst.weights.size() != pair_count(inst.k)) throw Error(Errc::shape_mismatch, "wrong number of pair tables");
    for (const auto& w : inst.weights) {
        if (w.size() != inst.n * inst.n) throw Error(Errc::shape_mismatch, "pair table has wrong size");
        for (std::uint64_t x : w) {
            if (x >= inst.R) throw Error(Errc::range_violation, "weight outside [0, R)");
        }
    }
}

ZkcInstance gen_aczkc(std::size_t n, unsigned k, std::uint64_t R, std::uint64_t seed) {
    if (k < 2 || R < 1) throw Error(Errc::invalid_parameters, "need k >= 2 and R >= 1");
    Rng rng = substream(seed, "gen_aczkc");
    ZkcInstance inst;
    inst.k = k;
    inst.n = n;
    inst.R = R;
    inst.weights.assign(pair_count(k), std::vector<std::uint64_t>(n * n));
    for (auto& w : inst.weights) {
        for (auto& x : w) x = uniform_below(rng, R);
    }
    return inst;
}

bool is_zero_clique(const ZkcInstance& inst, const Clique& c) {
    if (c.size() != inst.k) return false;
    std::uint64_t s = 0;
    for (unsigned a = 0; a < inst.k; ++a) {
        if (c[a] >= inst.n) return false;
        for (unsigned b = a + 1; b < inst.k; ++b) s = (s + inst.weight(a, c[a], b, c[b])) % inst.R;
    }
    return s == 0;
}

std::uint64_t brute_count(const ZkcInstance& inst) {
    validate(inst);
    std::uint64_t total = 0;
    Clique c(inst.k, 0);
    for_each_clique(inst, c, std::vector<bool>(inst.k, false), [&](const Clique& q) { total += is_zero_clique(inst, q); });
    return total;
}

std::optional<Clique> brute_search(const ZkcInstance& inst) {
    validate(inst);
    std::optional<Clique> found;
    Clique c(inst.k, 0);
    // Enumeration continues after a hit; instances here are small.
    for_each_clique(inst, c, std::vector<bool>(inst.k, false), [&](const Clique& q) {
        if (!found && is_zero_clique(inst, q)) found = q;
    });
    return found;
}

std::set<Clique> brute_list(const ZkcInstance& inst) {
    validate(inst);
    std::set<Clique> out;
    Clique c(inst.k, 0);
    for_each_clique(inst, c, std::vector<bool>(inst.k, false), [&](const Clique& q) {
        if (is_zero_clique(inst, q)) out.insert(q);
    });
    return out;
}

std::uint64_t count_small_range(const ZkcInstance& inst, std::size_t max_super_nodes) {
    validate(inst);
    const unsigned k = inst.k;
    if (k < 3) throw Error(Errc::invalid_parameters, "needs k >= 3");
    const std::uint64_t R = inst.R;
    const std::size_t n = inst.n;
    if (n == 0) return 0;

    // Three blocks of consecutive partitions.
    std::array<std::vector<unsigned>, 3> block;
    unsigned next = 0;
    for (unsigned b = 0; b < 3; ++b) {
        const unsigned size = k / 3 + (b < k % 3 ? 1 : 0);
        for (unsigned i = 0; i < size; ++i) block[b].push_back(next++);
    }

    // Super-nodes: one tuple of nodes per block.
    std::array<std::vector<Clique>, 3> super;
    for (unsigned b = 0; b < 3; ++b) {
        const std::uint64_t count = saturating_pow(n, static_cast<unsigned>(block[b].size()));
        if (count > max_super_nodes) throw Error(Errc::memory_cap_exceeded, "too many super-nodes");
        for (std::uint64_t t = 0; t < count; ++t) {
            Clique tup(block[b].size());
            std::uint64_t x = t;
            for (std::size_t i = tup.size(); i-- > 0;) {
                tup[i] = static_cast<std::uint32_t>(x % n);
                x /= n;
            }
            super[b].push_back(std::move(tup));
        }
    }

    auto internal = [&](unsigned b, const Clique& t) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (std::size_t j = i + 1; j < t.size(); ++j) s = (s + inst.weight(block[b][i], t[i], block[b][j], t[j])) % R;
        }
        return s;
    };
    auto cross = [&](unsigned b1, const Clique& t1, unsigned b2, const Clique& t2) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < t1.size(); ++i) {
            for (std::size_t j = 0; j < t2.size(); ++j) s = (s + inst.weight(block[b1][i], t1[i], block[b2][j], t2[j])) % R;
        }
        return s;
    };

    // Each block's internal weight rides on one triangle edge: A on AB, B on BC, C on CA.
    const std::size_t na = super[0].size(), nb = super[1].size(), nc = super[2].size();
    std::vector<std::uint64_t> w_ab(na * nb), w_bc(nb * nc), w_ca(nc * na);
    for (std::size_t a = 0; a < na; ++a) {
        const std::uint64_t ia = internal(0, super[0][a]);
        for (std::size_t b = 0; b < nb; ++b) w_ab[a * nb + b] = (cross(0, super[0][a], 1, super[1][b]) + ia) % R;
    }
    for (std::size_t b = 0; b < nb; ++b) {
        const std::uint64_t ib = internal(1, super[1][b]);
        for (std::size_t c = 0; c < nc; ++c) w_bc[b * nc + c] = (cross(1, super[1][b], 2, super[2][c]) + ib) % R;
    }
    for (std::size_t c = 0; c < nc; ++c) {
        const std::uint64_t ic = internal(2, super[2][c]);
        for (std::size_t a = 0; a < na; ++a) w_ca[c * na + a] = (cross(2, super[2][c], 0, super[0][a]) + ic) % R;
    }

    // Guess the AB and BC weights; the CA weight is then forced.
    std::uint64_t total = 0;
    std::vector<std::uint8_t> m1(na * nb), m2(nb * nc);
    std::vector<std::uint64_t> prod(na * nc);
    for (std::uint64_t r1 = 0; r1 < R; ++r1) {
        for (std::size_t i = 0; i < na * nb; ++i) m1[i] = w_ab[i] == r1;
        for (std::uint64_t r2 = 0; r2 < R; ++r2) {
            for (std::size_t i = 0; i < nb * nc; ++i) m2[i] = w_bc[i] == r2;
            std::fill(prod.begin(), prod.end(), 0);
            for (std::size_t a = 0; a < na; ++a) {
                for (std::size_t b = 0; b < nb; ++b) {
                    if (!m1[a * nb + b]) continue;
                    for (std::size_t c = 0; c < nc; ++c) prod[a * nc + c] += m2[b * nc + c];
                }
            }
            const std::uint64_t need = (2 * R - r1 - r2) % R;
            for (std::size_t a = 0; a < na; ++a) {
                for (std::size_t c = 0; c < nc; ++c) {
                    if (w_ca[c * na + a] == need) total += prod[a * nc + c];
                }
            }
        }
    }
    return total;
}

Clique SubInstance::to_original(const Clique& c) const {
    Clique out(c.size());
    for (std::size_t a = 0; a < c.size(); ++a) out[a] = origin[a][c[a]];
    return out;
}

std::vector<SubInstance> split(const ZkcInstance& inst, std::size_t x, std::uint64_t seed) {
    validate(inst);
    if (x == 0 || inst.n % x != 0) throw Error(Errc::invalid_parameters, "x must divide n");
    const std::size_t blocks = inst.n / x;
    Rng rng = substream(seed, "split");
    std::vector<std::vector<std::vector<std::uint32_t>>> parts(inst.k);
    for (unsigned a = 0; a < inst.k; ++a) {
        std::vector<std::uint32_t> perm(inst.n);
        std::iota(perm.begin(), perm.end(), 0U);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t b = 0; b < blocks; ++b) {
            std::vector<std::uint32_t> blk(perm.begin() + static_cast<std::ptrdiff_t>(b * x),
                                           perm.begin() + static_cast<std::ptrdiff_t>((b + 1) * x));
            std::sort(blk.begin(), blk.end());
            parts[a].push_back(std::move(blk));
        }
    }
    std::vector<SubInstance> family;
    std::vector<std::size_t> pick(inst.k, 0);
    while (true) {
        std::vector<std::vector<std::uint32_t>> chosen(inst.k);
        for (unsigned a = 0; a < inst.k; ++a) chosen[a] = parts[a][pick[a]];
        family.push_back(restrict_to(inst, std::move(chosen)));
        unsigned pos = inst.k;
        while (pos-- > 0) {
            if (++pick[pos] < blocks) break;
            pick[pos] = 0;
        }
        if (pos == static_cast<unsigned>(-1)) break;
    }
    return family;
}

Detector exact_detector() {
    return [](const ZkcInstance& inst) { return brute_search(inst).has_value(); };
}

Detector noisy_detector(double p, std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(substream(seed, "noisy_detector"));
    return [p, rng](const ZkcInstance& inst) {
        const bool truth = brute_search(inst).has_value();
        return bernoulli(*rng, p) ? !truth : truth;
    };
}

std::optional<Clique> search_via_detection(const ZkcInstance& inst, const Detector& det, double epsilon,
                                           std::uint64_t seed) {
    validate(inst);
    if (inst.n == 0) return std::nullopt;
    const std::size_t x = nearest_divisor(inst.n, std::pow(static_cast<double>(inst.n), 1.0 - epsilon));
    if (x == inst.n) {
        if (!det(inst)) return std::nullopt;
        return brute_search(inst);
    }
    for (const SubInstance& sub : split(inst, x, seed)) {
        if (!det(sub.inst)) continue;
        if (auto c = brute_search(sub.inst)) return sub.to_original(*c);
    }
    return std::nullopt;
}

std::uint64_t lg2_factor(std::size_t n) {
    const double l = std::log2(static_cast<double>(std::max<std::size_t>(n, 16)));
    return static_cast<std::uint64_t>(std::ceil(l * l - 1e-9));
}

std::set<Clique> list_all_via_search(const ZkcInstance& inst, const Searcher& search, std::uint64_t seed) {
    validate(inst);
    std::set<Clique> found;
    if (inst.n == 0) return found;
    const std::uint64_t L = lg2_factor(inst.n);
    const std::size_t shrink = std::max<std::size_t>(2, std::min<std::size_t>(inst.k * L, inst.n / 4));
    const std::size_t s = std::max<std::size_t>(1, inst.n / shrink);
    const double ratio = static_cast<double>(inst.n) / static_cast<double>(s);
    const auto rounds = static_cast<std::uint64_t>(std::ceil(4.0 * std::pow(ratio, inst.k) * static_cast<double>(L)));
    Rng rng = substream(seed, "list_all");
    for (std::uint64_t r = 0; r < rounds; ++r) {
        std::vector<std::vector<std::uint32_t>> chosen(inst.k);
        for (unsigned a = 0; a < inst.k; ++a) chosen[a] = sample_nodes(inst.n, s, rng);
        const SubInstance sub = restrict_to(inst, std::move(chosen));
        const auto hit = search(sub.inst);
        if (!hit) continue;
        const Clique h = sub.to_original(*hit);
        // Every clique sharing a node with the hit.
        for (unsigned a = 0; a < inst.k; ++a) {
            std::vector<bool> fixed(inst.k, false);
            fixed[a] = true;
            Clique c(inst.k, 0);
            c[a] = h[a];
            for_each_clique(inst, c, fixed, [&](const Clique& q) {
                if (is_zero_clique(inst, q)) found.insert(q);
            });
        }
    }
    return found;
}

RangeReduction reduce_range(const ZkcInstance& inst, std::uint64_t target_R, std::uint64_t seed) {
    validate(inst);
    RangeReduction out;
    if (target_R == 0) throw Error(Errc::invalid_parameters, "target range must be positive");
    const ZkcInstance original = inst;
    out.verify = [original](const Clique& c) { return is_zero_clique(original, c); };
    if (target_R >= inst.R) {
        out.shifted.push_back(inst);
        return out;
    }
    const std::uint64_t R = inst.R, T = target_R;
    const unsigned l = pair_count(inst.k);
    Rng rng = substream(seed, "reduce_range");
    std::vector<std::uint64_t> offset(l);
    std::uint64_t sum = 0;
    for (unsigned q = 0; q + 1 < l; ++q) {
        offset[q] = uniform_below(rng, R);
        sum = (sum + offset[q]) % R;
    }
    offset[l - 1] = (R - sum) % R;

    // h(w) = floor(((w + r_q) mod R) * T / R). For a zero clique the hashed sum lands in
    // {0, -1, ..., -(l-1)} mod T, so one of l shifted copies sees it as zero.
    ZkcInstance hashed = inst;
    hashed.R = T;
    for (unsigned q = 0; q < l; ++q) {
        for (auto& w : hashed.weights[q]) {
            const auto y = static_cast<unsigned __int128>((w + offset[q]) % R);
            w = static_cast<std::uint64_t>(y * T / R);
        }
    }
    const std::uint64_t shifts = std::min<std::uint64_t>(l, T);
    for (std::uint64_t delta = 0; delta < shifts; ++delta) {
        ZkcInstance s = hashed;
        for (auto& w : s.weights[0]) w = (w + delta) % T;
        out.shifted.push_back(std::move(s));
    }
    return out;
}

std::uint64_t count_via_detection(const ZkcInstance& inst, const Detector& det, std::uint64_t seed, ChainStats* stats) {
    validate(inst);
    ChainStats local;
    ChainStats& st = stats ? *stats : local;
    if (inst.R <= kSmallRange && inst.k >= 3) {
        st.path = "small-range";
        return count_small_range(inst);
    }
    Rng master = substream(seed, "count_via_detection");
    const Detector counted = [&](const ZkcInstance& sub) {
        ++st.detector_calls;
        return det(sub);
    };
    const Searcher searcher = [&](const ZkcInstance& sub) {
        ++st.search_calls;
        return search_via_detection(sub, counted, 0.5, master());
    };

    const std::uint64_t nk = saturating_pow(inst.n, inst.k);
    if (inst.R > nk) {
        st.path = "hash";
        const RangeReduction red = reduce_range(inst, std::max<std::uint64_t>(nk, 1), master());
        std::set<Clique> verified;
        for (const ZkcInstance& s : red.shifted) {
            ++st.subinstances;
            for (const Clique& c : list_all_via_search(s, searcher, master())) {
                if (red.verify(c)) verified.insert(c);
            }
        }
        return verified.size();
    }
    const std::size_t x = nearest_divisor(inst.n, std::pow(static_cast<double>(inst.R), 1.0 / inst.k));
    if (x == inst.n) {
        st.path = "list";
        st.subinstances = 1;
        return list_all_via_search(inst, searcher, master()).size();
    }
    st.path = "split";
    std::uint64_t total = 0;
    for (const SubInstance& sub : split(inst, x, master())) {
        ++st.subinstances;
        total += list_all_via_search(sub.inst, searcher, master()).size();
    }
    return total;
}

}  // namespace facred
