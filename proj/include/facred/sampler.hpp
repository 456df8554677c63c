#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "facred/error.hpp"
#include "facred/field.hpp"
#include "facred/types.hpp"

namespace facred {

struct SamplerConfig {
    double mu = 0.5;
    unsigned t = 0;
    double epsilon = 0.0;
    double C = 4.0;
    std::uint64_t rejection_cap = 0;
};

// t = ceil(C * (mu (1 - mu))^-1 * (lg p + 6 lg n) * lg p).
unsigned choose_t(std::uint64_t p, double mu, std::uint64_t n, double C = 4.0);

// Config with t = max(choose_t(...), min_t), epsilon = 1/n^3 and the rejection cap
// ceil(t * (1/p - epsilon)^-1 * lg^3 n).
SamplerConfig make_sampler_config(std::uint64_t p, double mu, std::uint64_t n, double C = 4.0,
                                  unsigned min_t = 0);

// A t-bit nonnegative integer, bit 0 least significant.
struct Lifted {
    boost::container::small_vector<std::uint64_t, 2> words;
    unsigned t = 0;

    bool bit(unsigned r) const { return (words[r >> 6] >> (r & 63)) & 1U; }
    std::uint64_t mod(std::uint64_t p) const;
    BigInt value() const;
};

namespace detail {

template <class URBG>
Lifted lift_unchecked(FieldElem x, const SamplerConfig& cfg, URBG& rng, std::uint64_t* attempts_out) {
    Lifted out;
    out.t = cfg.t;
    out.words.assign((cfg.t + 63) / 64, 0);
    const std::uint64_t target = x.value % x.p;
    // With mu = 1/2 every bit is a fair coin, so whole words can be drawn at once.
    if (cfg.mu == 0.5 && cfg.t <= 64 && x.p <= 0xffffffffULL) {
        const std::uint64_t mask = cfg.t == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cfg.t) - 1;
        const auto p32 = static_cast<std::uint32_t>(x.p);
        for (std::uint64_t attempt = 1; attempt <= cfg.rejection_cap; ++attempt) {
            const std::uint64_t word = (rng() - URBG::min()) & mask;
            const std::uint64_t residue = word <= 0xffffffffULL ? static_cast<std::uint32_t>(word) % p32 : word % x.p;
            if (residue == target) {
                out.words[0] = word;
                if (attempts_out) *attempts_out = attempt;
                return out;
            }
        }
    } else {
        const bool fair = cfg.mu == 0.5;
        const std::uint64_t word_step = pow_mod(2, 64, x.p);
        for (std::uint64_t attempt = 1; attempt <= cfg.rejection_cap; ++attempt) {
            std::uint64_t residue = 0;
            if (fair) {
                std::uint64_t pw = 1 % x.p;
                for (std::size_t w = 0; w < out.words.size(); ++w) {
                    const unsigned bits = std::min(64U, cfg.t - static_cast<unsigned>(64 * w));
                    std::uint64_t word = rng() - URBG::min();
                    if (bits < 64) word &= (std::uint64_t{1} << bits) - 1;
                    out.words[w] = word;
                    residue = add_mod(residue, mul_mod(word % x.p, pw, x.p), x.p);
                    pw = mul_mod(pw, word_step, x.p);
                }
            } else {
                std::fill(out.words.begin(), out.words.end(), 0);
                std::uint64_t pw = 1 % x.p;
                for (unsigned i = 0; i < cfg.t; ++i) {
                    if (bernoulli(rng, cfg.mu)) {
                        out.words[i >> 6] |= std::uint64_t{1} << (i & 63);
                        residue = add_mod(residue, pw, x.p);
                    }
                    pw = add_mod(pw, pw, x.p);
                }
            }
            if (residue == target) {
                if (attempts_out) *attempts_out = attempt;
                return out;
            }
        }
    }
    throw Error(Errc::sampler_timeout, "no congruent sample within " + std::to_string(cfg.rejection_cap) + " tries");
}

inline void check_lift_config(std::uint64_t p, const SamplerConfig& cfg, std::uint64_t n) {
    if (!(cfg.mu > 0.0 && cfg.mu < 1.0)) throw Error(Errc::invalid_bias, "mu must lie in (0, 1)");
    if (cfg.t < choose_t(p, cfg.mu, n, cfg.C)) throw Error(Errc::invalid_parameters, "t below the required bit length");
}

}  // namespace detail

// Rejection-samples y = sum_i Ber(mu) 2^i over t bits until y == x (mod p).
template <class URBG>
Lifted lift(FieldElem x, const SamplerConfig& cfg, std::uint64_t n, URBG& rng,
            std::uint64_t* attempts_out = nullptr) {
    detail::check_lift_config(x.p, cfg, n);
    return detail::lift_unchecked(x, cfg, rng, attempts_out);
}

template <class URBG>
std::vector<Lifted> lift_vector(std::span<const FieldElem> xs, const SamplerConfig& cfg, std::uint64_t n,
                                URBG& rng) {
    std::vector<Lifted> out;
    out.reserve(xs.size());
    if (xs.empty()) return out;
    detail::check_lift_config(xs[0].p, cfg, n);
    for (const FieldElem& x : xs) {
        if (x.p != xs[0].p) throw Error(Errc::invalid_parameters, "mixed moduli in one vector");
        out.push_back(detail::lift_unchecked(x, cfg, rng, nullptr));
    }
    return out;
}

}  // namespace facred
