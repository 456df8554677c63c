#include "facred/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace facred {

unsigned choose_t(std::uint64_t p, double mu, std::uint64_t n, double C) {
    if (!(mu > 0.0 && mu < 1.0)) throw Error(Errc::invalid_bias, "mu must lie in (0, 1)");
    if (p < 2 || n < 1 || !(C > 0.0)) throw Error(Errc::invalid_parameters, "choose_t needs p >= 2, n >= 1, C > 0");
    const double lgp = std::log2(static_cast<double>(p));
    const double lgn = std::log2(static_cast<double>(n));
    const double t = C / (mu * (1.0 - mu)) * (lgp + 6.0 * lgn) * lgp;
    return static_cast<unsigned>(std::ceil(t - 1e-9));
}

SamplerConfig make_sampler_config(std::uint64_t p, double mu, std::uint64_t n, double C, unsigned min_t) {
    SamplerConfig cfg;
    cfg.mu = mu;
    cfg.C = C;
    cfg.t = std::max(choose_t(p, mu, n, C), min_t);
    const double nn = static_cast<double>(std::max<std::uint64_t>(n, 2));
    cfg.epsilon = 1.0 / (nn * nn * nn);
    const double inv_p = 1.0 / static_cast<double>(p);
    if (!(cfg.epsilon < inv_p)) cfg.epsilon = inv_p / 2;
    const double lg = std::log2(nn);
    cfg.rejection_cap = static_cast<std::uint64_t>(std::ceil(cfg.t / (inv_p - cfg.epsilon) * lg * lg * lg));
    return cfg;
}

std::uint64_t Lifted::mod(std::uint64_t p) const {
    std::uint64_t r = 0;
    for (unsigned i = t; i-- > 0;) {
        r = add_mod(r, r, p);
        if (bit(i)) r = add_mod(r, 1 % p, p);
    }
    return r;
}

BigInt Lifted::value() const {
    BigInt v = 0;
    for (std::size_t w = words.size(); w-- > 0;) {
        v <<= 64;
        v += words[w];
    }
    return v;
}

}  // namespace facred
