#include "facred/avgov.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "facred/error.hpp"

namespace facred {

OvInstance gen_ov(std::size_t n, unsigned d, double mu, std::uint64_t seed) {
    if (!(mu > 0.0 && mu < 1.0)) throw Error(Errc::invalid_bias, "mu must lie in (0, 1)");
    if (d > BitString::kMaxWidth) throw Error(Errc::width_mismatch, "d exceeds 256");
    Rng rng = substream(seed, "gen_ov");
    OvInstance inst;
    inst.mu = mu;
    for (auto* list : {&inst.a, &inst.b}) {
        for (std::size_t i = 0; i < n; ++i) {
            BitString v(d);
            for (unsigned j = 0; j < d; ++j) v.set_bit(j, bernoulli(rng, mu));
            list->push_back(v);
        }
    }
    return inst;
}

double ov_threshold(std::size_t n, double mu) {
    return 2.0 * std::numbers::log2e * std::log2(static_cast<double>(std::max<std::size_t>(n, 2))) / std::pow(mu, 4);
}

std::uint64_t count_ov_avg(const OvInstance& inst) {
    if (inst.a.empty() || inst.b.empty()) return 0;
    const unsigned d = inst.a[0].width();
    const std::size_t n = std::max(inst.a.size(), inst.b.size());
    if (static_cast<double>(d) > ov_threshold(n, inst.mu)) return 0;

    std::map<BitString, std::uint64_t> ma, mb;
    for (const BitString& v : inst.a) ++ma[v];
    for (const BitString& v : inst.b) ++mb[v];
    std::uint64_t total = 0;
    for (const auto& [u, cu] : ma) {
        for (const auto& [v, cv] : mb) {
            if ((u & v).is_zero()) total += cu * cv;
        }
    }
    return total;
}

std::uint64_t brute_count_ov(const OvInstance& inst) {
    std::uint64_t total = 0;
    for (const BitString& u : inst.a) {
        for (const BitString& v : inst.b) total += (u & v).is_zero();
    }
    return total;
}

}  // namespace facred
