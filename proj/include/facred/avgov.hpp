#pragma once

#include <cstdint>
#include <vector>

#include "facred/bitstring.hpp"
#include "facred/types.hpp"

namespace facred {

struct OvInstance {
    std::vector<BitString> a, b;
    double mu = 0.5;  // generation bias, metadata only
};

OvInstance gen_ov(std::size_t n, unsigned d, double mu, std::uint64_t seed);

// Dimension above which count_ov_avg answers 0 without looking: 2 lg(e) lg(n) / mu^4.
double ov_threshold(std::size_t n, double mu);

std::uint64_t count_ov_avg(const OvInstance& inst);
std::uint64_t brute_count_ov(const OvInstance& inst);

}  // namespace facred
