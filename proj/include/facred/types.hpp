#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace facred {

using BigInt = boost::multiprecision::cpp_int;
using Rng = std::mt19937_64;

// Seed for a named substream, so that adding a consumer never shifts another one.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view name);
inline Rng substream(std::uint64_t seed, std::string_view name) {
    return Rng(substream_seed(seed, name));
}

// Bernoulli(mu) from one 64-bit draw. An all-zero generator yields 1 for any mu > 0.
template <class URBG>
bool bernoulli(URBG& rng, double mu) {
    static_assert(URBG::max() - URBG::min() == ~std::uint64_t{0}, "needs a 64-bit generator");
    const double u = static_cast<double>((rng() - URBG::min()) >> 11) * 0x1.0p-53;
    return u < mu;
}

template <class URBG>
std::uint64_t uniform_below(URBG& rng, std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

std::string to_string(const BigInt& v);
BigInt parse_bigint(std::string_view text);

}  // namespace facred
