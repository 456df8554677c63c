#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "facred/types.hpp"

namespace facred {

struct FieldElem {
    std::uint64_t value = 0;
    std::uint64_t p = 2;
};

struct PrimeBasis {
    std::vector<std::uint64_t> primes;
    BigInt product;
    unsigned c = 1;
};

bool is_prime(std::uint64_t n);
inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    if (((a | b) >> 32) == 0) return a * b % m;
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}
std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
// Inverse modulo a prime; a must be nonzero mod p.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);
std::uint64_t mod_of(const BigInt& v, std::uint64_t m);

// ceil(log2 n), with ceil_lg(1) == 0.
unsigned ceil_lg(std::uint64_t n);

// Smallest primes >= max(5, ceil(lg n), min_prime) whose product reaches n^(2c).
PrimeBasis select_primes(std::uint64_t n, unsigned c, std::uint64_t min_prime = 5);

// Unique value in [0, prod p_i) with the given residues.
BigInt crt_reconstruct(std::span<const FieldElem> residues);

}  // namespace facred
