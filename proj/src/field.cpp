#include "facred/field.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "facred/error.hpp"

namespace facred {

std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::invalid_parameters: return "invalid-parameters";
    case Errc::crt_moduli_not_coprime: return "crt-moduli-not-coprime";
    case Errc::invalid_bias: return "invalid-bias";
    case Errc::sampler_timeout: return "sampler-timeout";
    case Errc::arity_mismatch: return "arity-mismatch";
    case Errc::slice_budget_exceeded: return "slice-budget-exceeded";
    case Errc::decode_failure: return "decode-failure";
    case Errc::amplify_exhausted: return "amplify-exhausted";
    case Errc::width_mismatch: return "width-mismatch";
    case Errc::shape_mismatch: return "shape-mismatch";
    case Errc::expansion_cap_exceeded: return "expansion-cap-exceeded";
    case Errc::monomial_cap_exceeded: return "monomial-cap-exceeded";
    case Errc::degree_cap_exceeded: return "degree-cap-exceeded";
    case Errc::range_violation: return "range-violation";
    case Errc::memory_cap_exceeded: return "memory-cap-exceeded";
    case Errc::edgesclusion_inconsistency: return "edgesclusion-inconsistency";
    case Errc::unsupported_regex_type: return "unsupported-regex-type";
    case Errc::nfa_not_acyclic: return "nfa-not-acyclic";
    case Errc::parse_error: return "parse-error";
    }
    return "unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

std::uint64_t substream_seed(std::uint64_t seed, std::string_view name) {
    // FNV-1a over the name, then one SplitMix64 finalizer round.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : name) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t z = seed ^ h;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string to_string(const BigInt& v) { return v.str(); }

BigInt parse_bigint(std::string_view text) {
    if (text.empty()) throw Error(Errc::parse_error, "empty integer");
    try {
        return BigInt(std::string(text));
    } catch (const std::exception&) {
        throw Error(Errc::parse_error, "bad integer '" + std::string(text) + "'");
    }
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return a >= b ? a - b : m - (b - a);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw Error(Errc::invalid_parameters, "zero has no inverse");
    return pow_mod(a, p - 2, p);
}

std::uint64_t mod_of(const BigInt& v, std::uint64_t m) {
    BigInt r = v % m;
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These bases are deterministic for every 64-bit n.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

unsigned ceil_lg(std::uint64_t n) {
    unsigned r = 0;
    while (r < 64 && (std::uint64_t{1} << r) < n) ++r;
    return r;
}

PrimeBasis select_primes(std::uint64_t n, unsigned c, std::uint64_t min_prime) {
    if (n < 2 || c < 1) throw Error(Errc::invalid_parameters, "select_primes needs n >= 2 and c >= 1");
    const BigInt target = boost::multiprecision::pow(BigInt(n), 2 * c);
    const std::uint64_t lo = std::max<std::uint64_t>({5, ceil_lg(n), min_prime});

    PrimeBasis basis;
    basis.c = c;
    basis.product = 1;
    std::uint64_t hi = std::max<std::uint64_t>(64, 2 * lo);
    std::uint64_t next = lo;
    while (basis.product < target) {
        for (; next <= hi && basis.product < target; ++next) {
            if (is_prime(next)) {
                basis.primes.push_back(next);
                basis.product *= next;
            }
        }
        hi *= 2;
    }
    return basis;
}

BigInt crt_reconstruct(std::span<const FieldElem> residues) {
    if (residues.empty()) throw Error(Errc::invalid_parameters, "no residues");
    for (std::size_t i = 0; i < residues.size(); ++i) {
        if (residues[i].p < 2) throw Error(Errc::invalid_parameters, "modulus below 2");
        for (std::size_t j = i + 1; j < residues.size(); ++j) {
            if (std::gcd(residues[i].p, residues[j].p) != 1) {
                throw Error(Errc::crt_moduli_not_coprime,
                            std::to_string(residues[i].p) + " and " + std::to_string(residues[j].p));
            }
        }
    }
    // Incremental form: x += M * ((r - x) * M^-1 mod p).
    BigInt x = residues[0].value % residues[0].p;
    BigInt m = residues[0].p;
    for (std::size_t i = 1; i < residues.size(); ++i) {
        const std::uint64_t p = residues[i].p;
        const std::uint64_t xm = mod_of(x, p);
        const std::uint64_t mm = mod_of(m, p);
        // m and p are coprime but p need not be prime here, so use extended gcd.
        __int128 a = mm, b = p;
        __int128 x0 = 1, x1 = 0;
        while (b) {
            const __int128 q = a / b;
            std::tie(a, b) = std::make_pair(b, a - q * b);
            std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
        }
        const __int128 pp = p;
        const auto minv = static_cast<std::uint64_t>(((x0 % pp) + pp) % pp);
        const std::uint64_t k = mul_mod(sub_mod(residues[i].value % p, xm, p), minv, p);
        x += m * k;
        m *= p;
    }
    return x;
}

}  // namespace facred
