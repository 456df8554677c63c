#include <doctest.h>

#include <vector>

#include "facred/error.hpp"
#include "facred/field.hpp"

using namespace facred;

namespace {

bool trial_division_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::parse_error;
}

}  // namespace

TEST_CASE("is_prime agrees with trial division") {
    for (std::uint64_t n = 0; n < 20000; ++n) CHECK(is_prime(n) == trial_division_prime(n));
    CHECK(is_prime(1'000'000'007ULL));
    CHECK(is_prime(18446744073709551557ULL));
    CHECK_FALSE(is_prime(18446744073709551555ULL));
}

TEST_CASE("modular helpers") {
    const std::uint64_t p = 101;
    for (std::uint64_t a = 1; a < p; ++a) {
        CHECK(mul_mod(a, inv_mod(a, p), p) == 1);
        std::uint64_t naive = 1;
        for (int e = 0; e < 7; ++e) naive = naive * a % p;
        CHECK(pow_mod(a, 7, p) == naive);
        CHECK(add_mod(sub_mod(a, 50, p), 50, p) == a);
    }
    const std::uint64_t big = 18446744073709551557ULL;
    CHECK(mul_mod(big - 1, big - 1, big) == 1);
    CHECK(mod_of(BigInt(1) << 100, 1'000'000'007ULL) == pow_mod(2, 100, 1'000'000'007ULL));
    CHECK(ceil_lg(1) == 0);
    CHECK(ceil_lg(2) == 1);
    CHECK(ceil_lg(5) == 3);
    CHECK(ceil_lg(1024) == 10);
}

TEST_CASE("select_primes examples") {
    auto b = select_primes(4, 1);
    BigInt prod = 1;
    for (auto p : b.primes) prod *= p;
    CHECK(prod >= 16);
    CHECK(prod == b.product);

    b = select_primes(16, 1);
    CHECK(b.product >= 256);

    CHECK(code_of([] { select_primes(16, 0); }) == Errc::invalid_parameters);
    CHECK(code_of([] { select_primes(1, 1); }) == Errc::invalid_parameters);
}

TEST_CASE("select_primes product and primality") {
    for (std::uint64_t n : {2ULL, 3ULL, 16ULL, 100ULL, 1000ULL, 1ULL << 20, 1ULL << 40}) {
        for (unsigned c = 1; c <= 4; ++c) {
            const auto b = select_primes(n, c);
            BigInt target = 1;
            for (unsigned i = 0; i < 2 * c; ++i) target *= n;
            BigInt prod = 1;
            for (std::size_t i = 0; i < b.primes.size(); ++i) {
                CHECK(trial_division_prime(b.primes[i]));
                CHECK(b.primes[i] >= 5);
                CHECK(b.primes[i] >= ceil_lg(n));
                if (i) CHECK(b.primes[i] > b.primes[i - 1]);
                prod *= b.primes[i];
            }
            CHECK(prod >= target);
            CHECK(prod == b.product);
        }
    }
    const auto floored = select_primes(16, 1, 37);
    CHECK(floored.primes.front() >= 37);
}

TEST_CASE("crt examples") {
    std::vector<FieldElem> r{{2, 3}, {3, 5}};
    CHECK(crt_reconstruct(r) == 8);
    r = {{0, 7}, {0, 11}, {0, 13}};
    CHECK(crt_reconstruct(r) == 0);
    r = {{1, 2}, {1, 3}, {1, 5}};
    CHECK(crt_reconstruct(r) == 1);
    r = {{1, 5}, {2, 5}};
    CHECK(code_of([&] { crt_reconstruct(r); }) == Errc::crt_moduli_not_coprime);
    r = {{1, 6}, {2, 9}};
    CHECK(code_of([&] { crt_reconstruct(r); }) == Errc::crt_moduli_not_coprime);
}

TEST_CASE("crt round trip is exhaustive below the product") {
    const std::vector<std::vector<std::uint64_t>> bases{{5, 7}, {3, 5, 7}, {7, 11, 13}, {5, 7, 11, 13}, {2, 3, 5, 7, 11}};
    for (const auto& ps : bases) {
        std::uint64_t prod = 1;
        for (auto p : ps) prod *= p;
        for (std::uint64_t x = 0; x < prod; ++x) {
            std::vector<FieldElem> r;
            for (auto p : ps) r.push_back({x % p, p});
            REQUIRE(crt_reconstruct(r) == x);
        }
    }
}

TEST_CASE("crt with large primes") {
    const std::vector<std::uint64_t> ps{1'000'000'007ULL, 998'244'353ULL, 18446744073709551557ULL};
    BigInt x("123456789012345678901234567890123456");
    std::vector<FieldElem> r;
    for (auto p : ps) r.push_back({mod_of(x, p), p});
    CHECK(crt_reconstruct(r) == x);
}
