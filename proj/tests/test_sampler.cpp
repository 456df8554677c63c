#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "facred/sampler.hpp"

using namespace facred;

namespace {

struct ZeroRng {
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return 0; }
};

SamplerConfig small_config(double mu, unsigned t) {
    SamplerConfig cfg;
    cfg.mu = mu;
    cfg.t = t;
    cfg.C = 1.0 / 256;
    cfg.rejection_cap = 100000;
    return cfg;
}

// Exact per-bit frequency of the t-bit Ber(mu) integer conditioned on y = x mod p.
std::vector<double> conditional_bit_freq(std::uint64_t x, std::uint64_t p, double mu, unsigned t) {
    std::vector<double> on(t, 0.0);
    double total = 0;
    for (std::uint64_t y = x; y < (std::uint64_t{1} << t); y += p) {
        const int pop = __builtin_popcountll(y);
        const double w = std::pow(mu, pop) * std::pow(1 - mu, static_cast<int>(t) - pop);
        total += w;
        for (unsigned r = 0; r < t; ++r) {
            if ((y >> r) & 1U) on[r] += w;
        }
    }
    for (double& v : on) v /= total;
    return on;
}

}  // namespace

TEST_CASE("choose_t formula") {
    const double lg5 = std::log2(5.0);
    CHECK(choose_t(5, 0.5, 256) == static_cast<unsigned>(std::ceil(4 * 4 * (lg5 + 48) * lg5)));
    CHECK_THROWS_AS(choose_t(5, 0.0, 256), Error);
    CHECK_THROWS_AS(choose_t(5, 1.0, 256), Error);
    unsigned prev = 0;
    for (std::uint64_t n = 16; n <= (1ULL << 30); n *= 2) {
        const unsigned t = choose_t(3, 0.5, n);
        CHECK(t >= prev);
        prev = t;
    }
    const double lg3 = std::log2(3.0);
    CHECK(choose_t(3, 0.5, 16) == static_cast<unsigned>(std::ceil(16 * (lg3 + 24) * lg3)));
}

TEST_CASE("make_sampler_config") {
    const auto cfg = make_sampler_config(5, 0.5, 64, 4.0);
    CHECK(cfg.t == choose_t(5, 0.5, 64));
    CHECK(cfg.epsilon == doctest::Approx(1.0 / (64.0 * 64 * 64)));
    const double lg = std::log2(64.0);
    CHECK(cfg.rejection_cap == static_cast<std::uint64_t>(std::ceil(cfg.t / (0.2 - cfg.epsilon) * lg * lg * lg)));
    CHECK(make_sampler_config(5, 0.5, 64, 1.0 / 256, 90).t == 90);
}

TEST_CASE("lift congruence and shape") {
    Rng rng(1);
    const auto cfg = make_sampler_config(5, 0.5, 256);
    for (int i = 0; i < 200; ++i) {
        const Lifted y = lift(FieldElem{3, 5}, cfg, 256, rng);
        CHECK(y.t == cfg.t);
        CHECK(y.mod(5) == 3);
        CHECK(y.value() % 5 == 3);
        CHECK(y.value() < (BigInt(1) << cfg.t));
    }
    std::vector<FieldElem> xs(10, FieldElem{0, 5});
    const auto ys = lift_vector(std::span<const FieldElem>(xs), cfg, 256, rng);
    REQUIRE(ys.size() == 10);
    for (const auto& y : ys) {
        CHECK(y.mod(5) == 0);
        CHECK(y.t == cfg.t);
    }
}

TEST_CASE("lift over wide and biased configurations") {
    Rng rng(2);
    for (double mu : {0.2, 0.5, 0.8}) {
        for (std::uint64_t p : {7ULL, 13ULL, 101ULL}) {
            auto cfg = make_sampler_config(p, mu, 16, 1.0 / 256);
            cfg.t = std::max(cfg.t, 130U);
            for (std::uint64_t x : {std::uint64_t{0}, std::uint64_t{1}, p - 1}) {
                const Lifted y = lift(FieldElem{x, p}, cfg, 16, rng);
                CHECK(y.mod(p) == x);
                CHECK(y.value() % p == x);
            }
        }
    }
}

TEST_CASE("lift errors") {
    auto cfg = small_config(0.5, 12);
    cfg.rejection_cap = 1;
    ZeroRng zero;
    CHECK_THROWS_WITH_AS(lift(FieldElem{3, 5}, cfg, 2, zero), doctest::Contains("no congruent"), Error);
    try {
        lift(FieldElem{3, 5}, cfg, 2, zero);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::sampler_timeout);
    }
    auto biased = small_config(0.0, 12);
    Rng rng(3);
    try {
        lift(FieldElem{3, 5}, biased, 2, rng);
        FAIL("expected invalid-bias");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_bias);
    }
    auto short_t = make_sampler_config(5, 0.5, 256);
    short_t.t -= 1;
    try {
        lift(FieldElem{3, 5}, short_t, 256, rng);
        FAIL("expected invalid-parameters");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_parameters);
    }
}

TEST_CASE("identical seeds reproduce identical lifts") {
    const auto cfg = make_sampler_config(11, 0.5, 64);
    Rng a(99), b(99);
    for (int i = 0; i < 50; ++i) {
        const auto ya = lift(FieldElem{7, 11}, cfg, 64, a);
        const auto yb = lift(FieldElem{7, 11}, cfg, 64, b);
        CHECK(ya.value() == yb.value());
    }
}

TEST_CASE("bit frequencies match the conditional distribution") {
    const unsigned t = 12;
    const int samples = 100000;
    // Bonferroni over t positions at overall significance 1e-3.
    const double z_crit = 4.3;
    for (double mu : {0.5, 0.3}) {
        for (std::uint64_t x : {0ULL, 3ULL}) {
            const auto cfg = small_config(mu, t);
            const auto expect = conditional_bit_freq(x, 5, mu, t);
            Rng rng(substream_seed(7, "bits"));
            std::vector<int> on(t, 0);
            for (int i = 0; i < samples; ++i) {
                const Lifted y = lift(FieldElem{x, 5}, cfg, 2, rng);
                for (unsigned r = 0; r < t; ++r) on[r] += y.bit(r);
            }
            for (unsigned r = 0; r < t; ++r) {
                const double q = expect[r];
                const double z = (on[r] - samples * q) / std::sqrt(samples * q * (1 - q));
                CHECK(std::abs(z) < z_crit);
            }
        }
    }
}

TEST_CASE("mean rejections stay within twice the inverse hit rate") {
    for (std::uint64_t p : {5ULL, 13ULL, 101ULL}) {
        auto cfg = small_config(0.5, 20);
        Rng rng(p);
        std::uint64_t total = 0;
        const int samples = 20000;
        for (int i = 0; i < samples; ++i) {
            std::uint64_t attempts = 0;
            lift(FieldElem{1, p}, cfg, 2, rng, &attempts);
            total += attempts;
        }
        const double eps = 1.0 / 8;  // 1/n^3 at n = 2
        const double bound = 1.0 / (1.0 / p - std::min(eps, 0.5 / p));
        CHECK(static_cast<double>(total) / samples <= 2 * bound);
    }
}
