#include <doctest.h>

#include <cmath>
#include <vector>

#include "facred/corrector.hpp"
#include "facred/dpoly.hpp"

using namespace facred;

namespace {

std::uint64_t poly_at(const std::vector<std::uint64_t>& c, std::uint64_t x, std::uint64_t p) {
    std::uint64_t acc = 0, pw = 1;
    for (auto v : c) {
        acc = add_mod(acc, mul_mod(v, pw, p), p);
        pw = mul_mod(pw, x, p);
    }
    return acc;
}

FieldOracle exact_oracle(const PartitePolynomial& f) {
    return [&f](std::span<const std::uint64_t> x) { return evaluate(f, x); };
}

}  // namespace

TEST_CASE("berlekamp_welch examples") {
    const std::uint64_t p = 7;
    const std::vector<std::uint64_t> q{1, 0, 1};
    std::vector<std::uint64_t> xs{1, 2, 3, 4, 5}, ys;
    for (auto x : xs) ys.push_back(poly_at(q, x, p));
    auto got = berlekamp_welch(xs, ys, 2, 1, p);
    REQUIRE(got.has_value());
    CHECK(*got == q);

    auto one = ys;
    one[1] = (one[1] + 1) % p;
    got = berlekamp_welch(xs, one, 2, 1, p);
    REQUIRE(got.has_value());
    CHECK(*got == q);

    auto two = one;
    two[3] = (two[3] + 3) % p;
    CHECK_FALSE(berlekamp_welch(xs, two, 2, 1, p).has_value());
}

TEST_CASE("berlekamp_welch recovers random polynomials and is sound") {
    Rng rng(4);
    const std::uint64_t p = 101;
    for (int trial = 0; trial < 300; ++trial) {
        const unsigned D = 1 + uniform_below(rng, 6);
        const unsigned e = uniform_below(rng, 5);
        const unsigned n = D + 2 * e + 1 + uniform_below(rng, 4);
        std::vector<std::uint64_t> coeffs(D + 1), xs, ys;
        for (auto& c : coeffs) c = uniform_below(rng, p);
        for (unsigned i = 1; i <= n; ++i) {
            xs.push_back(i);
            ys.push_back(poly_at(coeffs, i, p));
        }
        const unsigned bad = uniform_below(rng, 2 * e + 3);
        for (unsigned i = 0; i < bad && i < n; ++i) ys[i] = add_mod(ys[i], 1 + uniform_below(rng, p - 1), p);
        const auto got = berlekamp_welch(xs, ys, D, e, p);
        if (bad <= e) {
            REQUIRE(got.has_value());
            CHECK(*got == coeffs);
        }
        if (got) {
            unsigned agree = 0;
            for (unsigned i = 0; i < n; ++i) agree += poly_at(*got, xs[i], p) == ys[i];
            CHECK(agree + e >= n);
        }
    }
}

TEST_CASE("correction parameters") {
    CorrectionParams ok{3, 101, 0.25, 0};
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.curve_points() == 37);
    CHECK(ok.below_asymptotic_regime());
    CHECK_FALSE(CorrectionParams{10, 131, 0.25, 0}.below_asymptotic_regime());
    CHECK_THROWS_AS((CorrectionParams{3, 31, 0.25, 0}.validate()), Error);
    CHECK_THROWS_AS((CorrectionParams{3, 101, 0.4, 0}.validate()), Error);
    CHECK_THROWS_AS((CorrectionParams{3, 101, 0.25, 14}.validate()), Error);
    CHECK_NOTHROW((CorrectionParams{3, 101, 0.25, 15}.validate()));
    CHECK_THROWS_AS((CorrectionParams{1, 13, 0.25, 13}.validate()), Error);
    CHECK_THROWS_AS((CorrectionParams{3, 100, 0.25, 0}.validate()), Error);
}

TEST_CASE("correct with an exact oracle") {
    Rng rng(8);
    const auto f = random_partite_poly(3, 2, 101, 10, rng);
    const CorrectionParams params{3, 101, 0.25, 0};
    const auto oracle = exact_oracle(f);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::uint64_t> x(f.n_vars());
        for (auto& v : x) v = uniform_below(rng, 101);
        CHECK(correct(x, oracle, params, rng) == evaluate(f, x));
    }
    // Oracle for f + 1.
    const FieldOracle shifted = [&](std::span<const std::uint64_t> x) { return add_mod(evaluate(f, x), 1, 101); };
    std::vector<std::uint64_t> x(f.n_vars(), 7);
    CHECK(correct(x, shifted, params, rng) == add_mod(evaluate(f, x), 1, 101));
}

TEST_CASE("correct tolerates planted corruption") {
    Rng rng(9);
    const auto f = random_partite_poly(3, 2, 101, 10, rng);
    const CorrectionParams params{3, 101, 0.25, 0};
    const auto noisy = planted_oracle(exact_oracle(f), 101, 0.1, 77);
    int single = 0, amplified = 0;
    const int trials = 300;
    for (int i = 0; i < trials; ++i) {
        std::vector<std::uint64_t> x(f.n_vars());
        for (auto& v : x) v = uniform_below(rng, 101);
        const auto truth = evaluate(f, x);
        try {
            single += correct(x, noisy, params, rng) == truth;
        } catch (const Error&) {
        }
        amplified += amplify([&] { return correct(x, noisy, params, rng); }, 25) == truth;
    }
    CHECK(single >= 0.6 * trials);
    CHECK(amplified >= 0.99 * trials);
}

TEST_CASE("planted oracle corrupts a fixed fraction") {
    const FieldOracle zero = [](std::span<const std::uint64_t>) { return std::uint64_t{0}; };
    const auto a = planted_oracle(zero, 101, 0.1, 5);
    const auto b = planted_oracle(zero, 101, 0.1, 5);
    int bad = 0;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const std::uint64_t x[] = {i % 101, i / 101};
        const auto v = a(x);
        CHECK(v == b(x));
        CHECK(v < 101);
        bad += v != 0;
    }
    CHECK(std::abs(bad / 20000.0 - 0.1) < 0.01);
}

TEST_CASE("curve points are uniform for each fixed parameter") {
    // d = 1, p = 13, one variable: the point queried at s = 1 and s = 2 must each be uniform.
    const std::uint64_t p = 13;
    const CorrectionParams params{1, p, 0.25, 7};
    for (unsigned which : {0U, 1U}) {
        std::vector<int> hist(p, 0);
        unsigned call = 0;
        const FieldOracle record = [&](std::span<const std::uint64_t> x) {
            if (call++ % 7 == which) ++hist[x[0]];
            return (3 * x[0] + 2) % p;
        };
        Rng rng(10 + which);
        const int draws = 13000;
        for (int i = 0; i < draws; ++i) {
            const std::uint64_t x[] = {4};
            CHECK(correct(x, record, params, rng) == 1);
        }
        double chi2 = 0;
        for (int h : hist) chi2 += (h - draws / 13.0) * (h - draws / 13.0) / (draws / 13.0);
        // 12 degrees of freedom, significance 1e-3.
        CHECK(chi2 < 32.9);
    }
}

TEST_CASE("amplify") {
    CHECK(amplify([] { return std::uint64_t{17}; }, 25) == 17);
    CHECK(amplify([] { return std::uint64_t{17}; }, 1) == 17);
    int n = 0;
    CHECK(amplify([&] { return std::uint64_t(n++); }, 1) == 0);
    // Ties go to the smallest value.
    n = 0;
    CHECK(amplify([&] { return std::uint64_t(5 - (n++ % 2)); }, 4) == 4);
    AmplifyStats stats;
    CHECK_THROWS_AS(amplify([]() -> std::uint64_t { throw Error(Errc::decode_failure, "x"); }, 5, &stats), Error);
    try {
        amplify([]() -> std::uint64_t { throw Error(Errc::decode_failure, "x"); }, 5);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::amplify_exhausted);
    }
    n = 0;
    CHECK(amplify(
              [&]() -> std::uint64_t {
                  if (n++ % 2) throw Error(Errc::decode_failure, "x");
                  return 3;
              },
              9, &stats) == 3);
    CHECK(stats.failures > 0);

    Rng rng(12);
    int wins = 0;
    for (int i = 0; i < 1000; ++i) {
        wins += amplify([&] { return std::uint64_t(bernoulli(rng, 0.66) ? 1 : 2 + uniform_below(rng, 5)); }, 25) == 1;
    }
    CHECK(wins >= 950);
}

TEST_CASE("default_reps") {
    CHECK(default_reps(2) == 64);
    CHECK(default_reps(16) == 64);
    CHECK(default_reps(32) == 125);
    CHECK(default_reps(64) == 201);
    CHECK(default_reps(1ULL << 40) == 201);
}
