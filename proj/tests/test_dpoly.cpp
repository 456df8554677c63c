#include <doctest.h>

#include <vector>

#include "facred/dpoly.hpp"

using namespace facred;

namespace {

Lifted lifted(std::uint64_t v, unsigned t) {
    Lifted l;
    l.t = t;
    l.words.assign(1, v);
    return l;
}

// x * y over F_p with x in partition 0 and y in partition 1.
PartitePolynomial xy(std::uint64_t p) {
    PartitePolynomial f(2, {0, 1}, 2, p);
    const std::uint32_t m[] = {0, 1};
    f.add_monomial(m);
    return f;
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

TEST_CASE("evaluate examples") {
    const auto f = xy(7);
    const std::uint64_t x[] = {3, 4};
    CHECK(evaluate(f, x) == 5);
    const PartitePolynomial empty(2, {0, 1}, 2, 7);
    CHECK(evaluate(empty, x) == 0);
    const std::uint64_t short_x[] = {3};
    CHECK(code_of([&] { evaluate(f, short_x); }) == Errc::arity_mismatch);
    const std::uint8_t bits[] = {1, 1};
    CHECK(evaluate_bits(f, bits) == 1);
}

TEST_CASE("verify_partite") {
    PartitePolynomial ok(4, {0, 1, 0, 1}, 2, 11);
    const std::uint32_t m1[] = {0, 1}, m2[] = {2, 3};
    ok.add_monomial(m1);
    ok.add_monomial(m2);
    CHECK_FALSE(verify_partite(ok).has_value());

    PartitePolynomial same(2, {0, 0}, 2, 11);
    same.add_monomial(m1);
    const auto v = verify_partite(same);
    REQUIRE(v.has_value());
    CHECK(v->monomial_index == 0);

    PartitePolynomial low(3, {0, 1, 2}, 3, 11);
    const std::uint32_t full[] = {0, 1, 2}, partial[] = {0, 1};
    low.add_monomial(full);
    low.add_monomial(partial);
    low.canonicalize();
    CHECK(verify_partite(low).has_value());

    Rng rng(5);
    for (unsigned d = 1; d <= 5; ++d) CHECK_FALSE(verify_partite(random_partite_poly(d, 3, 101, 20, rng)).has_value());
}

TEST_CASE("canonicalize merges repeats and drops zeros") {
    PartitePolynomial f(2, {0, 1}, 2, 7);
    const std::uint32_t a[] = {0, 1}, b[] = {1, 0};
    f.add_monomial(a, 3);
    f.add_monomial(b, 4);
    f.canonicalize();
    CHECK(f.monomials().empty());
    f.add_monomial(b, 2);
    f.add_monomial(a, 2);
    f.canonicalize();
    REQUIRE(f.monomials().size() == 1);
    CHECK(f.monomials()[0].multiplicity == 4);
    CHECK(f.monomials()[0].vars == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("bit slice examples") {
    PartitePolynomial x(1, {0}, 1, 5);
    const std::uint32_t v0[] = {0};
    x.add_monomial(v0);
    std::vector<Lifted> in{lifted(3, 2)};
    auto qs = bit_slice_queries(in, x);
    REQUIRE(qs.size() == 2);
    CHECK(qs[0].slice_index == std::vector<unsigned>{0});
    CHECK(qs[0].assignment == std::vector<std::uint8_t>{1});
    CHECK(qs[0].weight == 1);
    CHECK(qs[1].slice_index == std::vector<unsigned>{1});
    CHECK(qs[1].assignment == std::vector<std::uint8_t>{1});
    CHECK(qs[1].weight == 2);

    const auto f = xy(101);
    in = {lifted(3, 2), lifted(2, 2)};
    qs = bit_slice_queries(in, f);
    std::vector<std::uint64_t> vals;
    for (const auto& q : qs) vals.push_back(evaluate_bits(f, q.assignment));
    CHECK(recombine(vals, qs, 101) == 6);

    PartitePolynomial four(4, {0, 0, 1, 1}, 2, 101);
    std::vector<Lifted> in4(4, lifted(5, 3));
    CHECK(bit_slice_queries(in4, four).size() == 9);

    CHECK(code_of([&] { bit_slice_queries(in4, four, 8); }) == Errc::slice_budget_exceeded);
}

TEST_CASE("recombine examples") {
    const auto f = xy(101);
    std::vector<Lifted> in{lifted(5, 3), lifted(6, 3)};
    const auto qs = bit_slice_queries(in, f);
    std::vector<std::uint64_t> zeros(qs.size(), 0);
    CHECK(recombine(zeros, qs, 101) == 0);
    const std::vector<SliceQuery> one{SliceQuery{{0, 0}, {0, 0}, 1}};
    const std::uint64_t v[] = {42};
    CHECK(recombine(v, one, 101) == 42);
    CHECK(code_of([&] { recombine(v, qs, 101); }) == Errc::arity_mismatch);
}

TEST_CASE("bit slice identity on small shapes") {
    Rng rng(11);
    for (unsigned d = 1; d <= 3; ++d) {
        for (unsigned t = 1; t <= 3; ++t) {
            for (unsigned per = 1; per * d <= 4; ++per) {
                const unsigned n_vars = per * d;
                for (std::uint64_t p : {5ULL, 13ULL}) {
                    const auto poly = random_partite_poly(d, per, p, 6, rng);
                    const std::uint64_t inputs = std::uint64_t{1} << (t * n_vars);
                    for (std::uint64_t code = 0; code < inputs; ++code) {
                        std::vector<Lifted> in;
                        std::vector<std::uint64_t> direct;
                        for (unsigned v = 0; v < n_vars; ++v) {
                            const std::uint64_t val = (code >> (t * v)) & ((1U << t) - 1);
                            in.push_back(lifted(val, t));
                            direct.push_back(val % p);
                        }
                        SliceStream stream(in, poly);
                        SliceQuery q;
                        std::uint64_t acc = 0;
                        while (stream.next(q)) acc = add_mod(acc, mul_mod(evaluate_bits(poly, q.assignment), q.weight, p), p);
                        REQUIRE(acc == evaluate(poly, direct));
                    }
                }
            }
        }
    }
}

TEST_CASE("slice stream matches materialized queries and odometer order") {
    Rng rng(12);
    const auto poly = random_partite_poly(3, 2, 13, 8, rng);
    std::vector<Lifted> in;
    for (int v = 0; v < 6; ++v) in.push_back(lifted(uniform_below(rng, 16), 4));
    const auto qs = bit_slice_queries(in, poly);
    REQUIRE(qs.size() == 64);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        CHECK(qs[i].slice_index == std::vector<unsigned>{static_cast<unsigned>(i / 16), static_cast<unsigned>(i / 4 % 4),
                                                         static_cast<unsigned>(i % 4)});
        unsigned sum = 0;
        for (unsigned r : qs[i].slice_index) sum += r;
        CHECK(qs[i].weight == pow_mod(2, sum, 13));
        for (unsigned v = 0; v < 6; ++v) CHECK(qs[i].assignment[v] == in[v].bit(qs[i].slice_index[v / 2]));
    }
}
