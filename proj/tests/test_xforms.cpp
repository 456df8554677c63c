#include <doctest.h>

#include <vector>

#include "facred/instance_io.hpp"
#include "facred/xforms.hpp"
#include "oracles.hpp"

using namespace facred;

namespace {

FactoredVector singleton(const BitString& s) {
    FactoredVector v;
    v.b = s.width();
    v.groups.assign(1, StringSet(s.width()));
    v.groups[0].insert(s);
    return v;
}

std::vector<BitString> strings(unsigned b) {
    std::vector<BitString> out;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << b); ++s) out.push_back(BitString::from_uint(s, b));
    return out;
}

// Calls fn on every k-tuple of b-bit strings.
void each_tuple(unsigned k, unsigned b, const std::function<void(const std::vector<BitString>&)>& fn) {
    const auto all = strings(b);
    oracle::odometer(std::vector<std::size_t>(k, all.size()), [&](const std::vector<std::size_t>& idx) {
        std::vector<BitString> t;
        for (auto i : idx) t.push_back(all[i]);
        fn(t);
    });
}

BigInt tuple_count(const std::vector<FactoredVector>& vs, const Predicate& pred) {
    std::vector<const FactoredVector*> ptrs;
    for (const auto& v : vs) ptrs.push_back(&v);
    return circledast(ptrs, pred);
}

Predicate random_table(unsigned k, unsigned b, Rng& rng) {
    Predicate p;
    p.kind = PredKind::TABLE;
    p.arity = k;
    each_tuple(k, b, [&](const std::vector<BitString>& t) {
        if (bernoulli(rng, 0.3)) p.table.insert(t);
    });
    return p;
}

std::vector<std::vector<BitString>> random_kov(unsigned k, std::size_t n, unsigned d, Rng& rng) {
    std::vector<std::vector<BitString>> lists(k);
    for (auto& l : lists) {
        for (std::size_t i = 0; i < n; ++i) {
            BitString s(d);
            for (unsigned j = 0; j < d; ++j) s.set_bit(j, bernoulli(rng, 0.35));
            l.push_back(s);
        }
    }
    return lists;
}

}  // namespace

TEST_CASE("embed_kov") {
    const std::vector<std::vector<BitString>> example{{BitString::from_text("0110")}, {BitString::from_text("1001")}};
    const auto inst = embed_kov(example);
    CHECK(inst.g == 2);
    CHECK(inst.b == 2);
    CHECK(count_fkf(inst) == 1);
    CHECK(count_kov(example) == 1);
    const std::vector<std::vector<BitString>> empty{{}, {}};
    CHECK(count_fkf(embed_kov(empty)) == 0);

    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const unsigned k = 2 + trial % 2;
        const unsigned d = trial % 4 < 2 ? 4 : 9;
        const auto lists = random_kov(k, 1 + uniform_below(rng, k == 2 ? 6 : 4), d, rng);
        const auto emb = embed_kov(lists);
        CHECK(emb.g * emb.b >= d);
        REQUIRE(count_fkf(emb) == oracle::kov_count(lists));
        CHECK(count_kov(lists) == oracle::kov_count(lists));
    }
    // Dimensions that are not perfect squares.
    for (unsigned d : {3U, 5U, 7U}) {
        const auto lists = random_kov(2, 5, d, rng);
        CHECK(count_fkf(embed_kov(lists)) == oracle::kov_count(lists));
    }
}

TEST_CASE("embed_ksum") {
    const std::vector<std::vector<std::int64_t>> example{{1}, {2}, {-3}};
    const auto family = embed_ksum(example, 3);
    BigInt total = 0;
    int witnesses = 0;
    for (const auto& inst : family) {
        const auto c = count_fkf(inst);
        total += c;
        witnesses += c != 0;
    }
    CHECK(total == 1);
    CHECK(witnesses == 1);

    const std::vector<std::vector<std::int64_t>> none{{1, 2}, {3, 3}, {4, -1}};
    for (const auto& inst : embed_ksum(none, 4)) CHECK(count_fkf(inst) == 0);
    CHECK_THROWS_AS(embed_ksum(none, 3), Error);

    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const unsigned k = 2 + trial % 2;
        const std::int64_t bound = 2 + uniform_below(rng, 14);
        std::vector<std::vector<std::int64_t>> lists(k);
        const std::size_t n = 1 + uniform_below(rng, 4);
        for (auto& l : lists) {
            for (std::size_t i = 0; i < n; ++i) {
                l.push_back(static_cast<std::int64_t>(uniform_below(rng, 2 * bound + 1)) - bound);
            }
        }
        BigInt sum = 0;
        for (const auto& inst : embed_ksum(lists, bound)) sum += count_fkf(inst);
        REQUIRE(sum == oracle::ksum_count(lists));
        CHECK(count_ksum(lists) == oracle::ksum_count(lists));
    }
}

TEST_CASE("gamma_f_to_xor keeps exactly the accepted tuples") {
    Rng rng(3);
    for (unsigned k : {2U, 3U}) {
        const unsigned b = 2;
        const Predicate preds[] = {make_predicate(PredKind::OV, k), make_predicate(PredKind::SUM_ZERO, k),
                                   make_predicate(PredKind::SUM_TARGET, k), random_table(k, b, rng)};
        const auto pxor = make_predicate(PredKind::XOR, k);
        for (const auto& pred : preds) {
            each_tuple(k, b, [&](const std::vector<BitString>& t) {
                std::vector<FactoredVector> out;
                for (unsigned i = 0; i < k; ++i) {
                    out.push_back(gamma_f_to_xor(singleton(t[i]), i, pred, k));
                    REQUIRE(out.back().groups[0].width() == k * k * k * b);
                }
                REQUIRE(tuple_count(out, pxor) == (pred.accepts(t) ? 1 : 0));
            });
        }
    }
    // "11" never opens an accepted tuple in slot 0, so its group empties.
    Predicate table;
    table.kind = PredKind::TABLE;
    table.arity = 2;
    table.table.insert({BitString::from_text("00"), BitString::from_text("01")});
    const auto g = gamma_f_to_xor(singleton(BitString::from_text("11")), 0, table, 2);
    CHECK(g.groups[0].empty());
}

TEST_CASE("xor_to_ov keeps exactly the zero-xor tuples") {
    for (unsigned k : {2U, 3U}) {
        const unsigned b = 2;
        const auto pxor = make_predicate(PredKind::XOR, k), pov = make_predicate(PredKind::OV, k);
        each_tuple(k, b, [&](const std::vector<BitString>& t) {
            std::vector<FactoredVector> out;
            for (unsigned i = 0; i < k; ++i) {
                out.push_back(xor_to_ov(singleton(t[i]), i, k));
                REQUIRE(out.back().groups[0].width() == 2 * k * k * k * b);
            }
            REQUIRE(tuple_count(out, pov) == (pxor.accepts(t) ? 1 : 0));
        });
    }
    FactoredVector empty;
    empty.b = 2;
    empty.groups.assign(2, StringSet(2));
    CHECK(xor_to_ov(empty, 0, 2).groups[1].empty());
}

TEST_CASE("gamma_xor_to_sum gives one witness per zero-xor tuple") {
    for (unsigned k : {2U, 3U, 4U}) {
        const unsigned b = k == 4 ? 1 : 2;
        const unsigned L = ceil_lg(k) + 1;
        const auto pxor = make_predicate(PredKind::XOR, k), psum = make_predicate(PredKind::SUM_TARGET, k);
        each_tuple(k, b, [&](const std::vector<BitString>& t) {
            std::vector<FactoredVector> out;
            for (unsigned i = 0; i < k; ++i) {
                out.push_back(gamma_xor_to_sum(singleton(t[i]), i, k));
                REQUIRE(out.back().groups[0].width() == L * b);
            }
            REQUIRE(tuple_count(out, psum) == (pxor.accepts(t) ? 1 : 0));
        });
    }
    FactoredVector empty;
    empty.b = 2;
    empty.groups.assign(1, StringSet(2));
    CHECK(gamma_xor_to_sum(empty, 2, 3).groups[0].empty());
}

TEST_CASE("instance transforms preserve counts") {
    const PredKind kinds[] = {PredKind::OV, PredKind::XOR, PredKind::SUM_ZERO, PredKind::SUM_TARGET};
    for (int trial = 0; trial < 40; ++trial) {
        const unsigned k = 2 + trial % 2;
        const auto pred = make_predicate(kinds[trial % 4], k);
        const auto src = gen_fkf(k == 2 ? 3 : 2, k, 1 + trial % 2, 2, 0.5, 500 + trial, pred);
        const BigInt truth = oracle::fkf_count(src);
        const auto x = f_to_xor(src);
        CHECK(count_fkf(x) == truth);
        // Strings of x at k = 3 are 54 bits, too wide for a second cubic blowup.
        if (k == 2) CHECK(count_fkf(xor_to_ov(x)) == truth);
        CHECK(count_fkf(f_to_sum(src)) == truth);
        if (pred.kind == PredKind::XOR) {
            CHECK(count_fkf(xor_to_sum(src)) == truth);
            CHECK(count_fkf(xor_to_ov(src)) == truth);
        }
    }
}

TEST_CASE("sum_to_zkc") {
    FkfInstance inst;
    inst.k = 3;
    inst.g = 1;
    inst.b = 2;
    inst.pred = make_predicate(PredKind::SUM_ZERO, 3);
    inst.lists = {{singleton(BitString::from_text("01"))}, {singleton(BitString::from_text("10"))},
                  {singleton(BitString::from_text("01"))}};
    CHECK(count_ffkc(sum_to_zkc(inst)) == 1);
    auto empty = inst;
    for (auto& l : empty.lists) l.clear();
    CHECK(count_ffkc(sum_to_zkc(empty)) == 0);

    for (int trial = 0; trial < 60; ++trial) {
        const unsigned k = 3 + trial % 2;
        const auto pred = make_predicate(trial % 3 ? PredKind::SUM_ZERO : PredKind::SUM_TARGET, k);
        const auto src = gen_fkf(k == 3 ? 3 : 2, k, 1 + trial % 2, 2, 0.5, 700 + trial, pred);
        const auto z = sum_to_zkc(src);
        const BigInt truth = oracle::fkf_count(src);
        REQUIRE(count_ffkc(z) == truth);
        if (trial < 10) CHECK(oracle::ffkc_count(z) == truth);
    }
    CHECK_THROWS_AS(sum_to_zkc(gen_fkf(2, 3, 1, 2, 0.5, 1, make_predicate(PredKind::OV, 3))), Error);
}

TEST_CASE("ffkc_to_fzkc") {
    const PredKind kinds[] = {PredKind::OV, PredKind::XOR, PredKind::SUM_ZERO, PredKind::SUM_TARGET};
    for (int trial = 0; trial < 50; ++trial) {
        const auto pred = make_predicate(kinds[trial % 4], 3);
        auto src = gen_ffkc(2 + trial % 2, 3, 1, 2, 0.5, 900 + trial, pred);
        if (trial % 5 == 0) src.edges[trial % 3][0].reset();
        const auto out = ffkc_to_fzkc(src);
        CHECK(out.pred.kind == PredKind::SUM_TARGET);
        REQUIRE(count_ffkc(out) == oracle::ffkc_count(src));
    }
    auto none = gen_ffkc(2, 3, 1, 2, 0.5, 1, make_predicate(PredKind::OV, 3));
    for (auto& cls : none.edges) {
        for (auto& e : cls) e.reset();
    }
    CHECK(count_ffkc(ffkc_to_fzkc(none)) == 0);
}

TEST_CASE("fzkc3_to_pmt and count_pmt") {
    FfkcInstance inst;
    inst.k = 3;
    inst.n = 1;
    inst.g = 1;
    inst.b = 2;
    inst.pred = make_predicate(PredKind::SUM_ZERO, 3);
    inst.edges.assign(3, {singleton(BitString::from_text("00"))});
    CHECK(count_pmt(fzkc3_to_pmt(inst)) == 1);
    for (auto& cls : inst.edges) cls[0].reset();
    CHECK(count_pmt(fzkc3_to_pmt(inst)) == 0);

    for (int trial = 0; trial < 50; ++trial) {
        const auto pred = make_predicate(trial % 2 ? PredKind::SUM_ZERO : PredKind::SUM_TARGET, 3);
        const auto src = gen_ffkc(3, 3, 2, 2, 0.5, 1100 + trial, pred);
        const auto pmt = fzkc3_to_pmt(src);
        REQUIRE(count_pmt(pmt) == oracle::ffkc_count(src));
        const auto again = pmt_from_json(Json::parse(to_json(pmt).dump()));
        CHECK(count_pmt(again) == count_pmt(pmt));
    }
}

TEST_CASE("OV to XOR to SUM to zero-clique chain") {
    for (int trial = 0; trial < 10; ++trial) {
        const auto src = gen_fkf(2, 3, 1, 1, 0.5, 1300 + trial, make_predicate(PredKind::OV, 3));
        const BigInt truth = oracle::fkf_count(src);
        const auto x = f_to_xor(src);
        CHECK(count_fkf(x) == truth);
        // The XOR to SUM step runs fused with the first one; the unfused last slot grows as 2^(zero bits).
        CHECK(count_ffkc(sum_to_zkc(f_to_sum(src))) == truth);
    }
    for (int trial = 0; trial < 10; ++trial) {
        const auto src = gen_fkf(2, 3, 1, 1, 0.5, 1400 + trial, make_predicate(PredKind::XOR, 3));
        CHECK(count_ffkc(sum_to_zkc(xor_to_sum(src))) == oracle::fkf_count(src));
    }
}
