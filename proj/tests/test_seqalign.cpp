#include <doctest.h>

#include <functional>
#include <string>
#include <vector>

#include "facred/instance_io.hpp"
#include "facred/seqalign.hpp"
#include "oracles.hpp"
#include "random_regex.hpp"

using namespace facred;

namespace {

constexpr std::uint64_t kMod = 1000000007ULL;

using testgen::random_t0;
using testgen::random_text;

void all_strings(const std::string& alphabet, std::size_t max_len, const std::function<void(const std::string&)>& fn) {
    std::vector<std::string> layer{""};
    for (std::size_t len = 0; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const auto& s : layer) {
            fn(s);
            for (char c : alphabet) next.push_back(s + c);
        }
        layer = std::move(next);
    }
}

}  // namespace

TEST_CASE("parsing") {
    const auto e = parse_regex("(a|b)*c");
    CHECK(e.kind == Regex::Kind::Concat);
    CHECK(to_string(parse_regex(to_string(e))) == to_string(e));
    CHECK(to_string(parse_regex("a.b")) == to_string(parse_regex("ab")));
    CHECK(to_string(parse_regex("a\xC2\xB7" "b")) == to_string(parse_regex("ab")));
    CHECK(regex_depth(parse_regex("a")) == 0);
    CHECK(regex_depth(parse_regex("a|b")) == 1);
    for (const char* bad : {"", "(", "a|", "*a", "a)", "a+b"}) {
        try {
            parse_regex(bad);
            FAIL("expected parse_error for " << bad);
        } catch (const Error& err) {
            CHECK(err.code() == Errc::parse_error);
        }
    }
}

TEST_CASE("restricted pattern type") {
    check_t0(parse_regex("(a|b)*c"));
    check_t0(parse_regex("a*"));
    for (const char* bad : {"(ab)*", "((a|b)*)*", "(a|bc)*", "((((((a|b)c)|d)e)|f)g)|h"}) {
        try {
            check_t0(parse_regex(bad));
            FAIL("expected unsupported_regex_type for " << bad);
        } catch (const Error& err) {
            CHECK(err.code() == Errc::unsupported_regex_type);
        }
    }
}

TEST_CASE("match counting examples") {
    CHECK(count_matches(parse_regex("a|b"), "ab", kMod) == 2);
    CHECK(count_matches(parse_regex("a"), "", kMod) == 0);
    CHECK(count_matches(parse_regex("a"), "aaa", kMod) == 3);
    CHECK(count_matches(parse_regex("a|a"), "a", kMod) == 2);
    CHECK(count_matches(parse_regex("ab"), "abab", kMod) == 2);
    CHECK(count_matches(parse_regex("a|b"), "ab", 2) == 0);
    CHECK_THROWS_AS(count_matches(parse_regex("a"), "a", 0), Error);
}

TEST_CASE("automaton accepts the pattern language") {
    Rng rng(11);
    const std::string alphabet = "abc";
    for (int trial = 0; trial < 40; ++trial) {
        const auto e = random_t0(rng, 3, alphabet);
        const auto m = regex_to_nfa(e);
        const auto order = nfa_topological_order(m);
        CHECK(order.size() == m.states);
        all_strings(alphabet, 5, [&](const std::string& s) {
            const BigInt want = oracle::regex_ends(e, s, 0)[s.size()];
            REQUIRE_MESSAGE(nfa_paths(m, s) == want, to_string(e) << " on '" << s << "'");
            REQUIRE(count_derivations(e, s) == want);
            CHECK((want > 0) == oracle::regex_accepts(e, s));
        });
    }
}

TEST_CASE("match counts agree with the derivation oracle") {
    Rng rng(12);
    const std::string alphabet = "ab01";
    for (int trial = 0; trial < 150; ++trial) {
        const auto e = random_t0(rng, 1 + trial % 4, alphabet);
        check_t0(e);
        const auto text = random_text(rng, uniform_below(rng, 13), alphabet);
        const BigInt want = oracle::regex_matches(e, text);
        CHECK_MESSAGE(count_matches(e, text, kMod) == mod_of(want, kMod), to_string(e) << " on '" << text << "'");
        CHECK(count_matches_brute(e, text) == want);
        CHECK(count_matches(e, text, 7) == mod_of(want, 7));
    }
}

TEST_CASE("cyclic automata are rejected") {
    Nfa m;
    m.states = 2;
    m.start = 0;
    m.accept = 1;
    m.edges = {{0, 1, 'a'}, {1, 0, 'b'}};
    CHECK_THROWS_AS(nfa_topological_order(m), Error);
    Nfa eps;
    eps.states = 1;
    eps.edges = {{0, 0, 0}};
    CHECK_THROWS_AS(nfa_topological_order(eps), Error);
}

TEST_CASE("factored OV to pattern matching") {
    const auto inst = fkf_from_json(read_json_file(FACRED_DATA_DIR "/worked_uv.json"));
    const auto rx = fkov2_to_regex(inst);
    check_t0(rx.pattern);
    CHECK(count_matches(rx.pattern, rx.text, kMod) == 8);
    const auto ov = make_predicate(PredKind::OV, 2);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto src = gen_fkf(1 + seed % 4, 2, 1 + seed % 3, 2 + seed % 3, 0.5, seed, ov);
        const auto r = fkov2_to_regex(src);
        check_t0(r.pattern);
        CHECK(count_matches(r.pattern, r.text, kMod) == mod_of(count_fkf(src), kMod));
    }
    const auto xr = gen_fkf(2, 2, 2, 2, 0.5, 1, make_predicate(PredKind::XOR, 2));
    CHECK_THROWS_AS(fkov2_to_regex(xr), Error);
}

TEST_CASE("weighted common subsequences") {
    CHECK(count_klcs({"ab", "ab"}, kMod).length == 2);
    CHECK(count_klcs({"ab", "ab"}, kMod).count == 1);
    CHECK(count_klcs({"ab", "ba"}, kMod).length == 1);
    CHECK(count_klcs({"ab", "ba"}, kMod).count == 2);
    CHECK(count_klcs({"aa", "a"}, kMod).count == 2);
    for (const char* s : {"abc", "aab", "x"}) {
        const auto r = count_klcs({s, s, s}, kMod);
        CHECK(r.length == std::string(s).size());
        CHECK(r.count == 1);
    }
    const auto disjoint = count_klcs({"abc", "xyz"}, kMod);
    CHECK(disjoint.length == 0);
    CHECK(disjoint.count == 1);
    const auto w = count_kwlcs({"ab", "ba"}, {{'a', 3}}, kMod);
    CHECK(w.length == 3);
    CHECK(w.count == 1);
    CHECK_THROWS_AS(count_klcs({}, kMod), Error);
    CHECK_THROWS_AS(count_klcs({"a", "a", "a", "a"}, kMod), Error);
    CHECK_THROWS_AS(count_kwlcs({"a", "a"}, {{'a', 0}}, kMod), Error);
}

TEST_CASE("weighted common subsequences against enumeration") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned k = 1 + trial % 3;
        const std::string alphabet = trial % 2 ? "ab" : "abc";
        std::vector<std::string> strs;
        for (unsigned i = 0; i < k; ++i) strs.push_back(random_text(rng, uniform_below(rng, 9), alphabet));
        std::map<char, std::uint64_t> weights;
        for (char c : alphabet) {
            if (bernoulli(rng, 0.7)) weights[c] = 1 + uniform_below(rng, 4);
        }
        const auto [len, cnt] = oracle::wlcs(strs, weights);
        const auto got = count_kwlcs(strs, weights, kMod);
        CHECK(got.length == len);
        CHECK(got.count == mod_of(cnt, kMod));
        const auto brute = count_kwlcs_brute(strs, weights);
        CHECK(brute.first == len);
        CHECK(brute.second == cnt);
    }
}
