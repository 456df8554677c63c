#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "facred/bitstring.hpp"
#include "facred/dpoly.hpp"
#include "facred/types.hpp"

namespace facred {

// Sorted, duplicate-free set of equal-width strings.
class StringSet {
public:
    StringSet() = default;
    explicit StringSet(unsigned width) : width_(width) {}

    unsigned width() const { return width_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    void insert(const BitString& s);
    bool contains(const BitString& s) const;
    const std::vector<BitString>& items() const { return items_; }
    bool operator==(const StringSet& o) const { return width_ == o.width_ && items_ == o.items_; }

private:
    unsigned width_ = 0;
    std::vector<BitString> items_;
};

struct FactoredVector {
    unsigned b = 0;
    std::vector<StringSet> groups;

    unsigned g() const { return static_cast<unsigned>(groups.size()); }
    bool operator==(const FactoredVector& o) const { return b == o.b && groups == o.groups; }
};

enum class PredKind { OV, XOR, SUM_ZERO, SUM_TARGET, TABLE };

// Acceptance test on a tuple of equal-width strings.
//   OV: bitwise AND of all is zero.  XOR: bitwise XOR is zero.
//   SUM_ZERO: sum is 0 mod 2^width.  SUM_TARGET: s_1 + ... + s_{l-1} == s_l over the integers.
struct Predicate {
    PredKind kind = PredKind::OV;
    unsigned arity = 2;
    std::set<std::vector<BitString>> table;

    bool accepts(std::span<const BitString> tuple) const;
};

Predicate make_predicate(PredKind kind, unsigned arity);
std::string_view pred_name(PredKind kind);
PredKind parse_pred_kind(std::string_view name);

// All accepted tuples over {0,1}^b.
std::vector<std::vector<BitString>> accepted_tuples(const Predicate& pred, unsigned b);

// Number of accepted tuples in sets[0] x ... x sets[l-1].
std::uint64_t circ(std::span<const StringSet* const> sets, const Predicate& pred);

// Product of circ over groups.
BigInt circledast(std::span<const FactoredVector* const> vectors, const Predicate& pred);

struct FkfInstance {
    unsigned k = 2, g = 1, b = 1;
    Predicate pred;
    std::vector<std::vector<FactoredVector>> lists;  // k lists of n vectors

    std::size_t n() const { return lists.empty() ? 0 : lists[0].size(); }
};

// Index of partition pair (a, b), a < b, in the order (0,1), (0,2), ..., (k-2,k-1).
unsigned pair_index(unsigned a, unsigned b, unsigned k);
unsigned pair_count(unsigned k);

struct FfkcInstance {
    unsigned k = 3, g = 1, b = 1;
    std::size_t n = 1;
    Predicate pred;  // arity k(k-1)/2, labels in pair order
    // edges[q][i * n + j]: label of the edge between node i of the first partition of pair q
    // and node j of the second; nullopt when the edge is absent.
    std::vector<std::vector<std::optional<FactoredVector>>> edges;

    const std::optional<FactoredVector>& edge(unsigned pa, std::size_t i, unsigned pb, std::size_t j) const;
};

void validate(const FkfInstance& inst);
void validate(const FfkcInstance& inst);

BigInt count_fkf(const FkfInstance& inst);
BigInt count_ffkc(const FfkcInstance& inst);

FactoredVector random_factored_vector(unsigned g, unsigned b, double mu, Rng& rng);
FkfInstance gen_fkf(std::size_t n, unsigned k, unsigned g, unsigned b, double mu, std::uint64_t seed,
                    const Predicate& pred);
// Complete k-partite shape with random labels.
FfkcInstance gen_ffkc(std::size_t n, unsigned k, unsigned g, unsigned b, double mu, std::uint64_t seed,
                      const Predicate& pred);

// Indicator variables x_{v[i]}(s), laid out as (list, group, vector, string); the partition of a
// variable is list * g + group.
struct FkfShape {
    std::size_t n = 1;
    unsigned k = 2, g = 1, b = 1;

    std::size_t n_vars() const { return static_cast<std::size_t>(k) * g * n * (std::size_t{1} << b); }
    std::size_t var(unsigned list, unsigned group, std::size_t vec, std::uint32_t s) const;
};

// Variables x_{e[i]}(s) over every cross pair, laid out as (pair, group, i * n + j, string);
// the partition of a variable is pair * g + group.
struct FfkcShape {
    std::size_t n = 1;
    unsigned k = 3, g = 1, b = 1;

    std::size_t n_vars() const;
    std::size_t var(unsigned q, unsigned group, std::size_t i, std::size_t j, std::uint32_t s) const;
};

PartitePolynomial build_f_ckfunc(const FkfShape& shape, const Predicate& pred, std::uint64_t p,
                                 std::size_t monomial_cap = 10'000'000);
PartitePolynomial build_f_ffkc(const FfkcShape& shape, const Predicate& pred, std::uint64_t p,
                               std::size_t monomial_cap = 10'000'000);

std::vector<std::uint8_t> indicator(const FkfInstance& inst);
std::vector<std::uint8_t> indicator(const FfkcInstance& inst);
FkfInstance fkf_from_indicator(std::span<const std::uint8_t> bits, const FkfShape& shape, const Predicate& pred);

// Fast exact counter on indicator inputs for k = 2 and b <= 3: each group set becomes a mask
// over {0,1}^b and circ is a table lookup.
class PairIndicatorCounter {
public:
    PairIndicatorCounter(const FkfShape& shape, const Predicate& pred);
    BigInt operator()(std::span<const std::uint8_t> bits) const;
    std::uint64_t count_u64(std::span<const std::uint8_t> bits) const;

private:
    FkfShape shape_;
    unsigned masks_;
    std::vector<std::uint64_t> table_;
    std::vector<std::uint16_t> pair_table_;

    std::uint64_t count_pair_table(const std::uint8_t* bits) const;
};

}  // namespace facred
