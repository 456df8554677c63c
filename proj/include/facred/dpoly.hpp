#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "facred/sampler.hpp"

namespace facred {

struct Monomial {
    std::vector<std::uint32_t> vars;  // sorted by partition id
    std::uint64_t multiplicity = 1;   // reduced mod p
};

// Polynomial over F_p whose variables are split into d partitions (ids 0..d-1).
class PartitePolynomial {
public:
    PartitePolynomial(std::size_t n_vars, std::vector<unsigned> partition, unsigned d, std::uint64_t p);

    // Adds mult * prod(vars). Duplicates are merged by canonicalize().
    void add_monomial(std::span<const std::uint32_t> vars, std::uint64_t mult = 1);
    // Sorts variables by partition, merges repeats and drops zero multiplicities.
    void canonicalize();

    std::size_t n_vars() const { return n_vars_; }
    unsigned degree() const { return d_; }
    std::uint64_t p() const { return p_; }
    const std::vector<unsigned>& partition() const { return partition_; }
    const std::vector<Monomial>& monomials() const { return monomials_; }
    // Variables of each partition, ascending.
    std::vector<std::vector<std::uint32_t>> vars_by_partition() const;

private:
    std::size_t n_vars_;
    std::vector<unsigned> partition_;
    unsigned d_;
    std::uint64_t p_;
    std::vector<Monomial> monomials_;
};

struct PartiteViolation {
    std::size_t monomial_index = 0;
    std::string reason;
};

std::optional<PartiteViolation> verify_partite(const PartitePolynomial& poly);

// values[v] is a residue mod poly.p().
std::uint64_t evaluate(const PartitePolynomial& poly, std::span<const std::uint64_t> values);
// 0/1 assignment given one byte per variable.
std::uint64_t evaluate_bits(const PartitePolynomial& poly, std::span<const std::uint8_t> bits);

struct SliceQuery {
    std::vector<unsigned> slice_index;  // r_1..r_d
    std::vector<std::uint8_t> assignment;
    std::uint64_t weight = 1;           // 2^(r_1+...+r_d) mod p
};

// Lazily walks the t^d bit slices of a lifted input in odometer order.
class SliceStream {
public:
    SliceStream(std::span<const Lifted> lifted, const PartitePolynomial& poly,
                std::uint64_t budget = 50'000'000);

    std::uint64_t size() const { return total_; }
    // Returns false once exhausted. The query buffer is reused between calls.
    bool next(SliceQuery& q);

private:
    std::span<const Lifted> lifted_;
    std::vector<std::vector<std::uint32_t>> groups_;
    std::uint64_t p_;
    unsigned t_ = 0;
    unsigned d_;
    std::uint64_t total_ = 1;
    std::uint64_t emitted_ = 0;
    std::vector<unsigned> index_;
    std::vector<std::uint64_t> pow2_;
    // planes_[part][r * size + i]: bit r of the i-th variable of the partition.
    std::vector<std::vector<std::uint8_t>> planes_;
    std::vector<std::int64_t> contiguous_start_;  // first variable when the partition is a range, else -1
};

std::vector<SliceQuery> bit_slice_queries(std::span<const Lifted> lifted, const PartitePolynomial& poly,
                                          std::uint64_t budget = 50'000'000);

// sum_j weight_j * values_j mod p.
std::uint64_t recombine(std::span<const std::uint64_t> values, std::span<const SliceQuery> queries,
                        std::uint64_t p);

// d partitions of vars_per_part variables each, with random monomials and coefficients.
PartitePolynomial random_partite_poly(unsigned d, unsigned vars_per_part, std::uint64_t p, std::size_t monomials,
                                      Rng& rng);

}  // namespace facred
