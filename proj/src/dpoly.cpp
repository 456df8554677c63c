#include "facred/dpoly.hpp"

#include <algorithm>
#include <map>

#include "facred/error.hpp"

namespace facred {

PartitePolynomial::PartitePolynomial(std::size_t n_vars, std::vector<unsigned> partition, unsigned d,
                                     std::uint64_t p)
    : n_vars_(n_vars), partition_(std::move(partition)), d_(d), p_(p) {
    if (partition_.size() != n_vars_) throw Error(Errc::arity_mismatch, "partition map size differs from n_vars");
    if (!is_prime(p_)) throw Error(Errc::invalid_parameters, "modulus must be prime");
    for (unsigned id : partition_) {
        if (id >= d_) throw Error(Errc::invalid_parameters, "partition id out of range");
    }
}

void PartitePolynomial::add_monomial(std::span<const std::uint32_t> vars, std::uint64_t mult) {
    Monomial m;
    m.vars.assign(vars.begin(), vars.end());
    for (std::uint32_t v : m.vars) {
        if (v >= n_vars_) throw Error(Errc::invalid_parameters, "variable index out of range");
    }
    m.multiplicity = mult % p_;
    std::stable_sort(m.vars.begin(), m.vars.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return partition_[a] < partition_[b]; });
    monomials_.push_back(std::move(m));
}

void PartitePolynomial::canonicalize() {
    std::map<std::vector<std::uint32_t>, std::uint64_t> merged;
    for (Monomial& m : monomials_) {
        auto& slot = merged[m.vars];
        slot = add_mod(slot, m.multiplicity, p_);
    }
    monomials_.clear();
    for (auto& [vars, mult] : merged) {
        if (mult != 0) monomials_.push_back(Monomial{vars, mult});
    }
}

std::vector<std::vector<std::uint32_t>> PartitePolynomial::vars_by_partition() const {
    std::vector<std::vector<std::uint32_t>> out(d_);
    for (std::uint32_t v = 0; v < n_vars_; ++v) out[partition_[v]].push_back(v);
    return out;
}

std::optional<PartiteViolation> verify_partite(const PartitePolynomial& poly) {
    const auto& part = poly.partition();
    for (std::size_t i = 0; i < poly.monomials().size(); ++i) {
        const Monomial& m = poly.monomials()[i];
        if (m.vars.size() != poly.degree()) {
            return PartiteViolation{i, "degree " + std::to_string(m.vars.size()) + " differs from " +
                                           std::to_string(poly.degree())};
        }
        std::vector<bool> seen(poly.degree(), false);
        for (std::uint32_t v : m.vars) {
            if (seen[part[v]]) {
                return PartiteViolation{i, "two variables from partition " + std::to_string(part[v])};
            }
            seen[part[v]] = true;
        }
    }
    return std::nullopt;
}

std::uint64_t evaluate(const PartitePolynomial& poly, std::span<const std::uint64_t> values) {
    if (values.size() != poly.n_vars()) throw Error(Errc::arity_mismatch, "assignment length differs from n_vars");
    const std::uint64_t p = poly.p();
    std::uint64_t acc = 0;
    for (const Monomial& m : poly.monomials()) {
        std::uint64_t term = m.multiplicity;
        for (std::uint32_t v : m.vars) {
            term = mul_mod(term, values[v] % p, p);
            if (term == 0) break;
        }
        acc = add_mod(acc, term, p);
    }
    return acc;
}

std::uint64_t evaluate_bits(const PartitePolynomial& poly, std::span<const std::uint8_t> bits) {
    if (bits.size() != poly.n_vars()) throw Error(Errc::arity_mismatch, "assignment length differs from n_vars");
    std::uint64_t acc = 0;
    for (const Monomial& m : poly.monomials()) {
        bool on = true;
        for (std::uint32_t v : m.vars) {
            if (!bits[v]) {
                on = false;
                break;
            }
        }
        if (on) acc = add_mod(acc, m.multiplicity, poly.p());
    }
    return acc;
}

SliceStream::SliceStream(std::span<const Lifted> lifted, const PartitePolynomial& poly, std::uint64_t budget)
    : lifted_(lifted), groups_(poly.vars_by_partition()), p_(poly.p()), d_(poly.degree()) {
    if (lifted.size() != poly.n_vars()) throw Error(Errc::arity_mismatch, "lifted vector length differs from n_vars");
    if (!lifted.empty()) t_ = lifted[0].t;
    for (const Lifted& l : lifted) {
        if (l.t != t_) throw Error(Errc::invalid_parameters, "lifted values disagree on t");
    }
    for (unsigned i = 0; i < d_; ++i) {
        if (t_ != 0 && total_ > budget / t_) {
            throw Error(Errc::slice_budget_exceeded, "t^d exceeds " + std::to_string(budget));
        }
        total_ *= t_;
    }
    if (total_ > budget) throw Error(Errc::slice_budget_exceeded, "t^d exceeds " + std::to_string(budget));
    planes_.resize(d_);
    contiguous_start_.assign(d_, -1);
    for (unsigned part = 0; part < d_; ++part) {
        const auto& vars = groups_[part];
        planes_[part].resize(static_cast<std::size_t>(t_) * vars.size());
        for (unsigned r = 0; r < t_; ++r) {
            for (std::size_t i = 0; i < vars.size(); ++i) planes_[part][r * vars.size() + i] = lifted[vars[i]].bit(r);
        }
        if (!vars.empty() && vars.back() - vars.front() + 1 == vars.size()) contiguous_start_[part] = vars.front();
    }
    pow2_.assign(static_cast<std::size_t>(t_) * d_ + 1, 1 % p_);
    for (std::size_t i = 1; i < pow2_.size(); ++i) pow2_[i] = add_mod(pow2_[i - 1], pow2_[i - 1], p_);
}

bool SliceStream::next(SliceQuery& q) {
    if (t_ == 0 || emitted_ >= total_) return false;
    unsigned first_changed = 0;
    if (emitted_ == 0) {
        index_.assign(d_, 0);
        q.slice_index.assign(d_, 0);
        q.assignment.assign(lifted_.size(), 0);
    } else {
        // Odometer step, last partition fastest.
        unsigned pos = d_;
        while (pos-- > 0) {
            if (++index_[pos] < t_) break;
            index_[pos] = 0;
        }
        first_changed = pos;
    }
    for (unsigned part = first_changed; part < d_; ++part) {
        const unsigned r = index_[part];
        const auto& vars = groups_[part];
        const std::uint8_t* plane = planes_[part].data() + static_cast<std::size_t>(r) * vars.size();
        if (contiguous_start_[part] >= 0) {
            std::copy(plane, plane + vars.size(), q.assignment.begin() + contiguous_start_[part]);
        } else {
            for (std::size_t i = 0; i < vars.size(); ++i) q.assignment[vars[i]] = plane[i];
        }
    }
    q.slice_index = index_;
    unsigned sum = 0;
    for (unsigned r : index_) sum += r;
    q.weight = pow2_[sum];
    ++emitted_;
    return true;
}

std::vector<SliceQuery> bit_slice_queries(std::span<const Lifted> lifted, const PartitePolynomial& poly,
                                          std::uint64_t budget) {
    SliceStream stream(lifted, poly, budget);
    std::vector<SliceQuery> out;
    out.reserve(stream.size());
    SliceQuery q;
    while (stream.next(q)) out.push_back(q);
    return out;
}

std::uint64_t recombine(std::span<const std::uint64_t> values, std::span<const SliceQuery> queries, std::uint64_t p) {
    if (values.size() != queries.size()) throw Error(Errc::arity_mismatch, "values and queries differ in length");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc = add_mod(acc, mul_mod(values[i] % p, queries[i].weight, p), p);
    }
    return acc;
}

PartitePolynomial random_partite_poly(unsigned d, unsigned vars_per_part, std::uint64_t p, std::size_t monomials,
                                      Rng& rng) {
    if (d == 0 || vars_per_part == 0) throw Error(Errc::invalid_parameters, "need d >= 1 and a variable per partition");
    std::vector<unsigned> partition(static_cast<std::size_t>(d) * vars_per_part);
    for (std::size_t v = 0; v < partition.size(); ++v) partition[v] = static_cast<unsigned>(v / vars_per_part);
    const std::size_t n_vars = partition.size();
    PartitePolynomial poly(n_vars, std::move(partition), d, p);
    std::vector<std::uint32_t> vars(d);
    for (std::size_t i = 0; i < monomials; ++i) {
        for (unsigned part = 0; part < d; ++part) {
            vars[part] = static_cast<std::uint32_t>(part * vars_per_part + uniform_below(rng, vars_per_part));
        }
        poly.add_monomial(vars, 1 + uniform_below(rng, p - 1));
    }
    poly.canonicalize();
    return poly;
}

}  // namespace facred
