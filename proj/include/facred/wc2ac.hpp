#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "facred/corrector.hpp"
#include "facred/dpoly.hpp"
#include "facred/factored.hpp"
#include "facred/field.hpp"
#include "facred/sampler.hpp"
#include "facred/types.hpp"

namespace facred {

using BitOracle = std::function<BigInt(std::span<const std::uint8_t>)>;

// A counting problem with a strongly d-partite polynomial that agrees with it on 0/1 inputs.
struct GoodPolyProblem {
    std::size_t n = 0;  // input length in bits
    unsigned c = 2;     // outputs stay below n^c
    unsigned d = 1;
    double mu = 0.5;    // bias of the average-case input distribution
    BitOracle exact_solver;
    std::function<PartitePolynomial(std::uint64_t p)> poly_builder;
};

struct AvgSolver {
    BitOracle answer;
    double declared_error_rate = 0.0;
    // Optional shortcut returning answer(bits) mod p.
    std::function<std::uint64_t(std::span<const std::uint8_t>, std::uint64_t)> answer_mod;

    std::uint64_t residue(std::span<const std::uint8_t> bits, std::uint64_t p) const;
};

struct PipelineConfig {
    double sampler_C = 4.0;
    unsigned curve_points = 0;  // 0 selects 12d + 1
    unsigned reps = 0;          // 0 selects default_reps(n)
    double epsilon = 0.25;
    std::uint64_t slice_budget = 50'000'000;
};

struct WorstCaseReport {
    BigInt value;
    std::vector<FieldElem> residues;
    std::vector<unsigned> lift_bits;  // t used for each prime
    std::uint64_t oracle_calls = 0;
    std::uint64_t correction_runs = 0;
    std::uint64_t failed_runs = 0;
};

// f(x) for x in F_p^n: lift x, query A on every bit slice and recombine.
std::uint64_t eval_via_avg(std::span<const std::uint64_t> x, const PartitePolynomial& f, const AvgSolver& A,
                           const SamplerConfig& cfg, std::uint64_t n, Rng& rng, std::uint64_t* calls = nullptr,
                           std::uint64_t slice_budget = 50'000'000);

WorstCaseReport solve_worst_case(std::span<const std::uint8_t> input, const GoodPolyProblem& gpp, const AvgSolver& A,
                                 Rng& rng, const PipelineConfig& config = {});

// Wraps an exact oracle so that each call independently returns a wrong value with probability rate.
AvgSolver noisy_solver(BitOracle exact, double rate, std::uint64_t seed);
// Same, for an oracle that answers modulo p; errors are nonzero offsets mod p.
AvgSolver noisy_solver_mod(std::function<std::uint64_t(std::span<const std::uint8_t>, std::uint64_t)> exact_mod,
                           double rate, std::uint64_t seed);

// Factored 2-f over indicator bits, with the table-driven pair counter as the exact solver.
struct FkfFramework {
    FkfShape shape;
    Predicate pred;
    std::shared_ptr<const PairIndicatorCounter> counter;

    GoodPolyProblem problem() const;
    AvgSolver exact_solver() const;
    AvgSolver noisy_solver(double rate, std::uint64_t seed) const;
};
FkfFramework make_fkf_framework(std::size_t n, unsigned g, unsigned b, const Predicate& pred);

// Desk-scale settings: sampler constant 1/256 and 4d + 3 curve points.
PipelineConfig desk_pipeline_config(unsigned d);

}  // namespace facred
