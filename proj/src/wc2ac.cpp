#include "facred/wc2ac.hpp"

#include <algorithm>
#include <bit>
#include <memory>

#include "facred/error.hpp"

namespace facred {

std::uint64_t AvgSolver::residue(std::span<const std::uint8_t> bits, std::uint64_t p) const {
    if (answer_mod) return answer_mod(bits, p) % p;
    return mod_of(answer(bits), p);
}

std::uint64_t eval_via_avg(std::span<const std::uint64_t> x, const PartitePolynomial& f, const AvgSolver& A,
                           const SamplerConfig& cfg, std::uint64_t n, Rng& rng, std::uint64_t* calls,
                           std::uint64_t slice_budget) {
    if (x.size() != f.n_vars()) throw Error(Errc::arity_mismatch, "point length differs from n_vars");
    const std::uint64_t p = f.p();
    std::vector<FieldElem> xs;
    xs.reserve(x.size());
    for (std::uint64_t v : x) xs.push_back(FieldElem{v % p, p});
    const std::vector<Lifted> lifted = lift_vector(std::span<const FieldElem>(xs), cfg, n, rng);
    SliceStream stream(lifted, f, slice_budget);
    SliceQuery q;
    std::uint64_t acc = 0;
    std::uint64_t used = 0;
    while (stream.next(q)) {
        const std::uint64_t v = A.residue(q.assignment, p);
        acc = add_mod(acc, mul_mod(v, q.weight, p), p);
        ++used;
    }
    if (calls) *calls += used;
    return acc;
}

WorstCaseReport solve_worst_case(std::span<const std::uint8_t> input, const GoodPolyProblem& gpp, const AvgSolver& A,
                                 Rng& rng, const PipelineConfig& config) {
    if (input.size() != gpp.n) throw Error(Errc::arity_mismatch, "input length differs from problem size");
    if (gpp.n < 2) throw Error(Errc::invalid_parameters, "problem size must be at least 2");
    const unsigned m = config.curve_points ? config.curve_points : 12 * gpp.d + 1;
    const unsigned reps = config.reps ? config.reps : default_reps(gpp.n);
    // Primes must exceed 12d and leave m distinct nonzero curve parameters.
    const std::uint64_t floor = std::max<std::uint64_t>(12ULL * gpp.d + 1, m + 1ULL);
    const PrimeBasis basis = select_primes(gpp.n, gpp.c, floor);

    WorstCaseReport report;
    for (std::uint64_t p : basis.primes) {
        const PartitePolynomial f = gpp.poly_builder(p);
        if (f.degree() != gpp.d || f.n_vars() != gpp.n) {
            throw Error(Errc::shape_mismatch, "polynomial shape differs from the problem");
        }
        const unsigned min_t = static_cast<unsigned>(std::bit_width(p));
        const SamplerConfig cfg = make_sampler_config(p, gpp.mu, gpp.n, config.sampler_C, min_t);
        CorrectionParams params;
        params.d = gpp.d;
        params.p = p;
        params.epsilon = config.epsilon;
        params.m = m;
        params.validate();

        std::vector<std::uint64_t> x(input.begin(), input.end());
        FieldOracle oracle = [&](std::span<const std::uint64_t> pt) {
            return eval_via_avg(pt, f, A, cfg, gpp.n, rng, &report.oracle_calls, config.slice_budget);
        };
        AmplifyStats stats;
        const std::uint64_t r = amplify([&] { return correct(x, oracle, params, rng); }, reps, &stats);
        report.correction_runs += stats.runs;
        report.failed_runs += stats.failures;
        report.residues.push_back(FieldElem{r, p});
        report.lift_bits.push_back(cfg.t);
    }
    report.value = crt_reconstruct(report.residues);
    return report;
}

AvgSolver noisy_solver(BitOracle exact, double rate, std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(substream(seed, "noisy_solver"));
    AvgSolver s;
    s.declared_error_rate = rate;
    s.answer = [exact = std::move(exact), rate, rng](std::span<const std::uint8_t> bits) -> BigInt {
        BigInt v = exact(bits);
        if (bernoulli(*rng, rate)) v += 1 + uniform_below(*rng, std::uint64_t{1} << 20);
        return v;
    };
    return s;
}

AvgSolver noisy_solver_mod(std::function<std::uint64_t(std::span<const std::uint8_t>, std::uint64_t)> exact_mod,
                           double rate, std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(substream(seed, "noisy_solver"));
    AvgSolver s;
    s.declared_error_rate = rate;
    s.answer_mod = [exact_mod, rate, rng](std::span<const std::uint8_t> bits, std::uint64_t p) -> std::uint64_t {
        std::uint64_t v = exact_mod(bits, p);
        // A wrong answer is off by a nonzero amount modulo p.
        if (bernoulli(*rng, rate)) v = add_mod(v, 1 + uniform_below(*rng, p - 1), p);
        return v;
    };
    s.answer = [](std::span<const std::uint8_t>) -> BigInt {
        throw Error(Errc::invalid_parameters, "this solver only answers modulo p");
    };
    return s;
}

FkfFramework make_fkf_framework(std::size_t n, unsigned g, unsigned b, const Predicate& pred) {
    FkfFramework fw;
    fw.shape = FkfShape{n, 2, g, b};
    fw.pred = pred;
    fw.counter = std::make_shared<const PairIndicatorCounter>(fw.shape, pred);
    return fw;
}

GoodPolyProblem FkfFramework::problem() const {
    GoodPolyProblem gpp;
    gpp.n = shape.n_vars();
    gpp.c = 2;
    gpp.d = shape.k * shape.g;
    gpp.mu = 0.5;
    auto cnt = counter;
    gpp.exact_solver = [cnt](std::span<const std::uint8_t> bits) { return (*cnt)(bits); };
    gpp.poly_builder = [shape = shape, pred = pred](std::uint64_t p) { return build_f_ckfunc(shape, pred, p); };
    return gpp;
}

AvgSolver FkfFramework::exact_solver() const {
    auto cnt = counter;
    AvgSolver a;
    a.answer = [cnt](std::span<const std::uint8_t> bits) { return (*cnt)(bits); };
    a.answer_mod = [cnt](std::span<const std::uint8_t> bits, std::uint64_t p) { return cnt->count_u64(bits) % p; };
    return a;
}

AvgSolver FkfFramework::noisy_solver(double rate, std::uint64_t seed) const {
    auto cnt = counter;
    return noisy_solver_mod([cnt](std::span<const std::uint8_t> bits, std::uint64_t p) { return cnt->count_u64(bits) % p; },
                            rate, seed);
}

PipelineConfig desk_pipeline_config(unsigned d) {
    PipelineConfig cfg;
    cfg.sampler_C = 1.0 / 256;
    cfg.curve_points = 4 * d + 3;
    return cfg;
}

}  // namespace facred
