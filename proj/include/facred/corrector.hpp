#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "facred/types.hpp"

namespace facred {

struct CorrectionParams {
    unsigned d = 1;
    std::uint64_t p = 13;
    double epsilon = 0.25;
    unsigned m = 0;  // 0 selects 12d + 1

    unsigned curve_points() const { return m ? m : 12 * d + 1; }
    // Throws invalid-parameters unless p > 12d, d >= 1, 0 < epsilon < 1/3, 4d+3 <= m <= p-1.
    void validate() const;
    // Degrees at or below 9 are outside the regime of the guarantee; allowed but flagged.
    bool below_asymptotic_regime() const { return d <= 9; }
};

// Coefficients (low to high) of the unique degree <= D polynomial agreeing with all but
// at most e of the points, or nullopt.
std::optional<std::vector<std::uint64_t>> berlekamp_welch(std::span<const std::uint64_t> xs,
                                                          std::span<const std::uint64_t> ys, unsigned D,
                                                          unsigned e, std::uint64_t p);

using FieldOracle = std::function<std::uint64_t(std::span<const std::uint64_t>)>;

// Queries the oracle along x + s y + s^2 z for s = 1..m and decodes f(x). Throws decode-failure.
std::uint64_t correct(std::span<const std::uint64_t> x, const FieldOracle& oracle, const CorrectionParams& params,
                      Rng& rng);

struct AmplifyStats {
    unsigned runs = 0;
    unsigned failures = 0;
};

// Plurality over up to reps runs of op; ties go to the smallest value. Runs that throw
// facred::Error are skipped. Stops as soon as the plurality can no longer change.
std::uint64_t amplify(const std::function<std::uint64_t()>& op, unsigned reps, AmplifyStats* stats = nullptr);

// ceil(lg^3 max(n, 16)), capped at 201.
unsigned default_reps(std::uint64_t n);

// Answers truth(x) except on a fixed pseudo-random fraction `rate` of points, where the answer is
// shifted by a nonzero amount. The corrupted set depends only on seed.
FieldOracle planted_oracle(FieldOracle truth, std::uint64_t p, double rate, std::uint64_t seed);

}  // namespace facred
