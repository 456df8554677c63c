#include "facred/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "facred/error.hpp"
#include "facred/field.hpp"

namespace facred {

void CorrectionParams::validate() const {
    if (d < 1) throw Error(Errc::invalid_parameters, "degree must be at least 1");
    if (!is_prime(p)) throw Error(Errc::invalid_parameters, "p must be prime");
    if (p <= 12ULL * d) throw Error(Errc::invalid_parameters, "p must exceed 12d");
    if (!(epsilon > 0.0 && epsilon < 1.0 / 3.0)) throw Error(Errc::invalid_parameters, "epsilon must lie in (0, 1/3)");
    const unsigned mm = curve_points();
    if (mm < 4 * d + 3) throw Error(Errc::invalid_parameters, "need at least 4d+3 curve points");
    if (mm > p - 1) throw Error(Errc::invalid_parameters, "more curve points than nonzero field elements");
}

namespace {

// Solves A x = b over F_p; free variables set to zero. Returns nullopt when inconsistent.
std::optional<std::vector<std::uint64_t>> solve_mod(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() - 1 : 0;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        const std::uint64_t inv = inv_mod(a[r][c], p);
        for (std::size_t j = c; j <= cols; ++j) a[r][j] = mul_mod(a[r][j], inv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            const std::uint64_t f = a[i][c];
            for (std::size_t j = c; j <= cols; ++j) a[i][j] = sub_mod(a[i][j], mul_mod(f, a[r][j], p), p);
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i) {
        if (a[i][cols] != 0) return std::nullopt;
    }
    std::vector<std::uint64_t> x(cols, 0);
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = a[i][cols];
    return x;
}

std::uint64_t horner(const std::vector<std::uint64_t>& coeffs, std::uint64_t x, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = add_mod(mul_mod(acc, x, p), coeffs[i], p);
    return acc;
}

}  // namespace

std::optional<std::vector<std::uint64_t>> berlekamp_welch(std::span<const std::uint64_t> xs,
                                                          std::span<const std::uint64_t> ys, unsigned D,
                                                          unsigned e, std::uint64_t p) {
    if (xs.size() != ys.size()) throw Error(Errc::arity_mismatch, "xs and ys differ in length");
    const std::size_t n = xs.size();
    if (n < static_cast<std::size_t>(D) + 2 * e + 1) {
        throw Error(Errc::invalid_parameters, "need at least D + 2e + 1 points");
    }
    // Unknowns: E_0..E_{e-1} (E monic of degree e), Q_0..Q_{D+e}.
    // Equation per point: Q(x) - y (E_0 + ... + E_{e-1} x^{e-1}) = y x^e.
    const std::size_t nq = D + e + 1;
    const std::size_t cols = e + nq;
    std::vector<std::vector<std::uint64_t>> a(n, std::vector<std::uint64_t>(cols + 1, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t x = xs[i] % p, y = ys[i] % p;
        std::uint64_t pw = 1;
        for (std::size_t j = 0; j < std::max<std::size_t>(e, nq); ++j) {
            if (j < e) a[i][j] = sub_mod(0, mul_mod(y, pw, p), p);
            if (j < nq) a[i][e + j] = pw;
            pw = mul_mod(pw, x, p);
        }
        a[i][cols] = mul_mod(y, pow_mod(x, e, p), p);
    }
    auto sol = solve_mod(std::move(a), p);
    if (!sol) return std::nullopt;

    std::vector<std::uint64_t> E(sol->begin(), sol->begin() + e);
    E.push_back(1);
    std::vector<std::uint64_t> Q(sol->begin() + e, sol->end());

    // Long division Q / E; E is monic.
    std::vector<std::uint64_t> rem = Q;
    std::vector<std::uint64_t> quot(nq >= e + 1 ? nq - e : 1, 0);
    for (std::size_t i = nq; i-- > e;) {
        const std::uint64_t c = rem[i];
        if (c == 0) continue;
        quot[i - e] = c;
        for (std::size_t j = 0; j <= e; ++j) rem[i - e + j] = sub_mod(rem[i - e + j], mul_mod(c, E[j], p), p);
    }
    for (std::size_t i = 0; i < e && i < rem.size(); ++i) {
        if (rem[i] != 0) return std::nullopt;
    }
    quot.resize(static_cast<std::size_t>(D) + 1, 0);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (horner(quot, xs[i] % p, p) == ys[i] % p) ++agree;
    }
    if (agree + e < n) return std::nullopt;
    return quot;
}

std::uint64_t correct(std::span<const std::uint64_t> x, const FieldOracle& oracle, const CorrectionParams& params,
                      Rng& rng) {
    params.validate();
    const std::uint64_t p = params.p;
    const unsigned m = params.curve_points();
    const unsigned D = 2 * params.d;
    const unsigned e = (m - D - 1) / 2;

    std::vector<std::uint64_t> y(x.size()), z(x.size());
    for (auto& v : y) v = uniform_below(rng, p);
    for (auto& v : z) v = uniform_below(rng, p);

    std::vector<std::uint64_t> ts(m), vals(m), point(x.size());
    for (unsigned s = 1; s <= m; ++s) {
        const std::uint64_t s2 = mul_mod(s, s, p);
        for (std::size_t i = 0; i < x.size(); ++i) {
            point[i] = add_mod(add_mod(x[i] % p, mul_mod(s, y[i], p), p), mul_mod(s2, z[i], p), p);
        }
        ts[s - 1] = s;
        vals[s - 1] = oracle(point) % p;
    }
    auto coeffs = berlekamp_welch(ts, vals, D, e, p);
    if (!coeffs) throw Error(Errc::decode_failure, "too many corrupted curve points");
    return (*coeffs)[0];
}

std::uint64_t amplify(const std::function<std::uint64_t()>& op, unsigned reps, AmplifyStats* stats) {
    if (reps == 0) throw Error(Errc::invalid_parameters, "reps must be positive");
    std::map<std::uint64_t, unsigned> votes;
    AmplifyStats local;
    for (unsigned run = 0; run < reps; ++run) {
        ++local.runs;
        try {
            ++votes[op()];
        } catch (const Error&) {
            ++local.failures;
        }
        if (votes.empty()) continue;
        unsigned best = 0, second = 0;
        for (const auto& [value, count] : votes) {
            if (count > best) {
                second = best;
                best = count;
            } else if (count > second) {
                second = count;
            }
        }
        const unsigned remaining = reps - run - 1;
        if (best > second + remaining) break;
    }
    if (stats) *stats = local;
    if (votes.empty()) throw Error(Errc::amplify_exhausted, "all " + std::to_string(reps) + " runs failed");
    std::uint64_t winner = 0;
    unsigned best = 0;
    for (const auto& [value, count] : votes) {
        if (count > best) {
            best = count;
            winner = value;
        }
    }
    return winner;
}

unsigned default_reps(std::uint64_t n) {
    const double lg = std::log2(static_cast<double>(std::max<std::uint64_t>(n, 16)));
    const double r = std::ceil(lg * lg * lg - 1e-9);
    return r > 201.0 ? 201U : static_cast<unsigned>(r);
}

FieldOracle planted_oracle(FieldOracle truth, std::uint64_t p, double rate, std::uint64_t seed) {
    const std::uint64_t key = substream_seed(seed, "planted_oracle");
    return [truth = std::move(truth), p, rate, key](std::span<const std::uint64_t> x) {
        std::uint64_t h = key;
        for (std::uint64_t v : x) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h = Rng(h)();
        }
        const std::uint64_t v = truth(x);
        const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        if (u >= rate) return v;
        return add_mod(v, 1 + (h % (p - 1)), p);
    };
}

}  // namespace facred
