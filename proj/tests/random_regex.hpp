#pragma once

#include <string>
#include <vector>

#include "facred/types.hpp"
#include "facred/seqalign.hpp"

namespace testgen {

inline char pick(facred::Rng& rng, const std::string& alphabet) {
    return alphabet[facred::uniform_below(rng, alphabet.size())];
}

inline facred::Regex random_star(facred::Rng& rng, const std::string& alphabet) {
    using facred::Regex;
    if (facred::bernoulli(rng, 0.5)) return Regex::star(Regex::sym(pick(rng, alphabet)));
    std::vector<Regex> kids;
    for (int i = 0, n = 2 + static_cast<int>(facred::uniform_below(rng, 2)); i < n; ++i) {
        kids.push_back(Regex::sym(pick(rng, alphabet)));
    }
    return Regex::star(Regex::alt(std::move(kids)));
}

// Random pattern where stars only wrap symbols or ORs of symbols.
inline facred::Regex random_t0(facred::Rng& rng, unsigned depth, const std::string& alphabet) {
    using facred::Regex;
    const auto roll = facred::uniform_below(rng, 10);
    if (depth == 0 || roll < 2) return Regex::sym(pick(rng, alphabet));
    if (roll < 4) return random_star(rng, alphabet);
    std::vector<Regex> kids;
    for (int i = 0, n = 2 + static_cast<int>(facred::uniform_below(rng, 2)); i < n; ++i) {
        kids.push_back(random_t0(rng, depth - 1, alphabet));
    }
    return roll < 7 ? Regex::alt(std::move(kids)) : Regex::cat(std::move(kids));
}

inline std::string random_text(facred::Rng& rng, std::size_t len, const std::string& alphabet) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += pick(rng, alphabet);
    return s;
}

}  // namespace testgen
