#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "facred/factored.hpp"
#include "facred/types.hpp"

namespace facred {

struct Regex {
    enum class Kind { Symbol, Or, Concat, Star };
    Kind kind = Kind::Symbol;
    char symbol = 0;
    std::vector<Regex> kids;

    static Regex sym(char c);
    static Regex alt(std::vector<Regex> kids);
    static Regex cat(std::vector<Regex> kids);
    static Regex star(Regex inner);
};

// Symbols are single characters from [0-9a-zA-Z]. Concatenation is juxtaposition, '.' or U+00B7.
Regex parse_regex(const std::string& text);
std::string to_string(const Regex& e);
// Operator nesting depth; a lone symbol has depth 0.
unsigned regex_depth(const Regex& e);
// Throws unsupported_regex_type unless every star wraps a symbol or an OR of symbols and the
// depth is at most 5.
void check_t0(const Regex& e);

struct Nfa {
    struct Edge {
        std::uint32_t from = 0, to = 0;
        char symbol = 0;  // 0 is an empty move
    };
    std::uint32_t states = 0;
    std::uint32_t start = 0, accept = 0;
    std::vector<Edge> edges;
};

Nfa regex_to_nfa(const Regex& e);
// States in an order where every non-loop edge goes forward; throws nfa_not_acyclic otherwise.
std::vector<std::uint32_t> nfa_topological_order(const Nfa& m);

// Computations of the NFA on substrings T[j..end) over all j < |T|, mod R.
std::uint64_t count_matches(const Nfa& m, const std::string& text, std::uint64_t R);
std::uint64_t count_matches(const Regex& e, const std::string& text, std::uint64_t R);
// Accepting computations on exactly s.
BigInt nfa_paths(const Nfa& m, const std::string& s);

// Reference semantics straight from the syntax tree.
BigInt count_derivations(const Regex& e, const std::string& s);
BigInt count_matches_brute(const Regex& e, const std::string& text);

struct RegexInstance {
    Regex pattern;
    std::string text;
};
// Factored 2-OV to a pattern built from list 0 and a text built from list 1.
RegexInstance fkov2_to_regex(const FkfInstance& inst);

struct LcsResult {
    std::uint64_t length = 0;
    std::uint64_t count = 0;  // mod R
};

// Maximum-weight common subsequence and the number of alignments reaching it, for 1 <= k <= 3
// strings. Symbols missing from weights weigh 1.
LcsResult count_kwlcs(const std::vector<std::string>& strings, const std::map<char, std::uint64_t>& weights,
                      std::uint64_t R);
LcsResult count_klcs(const std::vector<std::string>& strings, std::uint64_t R);
// Enumerates every subsequence of every string.
std::pair<std::uint64_t, BigInt> count_kwlcs_brute(const std::vector<std::string>& strings,
                                                   const std::map<char, std::uint64_t>& weights);

}  // namespace facred
