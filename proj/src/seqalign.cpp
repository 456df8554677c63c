#include "facred/seqalign.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "facred/error.hpp"

namespace facred {

namespace {

using u128 = unsigned __int128;

std::uint64_t add_mod_r(std::uint64_t a, std::uint64_t b, std::uint64_t R) {
    return static_cast<std::uint64_t>((static_cast<u128>(a) + b) % R);
}

std::uint64_t sub_mod_r(std::uint64_t a, std::uint64_t b, std::uint64_t R) {
    return static_cast<std::uint64_t>((static_cast<u128>(a) + R - b % R) % R);
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Regex parse() {
        Regex e = alternation();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::parse_error, what + " at offset " + std::to_string(pos_));
    }

    bool at_dot() const {
        if (pos_ < s_.size() && s_[pos_] == '.') return true;
        return s_.compare(pos_, 2, "\xC2\xB7") == 0;
    }

    void skip_dot() { pos_ += s_[pos_] == '.' ? 1 : 2; }

    Regex alternation() {
        std::vector<Regex> kids{concatenation()};
        while (pos_ < s_.size() && s_[pos_] == '|') {
            ++pos_;
            kids.push_back(concatenation());
        }
        return Regex::alt(std::move(kids));
    }

    Regex concatenation() {
        std::vector<Regex> kids;
        while (pos_ < s_.size() && s_[pos_] != '|' && s_[pos_] != ')') {
            if (at_dot()) {
                if (kids.empty()) fail("concatenation without a left operand");
                skip_dot();
                continue;
            }
            kids.push_back(factor());
        }
        if (kids.empty()) fail("empty expression");
        return Regex::cat(std::move(kids));
    }

    Regex factor() {
        Regex e = atom();
        while (pos_ < s_.size() && s_[pos_] == '*') {
            ++pos_;
            e = Regex::star(std::move(e));
        }
        return e;
    }

    Regex atom() {
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Regex e = alternation();
            if (pos_ >= s_.size() || s_[pos_] != ')') fail("missing ')'");
            ++pos_;
            return e;
        }
        if (std::isalnum(static_cast<unsigned char>(c))) {
            ++pos_;
            return Regex::sym(c);
        }
        fail(std::string("unexpected '") + c + "'");
    }
};

bool is_symbol_or(const Regex& e) {
    if (e.kind == Regex::Kind::Symbol) return true;
    if (e.kind != Regex::Kind::Or) return false;
    return std::all_of(e.kids.begin(), e.kids.end(), [](const Regex& k) { return k.kind == Regex::Kind::Symbol; });
}

struct Builder {
    Nfa m;

    std::uint32_t fresh() { return m.states++; }
    void edge(std::uint32_t a, std::uint32_t b, char c) { m.edges.push_back({a, b, c}); }

    std::pair<std::uint32_t, std::uint32_t> build(const Regex& e) {
        switch (e.kind) {
        case Regex::Kind::Symbol: {
            const auto s = fresh(), t = fresh();
            edge(s, t, e.symbol);
            return {s, t};
        }
        case Regex::Kind::Concat: {
            auto [s, t] = build(e.kids.front());
            for (std::size_t i = 1; i < e.kids.size(); ++i) {
                auto [s2, t2] = build(e.kids[i]);
                edge(t, s2, 0);
                t = t2;
            }
            return {s, t};
        }
        case Regex::Kind::Or: {
            const auto s = fresh(), t = fresh();
            for (const Regex& k : e.kids) {
                auto [sk, tk] = build(k);
                edge(s, sk, 0);
                edge(tk, t, 0);
            }
            return {s, t};
        }
        case Regex::Kind::Star: {
            if (!is_symbol_or(e.kids[0])) throw Error(Errc::unsupported_regex_type, "star must wrap an OR of symbols");
            const auto s = fresh(), mid = fresh(), t = fresh();
            edge(s, mid, 0);
            edge(mid, t, 0);
            const Regex& in = e.kids[0];
            if (in.kind == Regex::Kind::Symbol) {
                edge(mid, mid, in.symbol);
            } else {
                for (const Regex& k : in.kids) edge(mid, mid, k.symbol);
            }
            return {s, t};
        }
        }
        throw Error(Errc::unsupported_regex_type, "unknown node");
    }
};

}  // namespace

Regex Regex::sym(char c) {
    Regex e;
    e.kind = Kind::Symbol;
    e.symbol = c;
    return e;
}

Regex Regex::alt(std::vector<Regex> kids) {
    if (kids.size() == 1) return std::move(kids[0]);
    Regex e;
    e.kind = Kind::Or;
    e.kids = std::move(kids);
    return e;
}

Regex Regex::cat(std::vector<Regex> kids) {
    if (kids.size() == 1) return std::move(kids[0]);
    Regex e;
    e.kind = Kind::Concat;
    for (Regex& k : kids) {
        if (k.kind == Kind::Concat) {
            for (Regex& kk : k.kids) e.kids.push_back(std::move(kk));
        } else {
            e.kids.push_back(std::move(k));
        }
    }
    return e;
}

Regex Regex::star(Regex inner) {
    Regex e;
    e.kind = Kind::Star;
    e.kids.push_back(std::move(inner));
    return e;
}

Regex parse_regex(const std::string& text) { return Parser(text).parse(); }

std::string to_string(const Regex& e) {
    switch (e.kind) {
    case Regex::Kind::Symbol:
        return std::string(1, e.symbol);
    case Regex::Kind::Or: {
        std::string out = "(";
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
            if (i) out += '|';
            out += to_string(e.kids[i]);
        }
        return out + ")";
    }
    case Regex::Kind::Concat: {
        std::string out;
        for (const Regex& k : e.kids) {
            out += k.kind == Regex::Kind::Concat ? "(" + to_string(k) + ")" : to_string(k);
        }
        return out;
    }
    case Regex::Kind::Star:
        return to_string(e.kids[0]) + "*";
    }
    return {};
}

unsigned regex_depth(const Regex& e) {
    unsigned d = 0;
    for (const Regex& k : e.kids) d = std::max(d, regex_depth(k));
    return e.kind == Regex::Kind::Symbol ? 0 : d + 1;
}

void check_t0(const Regex& e) {
    if (regex_depth(e) > 5) throw Error(Errc::unsupported_regex_type, "pattern deeper than 5 levels");
    std::function<void(const Regex&)> walk = [&](const Regex& x) {
        if (x.kind == Regex::Kind::Star && !is_symbol_or(x.kids[0])) {
            throw Error(Errc::unsupported_regex_type, "star must wrap an OR of symbols");
        }
        for (const Regex& k : x.kids) walk(k);
    };
    walk(e);
}

Nfa regex_to_nfa(const Regex& e) {
    check_t0(e);
    Builder b;
    auto [s, t] = b.build(e);
    b.m.start = s;
    b.m.accept = t;
    return b.m;
}

std::vector<std::uint32_t> nfa_topological_order(const Nfa& m) {
    std::vector<std::vector<std::uint32_t>> out(m.states);
    std::vector<std::uint32_t> indeg(m.states, 0);
    for (const auto& e : m.edges) {
        if (e.from >= m.states || e.to >= m.states) throw Error(Errc::invalid_parameters, "edge endpoint out of range");
        if (e.from == e.to) {
            if (e.symbol == 0) throw Error(Errc::nfa_not_acyclic, "empty-move self-loop");
            continue;
        }
        out[e.from].push_back(e.to);
        ++indeg[e.to];
    }
    std::vector<std::uint32_t> order;
    for (std::uint32_t q = 0; q < m.states; ++q) {
        if (indeg[q] == 0) order.push_back(q);
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::uint32_t r : out[order[i]]) {
            if (--indeg[r] == 0) order.push_back(r);
        }
    }
    if (order.size() != m.states) throw Error(Errc::nfa_not_acyclic, "cycle longer than a self-loop");
    return order;
}

std::uint64_t count_matches(const Nfa& m, const std::string& text, std::uint64_t R) {
    if (R == 0) throw Error(Errc::invalid_parameters, "modulus must be positive");
    const auto order = nfa_topological_order(m);
    std::vector<std::vector<const Nfa::Edge*>> from(m.states);
    for (const auto& e : m.edges) from[e.from].push_back(&e);
    const std::size_t n = text.size();
    // f[q]: computations from q that read a prefix of text[j..] and stop in the accept state.
    std::vector<std::uint64_t> f(m.states, 0), next(m.states, 0);
    std::uint64_t total = 0;
    for (std::size_t j = n + 1; j-- > 0;) {
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::uint32_t q = *it;
            std::uint64_t v = q == m.accept ? 1 % R : 0;
            for (const Nfa::Edge* e : from[q]) {
                if (e->symbol == 0) {
                    v = add_mod_r(v, f[e->to], R);
                } else if (j < n && text[j] == e->symbol) {
                    v = add_mod_r(v, next[e->to], R);
                }
            }
            f[q] = v;
        }
        if (j < n) total = add_mod_r(total, f[m.start], R);
        std::swap(f, next);
    }
    return total;
}

std::uint64_t count_matches(const Regex& e, const std::string& text, std::uint64_t R) {
    return count_matches(regex_to_nfa(e), text, R);
}

BigInt nfa_paths(const Nfa& m, const std::string& s) {
    const auto order = nfa_topological_order(m);
    std::vector<std::vector<const Nfa::Edge*>> from(m.states);
    for (const auto& e : m.edges) from[e.from].push_back(&e);
    const std::size_t n = s.size();
    std::vector<BigInt> f(m.states), next(m.states);
    for (std::size_t j = n + 1; j-- > 0;) {
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::uint32_t q = *it;
            BigInt v = (q == m.accept && j == n) ? 1 : 0;
            for (const Nfa::Edge* e : from[q]) {
                if (e->symbol == 0) {
                    v += f[e->to];
                } else if (j < n && s[j] == e->symbol) {
                    v += next[e->to];
                }
            }
            f[q] = v;
        }
        if (j == 0) return f[m.start];
        std::swap(f, next);
    }
    return 0;
}

BigInt count_derivations(const Regex& e, const std::string& s) {
    switch (e.kind) {
    case Regex::Kind::Symbol:
        return (s.size() == 1 && s[0] == e.symbol) ? 1 : 0;
    case Regex::Kind::Or: {
        BigInt total = 0;
        for (const Regex& k : e.kids) total += count_derivations(k, s);
        return total;
    }
    case Regex::Kind::Concat: {
        std::vector<BigInt> ways(s.size() + 1, 0);
        ways[0] = 1;
        for (const Regex& k : e.kids) {
            std::vector<BigInt> nw(s.size() + 1, 0);
            for (std::size_t p = 0; p <= s.size(); ++p) {
                if (ways[p] == 0) continue;
                for (std::size_t q = p; q <= s.size(); ++q) nw[q] += ways[p] * count_derivations(k, s.substr(p, q - p));
            }
            ways = std::move(nw);
        }
        return ways[s.size()];
    }
    case Regex::Kind::Star: {
        // Iterations are non-empty, so every split into pieces is one derivation per piece choice.
        std::vector<BigInt> ways(s.size() + 1, 0);
        ways[0] = 1;
        for (std::size_t q = 1; q <= s.size(); ++q) {
            for (std::size_t p = 0; p < q; ++p) {
                if (ways[p] != 0) ways[q] += ways[p] * count_derivations(e.kids[0], s.substr(p, q - p));
            }
        }
        return ways[s.size()];
    }
    }
    return 0;
}

BigInt count_matches_brute(const Regex& e, const std::string& text) {
    BigInt total = 0;
    for (std::size_t j = 0; j < text.size(); ++j) {
        for (std::size_t end = j; end <= text.size(); ++end) total += count_derivations(e, text.substr(j, end - j));
    }
    return total;
}

RegexInstance fkov2_to_regex(const FkfInstance& inst) {
    validate(inst);
    if (inst.k != 2 || inst.pred.kind != PredKind::OV) throw Error(Errc::invalid_parameters, "needs a factored 2-OV instance");
    const unsigned b = inst.b;
    const Regex any = Regex::star(Regex::alt({Regex::sym('0'), Regex::sym('1'), Regex::sym('2')}));

    std::vector<Regex> alternatives;
    for (const FactoredVector& u : inst.lists[0]) {
        bool usable = true;
        std::vector<Regex> parts{Regex::sym('4')};
        for (unsigned j = 0; j < u.g(); ++j) {
            if (u.groups[j].empty()) {
                usable = false;
                break;
            }
            std::vector<Regex> choices;
            for (const BitString& a : u.groups[j].items()) {
                std::vector<Regex> coords;
                for (unsigned r = b; r-- > 0;) {
                    coords.push_back(a.bit(r) ? Regex::sym('0') : Regex::alt({Regex::sym('0'), Regex::sym('1')}));
                }
                choices.push_back(Regex::cat(std::move(coords)));
            }
            if (j > 0) parts.push_back(Regex::sym('3'));
            parts.push_back(any);
            parts.push_back(Regex::alt(std::move(choices)));
            parts.push_back(any);
        }
        if (!usable) continue;
        parts.push_back(Regex::sym('4'));
        alternatives.push_back(Regex::cat(std::move(parts)));
    }
    RegexInstance out;
    // 'a' never occurs in the text, so an instance without usable vectors matches nothing.
    out.pattern = alternatives.empty() ? Regex::sym('a') : Regex::alt(std::move(alternatives));

    out.text = "4";
    for (const FactoredVector& v : inst.lists[1]) {
        for (unsigned j = 0; j < v.g(); ++j) {
            if (j > 0) out.text += '3';
            bool first = true;
            for (const BitString& c : v.groups[j].items()) {
                if (!first) out.text += '2';
                first = false;
                out.text += c.text();
            }
        }
        out.text += '4';
    }
    return out;
}

LcsResult count_kwlcs(const std::vector<std::string>& strings, const std::map<char, std::uint64_t>& weights,
                      std::uint64_t R) {
    const auto k = static_cast<unsigned>(strings.size());
    if (k < 1 || k > 3) throw Error(Errc::invalid_parameters, "supports 1 to 3 strings");
    if (R == 0) throw Error(Errc::invalid_parameters, "modulus must be positive");
    for (const auto& [c, w] : weights) {
        if (w == 0) throw Error(Errc::invalid_parameters, "weights must be positive");
    }
    auto weight = [&](char c) {
        auto it = weights.find(c);
        return it == weights.end() ? std::uint64_t{1} : it->second;
    };
    std::vector<std::size_t> dim(k), stride(k);
    std::size_t cells = 1;
    for (unsigned m = k; m-- > 0;) {
        dim[m] = strings[m].size() + 1;
        stride[m] = cells;
        cells *= dim[m];
    }
    std::vector<std::uint64_t> len(cells, 0), cnt(cells, 0);
    std::vector<std::size_t> v(k, 0);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        if (std::any_of(v.begin(), v.end(), [](std::size_t x) { return x == 0; })) {
            cnt[idx] = 1 % R;
        } else {
            std::size_t all_back = idx;
            for (unsigned m = 0; m < k; ++m) all_back -= stride[m];
            bool match = true;
            for (unsigned m = 1; m < k; ++m) match = match && strings[m][v[m] - 1] == strings[0][v[0] - 1];
            std::uint64_t best = 0;
            if (match) {
                best = len[all_back] + weight(strings[0][v[0] - 1]);
            } else {
                for (unsigned J = 1; J < (1U << k); ++J) {
                    std::size_t u = idx;
                    for (unsigned m = 0; m < k; ++m) {
                        if ((J >> m) & 1U) u -= stride[m];
                    }
                    best = std::max(best, len[u]);
                }
            }
            // Optimal alignments avoiding the last position of some string, by inclusion-exclusion
            // over which strings' last positions are avoided.
            std::uint64_t c = match ? cnt[all_back] : 0;
            for (unsigned J = 1; J < (1U << k); ++J) {
                std::size_t u = idx;
                for (unsigned m = 0; m < k; ++m) {
                    if ((J >> m) & 1U) u -= stride[m];
                }
                if (len[u] != best) continue;
                c = (__builtin_popcount(J) % 2 == 1) ? add_mod_r(c, cnt[u], R) : sub_mod_r(c, cnt[u], R);
            }
            len[idx] = best;
            cnt[idx] = c;
        }
        for (unsigned m = k; m-- > 0;) {
            if (++v[m] < dim[m]) break;
            v[m] = 0;
        }
    }
    return {len[cells - 1], cnt[cells - 1]};
}

LcsResult count_klcs(const std::vector<std::string>& strings, std::uint64_t R) { return count_kwlcs(strings, {}, R); }

std::pair<std::uint64_t, BigInt> count_kwlcs_brute(const std::vector<std::string>& strings,
                                                   const std::map<char, std::uint64_t>& weights) {
    if (strings.empty()) throw Error(Errc::invalid_parameters, "need at least one string");
    std::vector<std::map<std::string, BigInt>> spelled(strings.size());
    for (std::size_t m = 0; m < strings.size(); ++m) {
        const std::string& s = strings[m];
        if (s.size() > 20) throw Error(Errc::invalid_parameters, "strings too long for enumeration");
        for (std::uint32_t mask = 0; mask < (1U << s.size()); ++mask) {
            std::string sub;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if ((mask >> i) & 1U) sub += s[i];
            }
            ++spelled[m][sub];
        }
    }
    std::uint64_t best = 0;
    BigInt count = 0;
    for (const auto& [sub, c0] : spelled[0]) {
        BigInt c = c0;
        for (std::size_t m = 1; m < strings.size() && c != 0; ++m) {
            auto it = spelled[m].find(sub);
            c = it == spelled[m].end() ? BigInt(0) : c * it->second;
        }
        if (c == 0) continue;
        std::uint64_t w = 0;
        for (char ch : sub) {
            auto it = weights.find(ch);
            w += it == weights.end() ? 1 : it->second;
        }
        if (w > best) {
            best = w;
            count = c;
        } else if (w == best) {
            count += c;
        }
    }
    return {best, count};
}

}  // namespace facred
