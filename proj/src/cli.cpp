#include "facred/cli.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "facred/avgov.hpp"
#include "facred/corrector.hpp"
#include "facred/error.hpp"
#include "facred/factored.hpp"
#include "facred/instance_io.hpp"
#include "facred/seqalign.hpp"
#include "facred/subgraphs.hpp"
#include "facred/wc2ac.hpp"
#include "facred/xforms.hpp"
#include "facred/zkc.hpp"

namespace facred {
namespace {

constexpr std::uint64_t kDefaultModulus = 1'000'000'007;
constexpr std::uint64_t kBruteCap = 200'000'000;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Json big_json(const BigInt& v) {
    if (v <= BigInt(std::numeric_limits<std::int64_t>::max())) return static_cast<std::int64_t>(v);
    return to_string(v);
}

// Runs body(i) for i < count on up to jobs threads. Results must be written by index so the
// outcome does not depend on jobs.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
    return substream_seed(seed, "trial/" + std::to_string(trial));
}

// Shared bookkeeping for commands that repeat a randomized experiment.
struct TrialLog {
    std::vector<Json> outcomes;
    std::vector<char> ok;

    explicit TrialLog(std::size_t trials) : outcomes(trials), ok(trials, 0) {}

    void fill(Json& report) const {
        std::size_t matches = 0;
        Json disagreements = Json::array();
        for (std::size_t i = 0; i < ok.size(); ++i) {
            if (ok[i]) {
                ++matches;
            } else {
                disagreements.push_back(i);
            }
        }
        report["trials"] = outcomes;
        report["matches"] = matches;
        report["trial_count"] = ok.size();
        report["success_frequency"] = ok.empty() ? 0.0 : static_cast<double>(matches) / static_cast<double>(ok.size());
        report["disagreements"] = disagreements;
    }
};

// ---------------------------------------------------------------------------------------------
// Plain k-OV and k-SUM inputs.

std::vector<std::vector<BitString>> kov_from_json(const Json& j) {
    std::vector<std::vector<BitString>> lists;
    for (const Json& l : j.at("lists")) {
        auto& out = lists.emplace_back();
        for (const Json& v : l) out.push_back(BitString::from_text(v.get<std::string>()));
    }
    return lists;
}

Json kov_to_json(const std::vector<std::vector<BitString>>& lists, unsigned d) {
    Json lj = Json::array();
    for (const auto& l : lists) {
        Json vs = Json::array();
        for (const auto& v : l) vs.push_back(v.text());
        lj.push_back(vs);
    }
    return {{"kind", "kov"}, {"d", d}, {"lists", lj}};
}

BigInt brute_kov(const std::vector<std::vector<BitString>>& lists) {
    if (lists.empty()) return 0;
    BigInt total = 0;
    std::vector<std::size_t> idx(lists.size(), 0);
    for (const auto& l : lists) {
        if (l.empty()) return 0;
    }
    while (true) {
        BitString acc = lists[0][idx[0]];
        for (std::size_t i = 1; i < lists.size(); ++i) acc = acc & lists[i][idx[i]];
        if (acc.is_zero()) ++total;
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == lists[pos].size()) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    return total;
}

BigInt brute_ksum(const std::vector<std::vector<std::int64_t>>& lists) {
    if (lists.empty()) return 0;
    for (const auto& l : lists) {
        if (l.empty()) return 0;
    }
    BigInt total = 0;
    std::vector<std::size_t> idx(lists.size(), 0);
    while (true) {
        BigInt s = 0;
        for (std::size_t i = 0; i < lists.size(); ++i) s += lists[i][idx[i]];
        if (s == 0) ++total;
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == lists[pos].size()) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    return total;
}

// ---------------------------------------------------------------------------------------------
// Expansion oracles: every factored vector is unrolled into its full strings.

using Expanded = std::vector<std::vector<BitString>>;  // full strings, each as its g group strings

Expanded expand(const FactoredVector& v) {
    Expanded out{{}};
    for (const StringSet& s : v.groups) {
        Expanded next;
        for (const auto& prefix : out) {
            for (const BitString& x : s.items()) {
                next.push_back(prefix);
                next.back().push_back(x);
            }
        }
        out = std::move(next);
    }
    return out;
}

// Number of accepted full-string tuples, one string from each expansion.
std::uint64_t count_expanded(const std::vector<const Expanded*>& parts, unsigned g, const Predicate& pred,
                             std::uint64_t& work) {
    for (const Expanded* e : parts) {
        if (e->empty()) return 0;
    }
    std::uint64_t hits = 0;
    std::vector<std::size_t> idx(parts.size(), 0);
    std::vector<BitString> tuple(parts.size());
    while (true) {
        if (++work > kBruteCap) throw Error(Errc::expansion_cap_exceeded, "expansion oracle over budget");
        bool all = true;
        for (unsigned grp = 0; grp < g && all; ++grp) {
            for (std::size_t i = 0; i < parts.size(); ++i) tuple[i] = (*parts[i])[idx[i]][grp];
            all = pred.accepts(tuple);
        }
        hits += all;
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == parts[pos]->size()) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    return hits;
}

BigInt brute_fkf(const FkfInstance& inst) {
    validate(inst);
    std::vector<std::vector<Expanded>> ex(inst.k);
    for (unsigned l = 0; l < inst.k; ++l) {
        for (const auto& v : inst.lists[l]) ex[l].push_back(expand(v));
    }
    const std::size_t n = inst.n();
    if (n == 0) return 0;
    BigInt total = 0;
    std::uint64_t work = 0;
    std::vector<std::size_t> idx(inst.k, 0);
    std::vector<const Expanded*> parts(inst.k);
    while (true) {
        for (unsigned l = 0; l < inst.k; ++l) parts[l] = &ex[l][idx[l]];
        total += count_expanded(parts, inst.g, inst.pred, work);
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == n) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    return total;
}

BigInt brute_ffkc(const FfkcInstance& inst) {
    validate(inst);
    const unsigned pairs = pair_count(inst.k);
    std::vector<std::vector<std::optional<Expanded>>> ex(pairs);
    for (unsigned q = 0; q < pairs; ++q) {
        for (const auto& e : inst.edges[q]) ex[q].push_back(e ? std::optional<Expanded>(expand(*e)) : std::nullopt);
    }
    BigInt total = 0;
    std::uint64_t work = 0;
    std::vector<std::size_t> node(inst.k, 0);
    std::vector<const Expanded*> parts(pairs);
    while (true) {
        bool present = true;
        for (unsigned a = 0; a < inst.k && present; ++a) {
            for (unsigned c = a + 1; c < inst.k && present; ++c) {
                const unsigned q = pair_index(a, c, inst.k);
                const auto& e = ex[q][node[a] * inst.n + node[c]];
                present = e.has_value();
                if (present) parts[q] = &*e;
            }
        }
        if (present) total += count_expanded(parts, inst.g, inst.pred, work);
        std::size_t pos = 0;
        while (pos < node.size() && ++node[pos] == inst.n) node[pos++] = 0;
        if (pos == node.size()) break;
    }
    return total;
}

BigInt brute_pmt(const PmtInstance& inst) {
    using Triple = std::array<std::uint32_t, 3>;
    std::vector<std::vector<Triple>> tris;
    for (const ColoredGraph& g : inst.graphs) {
        std::set<std::pair<std::uint32_t, std::uint32_t>> e;
        for (auto [a, b] : g.edges) e.insert({std::min(a, b), std::max(a, b)});
        auto& list = tris.emplace_back();
        for (std::uint32_t a = 0; a < g.nodes; ++a) {
            for (std::uint32_t b = a + 1; b < g.nodes; ++b) {
                for (std::uint32_t c = b + 1; c < g.nodes; ++c) {
                    if (!e.count({a, b}) || !e.count({a, c}) || !e.count({b, c})) continue;
                    Triple col{g.color[a], g.color[b], g.color[c]};
                    std::sort(col.begin(), col.end());
                    if (col[0] != col[1] && col[1] != col[2]) list.push_back(col);
                }
            }
        }
    }
    if (tris.empty()) return 0;
    for (const auto& l : tris) {
        if (l.empty()) return 0;
    }
    BigInt total = 0;
    std::uint64_t work = 0;
    std::vector<std::size_t> idx(tris.size(), 0);
    while (true) {
        if (++work > kBruteCap) throw Error(Errc::expansion_cap_exceeded, "triangle product over budget");
        bool same = true;
        for (std::size_t i = 1; i < tris.size() && same; ++i) same = tris[i][idx[i]] == tris[0][idx[0]];
        if (same) ++total;
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == tris[pos].size()) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    return total;
}

// ---------------------------------------------------------------------------------------------
// Instances read from disk, tagged by "kind".

struct Loaded {
    std::string kind;
    Json raw;
};

Loaded load(const std::string& path) {
    Loaded l;
    l.raw = read_json_file(path);
    if (!l.raw.is_object() || !l.raw.contains("kind")) throw Error(Errc::parse_error, path + ": missing \"kind\"");
    l.kind = l.raw.at("kind").get<std::string>();
    return l;
}

std::vector<std::vector<std::int64_t>> ksum_lists(const Json& j) {
    return j.at("lists").get<std::vector<std::vector<std::int64_t>>>();
}

BigInt fast_count(const Json& j, std::uint64_t seed) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fkf") return count_fkf(fkf_from_json(j));
    if (kind == "ffkc") return count_ffkc(ffkc_from_json(j));
    if (kind == "zkc") return count_via_detection(zkc_from_json(j), exact_detector(), seed);
    if (kind == "kov") return count_kov(kov_from_json(j));
    if (kind == "ksum") return count_ksum(ksum_lists(j));
    if (kind == "pmt") return count_pmt(pmt_from_json(j));
    if (kind == "family") {
        BigInt total = 0;
        for (const Json& m : j.at("members")) total += fast_count(m, seed);
        return total;
    }
    throw Error(Errc::parse_error, "unknown instance kind '" + kind + "'");
}

BigInt brute_count_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fkf") return brute_fkf(fkf_from_json(j));
    if (kind == "ffkc") return brute_ffkc(ffkc_from_json(j));
    if (kind == "zkc") return brute_count(zkc_from_json(j));
    if (kind == "kov") return brute_kov(kov_from_json(j));
    if (kind == "ksum") return brute_ksum(ksum_lists(j));
    if (kind == "pmt") return brute_pmt(pmt_from_json(j));
    if (kind == "family") {
        BigInt total = 0;
        for (const Json& m : j.at("members")) total += brute_count_json(m);
        return total;
    }
    throw Error(Errc::parse_error, "unknown instance kind '" + kind + "'");
}

Detector parse_detector(const std::string& spec, std::uint64_t seed) {
    if (spec == "exact") return exact_detector();
    if (spec == "true") return [](const ZkcInstance&) { return true; };
    if (spec.rfind("noisy:", 0) == 0) {
        const double p = std::stod(spec.substr(6));
        return noisy_detector(p, substream_seed(seed, "detector"));
    }
    throw Error(Errc::invalid_parameters, "detector must be exact, true or noisy:<p>");
}

Json clique_json(const std::optional<Clique>& c) {
    if (!c) return nullptr;
    return *c;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

std::string to_upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

bool is_sum(PredKind k) { return k == PredKind::SUM_ZERO || k == PredKind::SUM_TARGET; }

struct Session {
    std::ostream& out;
    std::ostream& err;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string command;

    Json report(const char* name) const {
        return {{"command", command}, {"subcommand", name}, {"seed", seed}};
    }
    void emit(const Json& j) const { out << j.dump(2) << '\n'; }
};

// ---------------------------------------------------------------------------------------------
// Subcommands.

struct GenOpts {
    std::string kind = "fkf";
    std::string pred = "OV";
    unsigned k = 2, g = 1, b = 2, d = 4;
    std::size_t n = 4;
    double mu = 0.5;
    std::uint64_t R = 0, bound = 8;
    std::string out;
};

Json generate(const GenOpts& o, std::uint64_t seed) {
    if (o.kind == "fkf") {
        return to_json(gen_fkf(o.n, o.k, o.g, o.b, o.mu, seed, make_predicate(parse_pred_kind(to_upper(o.pred)), o.k)));
    }
    if (o.kind == "ffkc") {
        const Predicate p = make_predicate(parse_pred_kind(to_upper(o.pred)), pair_count(o.k));
        return to_json(gen_ffkc(o.n, o.k, o.g, o.b, o.mu, seed, p));
    }
    if (o.kind == "zkc") {
        std::uint64_t R = o.R;
        if (R == 0) {
            R = 1;
            for (unsigned i = 0; i < o.k; ++i) R *= o.n;
        }
        return to_json(gen_aczkc(o.n, o.k, R, seed));
    }
    if (o.kind == "kov") {
        Rng rng = substream(seed, "gen_kov");
        std::vector<std::vector<BitString>> lists(o.k);
        for (auto& l : lists) {
            for (std::size_t i = 0; i < o.n; ++i) {
                BitString v(o.d);
                for (unsigned t = 0; t < o.d; ++t) v.set_bit(t, bernoulli(rng, o.mu));
                l.push_back(v);
            }
        }
        return kov_to_json(lists, o.d);
    }
    if (o.kind == "ksum") {
        Rng rng = substream(seed, "gen_ksum");
        Json lists = Json::array();
        for (unsigned l = 0; l < o.k; ++l) {
            Json vs = Json::array();
            for (std::size_t i = 0; i < o.n; ++i) {
                vs.push_back(static_cast<std::int64_t>(uniform_below(rng, 2 * o.bound + 1)) -
                             static_cast<std::int64_t>(o.bound));
            }
            lists.push_back(vs);
        }
        return {{"kind", "ksum"}, {"bound", o.bound}, {"lists", lists}};
    }
    throw Error(Errc::invalid_parameters, "unknown kind '" + o.kind + "'");
}

Json reduce_instance(const Json& in, const std::string& to) {
    const std::string kind = in.at("kind").get<std::string>();
    if (kind == "kov" && to == "fkf") return to_json(embed_kov(kov_from_json(in)));
    if (kind == "ksum" && to == "fkf") {
        auto lists = ksum_lists(in);
        std::uint64_t bound = in.value("bound", std::uint64_t{0});
        for (const auto& l : lists) {
            for (std::int64_t v : l) bound = std::max<std::uint64_t>(bound, static_cast<std::uint64_t>(v < 0 ? -v : v));
        }
        Json members = Json::array();
        for (const FkfInstance& m : embed_ksum(lists, bound)) members.push_back(to_json(m));
        return {{"kind", "family"}, {"members", members}};
    }
    if (kind == "fkf") {
        const FkfInstance inst = fkf_from_json(in);
        if (to == "xor") return to_json(f_to_xor(inst));
        if (to == "ov" && inst.pred.kind == PredKind::XOR) return to_json(xor_to_ov(inst));
        if (to == "sum") return to_json(inst.pred.kind == PredKind::XOR ? xor_to_sum(inst) : f_to_sum(inst));
        if (to == "zkc" && is_sum(inst.pred.kind)) return to_json(sum_to_zkc(inst));
    }
    if (kind == "ffkc") {
        const FfkcInstance inst = ffkc_from_json(in);
        if (to == "fzkc") return to_json(ffkc_to_fzkc(inst));
        if (to == "pmt" && inst.k == 3 && is_sum(inst.pred.kind)) return to_json(fzkc3_to_pmt(inst));
    }
    throw Error(Errc::invalid_parameters, "no reduction from " + kind + " to " + to);
}

struct Check {
    std::string name;
    BigInt fast, oracle;
    std::optional<std::uint64_t> modulus;

    bool match() const { return modulus ? mod_of(fast, *modulus) == mod_of(oracle, *modulus) : fast == oracle; }
    Json json() const {
        Json j{{"name", name}, {"fast", big_json(fast)}, {"oracle", big_json(oracle)}, {"match", match()}};
        if (modulus) j["modulus"] = *modulus;
        return j;
    }
};

std::vector<Check> verify_instance(const Json& j, std::uint64_t seed) {
    const std::string kind = j.at("kind").get<std::string>();
    std::vector<Check> checks;
    if (kind == "fkf") {
        const FkfInstance inst = fkf_from_json(j);
        const BigInt oracle = brute_fkf(inst);
        const BigInt fast = count_fkf(inst);
        checks.push_back({"count_fkf", fast, oracle, std::nullopt});
        if (inst.k == 2 && inst.b <= 3 && inst.pred.kind != PredKind::TABLE) {
            const PairIndicatorCounter counter(FkfShape{inst.n(), 2, inst.g, inst.b}, inst.pred);
            checks.push_back({"indicator_counter", counter(indicator(inst)), oracle, std::nullopt});
        }
        if (inst.k == 2 && inst.pred.kind == PredKind::OV && inst.n() > 0) {
            const RegexInstance r = fkov2_to_regex(inst);
            checks.push_back({"regex_matches", count_matches(r.pattern, r.text, kDefaultModulus), oracle, kDefaultModulus});
        }
    } else if (kind == "ffkc") {
        const FfkcInstance inst = ffkc_from_json(j);
        const BigInt oracle = brute_ffkc(inst);
        checks.push_back({"count_ffkc", count_ffkc(inst), oracle, std::nullopt});
        if (inst.k == 3 && is_sum(inst.pred.kind) && inst.b <= 12) {
            checks.push_back({"pmt", count_pmt(fzkc3_to_pmt(inst)), oracle, std::nullopt});
        }
    } else if (kind == "zkc") {
        const ZkcInstance inst = zkc_from_json(j);
        const BigInt oracle = brute_count(inst);
        checks.push_back({"count_via_detection", count_via_detection(inst, exact_detector(), seed), oracle, std::nullopt});
        if (inst.R <= 64) checks.push_back({"count_small_range", count_small_range(inst), oracle, std::nullopt});
    } else if (kind == "kov" || kind == "ksum" || kind == "pmt" || kind == "family") {
        checks.push_back({"count_" + kind, fast_count(j, seed), brute_count_json(j), std::nullopt});
    } else {
        throw Error(Errc::parse_error, "unknown instance kind '" + kind + "'");
    }
    return checks;
}

std::map<char, std::uint64_t> parse_weights(const std::string& text) {
    std::map<char, std::uint64_t> w;
    if (text.empty()) return w;
    for (const std::string& item : split_list(text, ',')) {
        if (item.size() < 3 || item[1] != '=') throw Error(Errc::parse_error, "weights look like a=1,b=2");
        w[item[0]] = std::stoull(item.substr(2));
    }
    return w;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    Session s{out, err, 0, 1, {}};
    for (const auto& a : args) s.command += (s.command.empty() ? "" : " ") + a;

    CLI::App app{"Factored problems, reductions and average-case counting experiments", "facred"};
    app.require_subcommand(1);
    app.add_option("--seed", s.seed, "Master seed")->envname("FACRED_SEED");
    app.add_option("--jobs", s.jobs, "Worker threads for trial loops")->check(CLI::Range(1U, 256U));

    auto sub = [&](const char* name, const char* desc) {
        CLI::App* c = app.add_subcommand(name, desc);
        c->fallthrough();
        return c;
    };
    std::function<int()> action;

    // gen
    GenOpts gen;
    CLI::App* c_gen = sub("gen", "Generate a random instance");
    c_gen->add_option("--kind", gen.kind, "fkf, ffkc, zkc, kov or ksum")
        ->check(CLI::IsMember({"fkf", "ffkc", "zkc", "kov", "ksum"}));
    c_gen->add_option("--pred", gen.pred, "OV, XOR, SUM_ZERO or SUM_TARGET");
    c_gen->add_option("--k", gen.k)->check(CLI::Range(1U, 8U));
    c_gen->add_option("--g", gen.g)->check(CLI::Range(1U, 64U));
    c_gen->add_option("--b", gen.b)->check(CLI::Range(1U, 64U));
    c_gen->add_option("--d", gen.d, "vector length for kov")->check(CLI::Range(1U, BitString::kMaxWidth));
    c_gen->add_option("--n", gen.n);
    c_gen->add_option("--mu", gen.mu)->check(CLI::Range(0.0, 1.0));
    c_gen->add_option("--R", gen.R, "zkc modulus (default n^k)");
    c_gen->add_option("--bound", gen.bound, "ksum magnitude bound");
    c_gen->add_option("--out", gen.out, "write here instead of stdout");
    c_gen->callback([&] {
        action = [&] {
            const Json inst = generate(gen, substream_seed(s.seed, "gen"));
            if (gen.out.empty()) {
                s.emit(inst);
            } else {
                write_json_file(gen.out, inst);
            }
            return 0;
        };
    });

    // count
    std::string count_path, count_method = "fast";
    CLI::App* c_count = sub("count", "Count solutions of an instance");
    c_count->add_option("--instance", count_path)->required();
    c_count->add_option("--method", count_method)->check(CLI::IsMember({"fast", "brute"}));
    c_count->callback([&] {
        action = [&] {
            const Loaded l = load(count_path);
            const auto t0 = Clock::now();
            const BigInt v = count_method == "fast" ? fast_count(l.raw, s.seed) : brute_count_json(l.raw);
            Json r = s.report("count");
            r["kind"] = l.kind;
            r["method"] = count_method;
            r["count"] = big_json(v);
            r["seconds"] = seconds_since(t0);
            s.emit(r);
            return 0;
        };
    });

    // detect
    std::string detect_path, detect_detector = "exact";
    double detect_eps = 0.5;
    CLI::App* c_detect = sub("detect", "Decide whether an instance has a solution");
    c_detect->add_option("--instance", detect_path)->required();
    c_detect->add_option("--detector", detect_detector, "zkc detector: exact, true or noisy:<p>");
    c_detect->add_option("--epsilon", detect_eps, "zkc split exponent")->check(CLI::Range(0.0, 1.0));
    c_detect->callback([&] {
        action = [&] {
            const Loaded l = load(detect_path);
            const auto t0 = Clock::now();
            Json r = s.report("detect");
            r["kind"] = l.kind;
            if (l.kind == "zkc") {
                const ZkcInstance inst = zkc_from_json(l.raw);
                const auto w = search_via_detection(inst, parse_detector(detect_detector, s.seed), detect_eps,
                                                    substream_seed(s.seed, "search"));
                r["found"] = w.has_value();
                r["witness"] = clique_json(w);
                r["witness_verified"] = w ? is_zero_clique(inst, *w) : false;
            } else {
                r["found"] = fast_count(l.raw, s.seed) != 0;
            }
            r["seconds"] = seconds_since(t0);
            s.emit(r);
            return 0;
        };
    });

    // reduce
    std::string red_path, red_from, red_to, red_out;
    bool red_check = false;
    CLI::App* c_reduce = sub("reduce", "Apply a count-preserving reduction");
    c_reduce->add_option("--instance", red_path)->required();
    c_reduce->add_option("--from", red_from, "expected input kind");
    c_reduce->add_option("--to", red_to)->required()->check(
        CLI::IsMember({"fkf", "xor", "ov", "sum", "zkc", "fzkc", "pmt"}));
    c_reduce->add_option("--out", red_out);
    c_reduce->add_flag("--check", red_check, "compare counts before and after");
    c_reduce->callback([&] {
        action = [&] {
            const Loaded l = load(red_path);
            if (!red_from.empty() && red_from != l.kind) {
                throw Error(Errc::invalid_parameters, "instance kind is " + l.kind + ", not " + red_from);
            }
            const auto t0 = Clock::now();
            const Json reduced = reduce_instance(l.raw, red_to);
            Json r = s.report("reduce");
            r["from"] = l.kind;
            r["to"] = red_to;
            r["output_kind"] = reduced.at("kind");
            r["seconds"] = seconds_since(t0);
            int status = 0;
            if (red_check) {
                const BigInt before = fast_count(l.raw, s.seed), after = fast_count(reduced, s.seed);
                r["count_before"] = big_json(before);
                r["count_after"] = big_json(after);
                r["match"] = before == after;
                if (before != after) status = 1;
            }
            if (red_out.empty()) {
                r["output"] = reduced;
            } else {
                write_json_file(red_out, reduced);
                r["output_file"] = red_out;
            }
            s.emit(r);
            return status;
        };
    });

    // framework-demo
    std::string fw_problem = "fkov2";
    std::size_t fw_n = 8, fw_trials = 1;
    unsigned fw_g = 2, fw_b = 2;
    double fw_rate = 0.0, fw_mu = 0.5;
    CLI::App* c_fw = sub("framework-demo", "Worst-case counting through an average-case oracle");
    c_fw->add_option("--problem", fw_problem)->check(CLI::IsMember({"fkov2", "fkxor2"}));
    c_fw->add_option("--n", fw_n)->check(CLI::Range(std::size_t{1}, std::size_t{64}));
    c_fw->add_option("--g", fw_g)->check(CLI::Range(1U, 4U));
    c_fw->add_option("--b", fw_b)->check(CLI::Range(1U, 3U));
    c_fw->add_option("--mu", fw_mu, "bias of the worst-case instance generator")->check(CLI::Range(0.0, 1.0));
    c_fw->add_option("--error-rate", fw_rate, "per-call oracle error probability")->check(CLI::Range(0.0, 1.0));
    c_fw->add_option("--trials", fw_trials);
    c_fw->callback([&] {
        action = [&] {
            const Predicate pred = make_predicate(fw_problem == "fkov2" ? PredKind::OV : PredKind::XOR, 2);
            const FkfFramework fw = make_fkf_framework(fw_n, fw_g, fw_b, pred);
            const GoodPolyProblem gpp = fw.problem();
            const PipelineConfig cfg = desk_pipeline_config(gpp.d);
            TrialLog log(fw_trials);
            const auto t0 = Clock::now();
            parallel_for(fw_trials, s.jobs, [&](std::size_t t) {
                const std::uint64_t ts = trial_seed(s.seed, t);
                const FkfInstance inst = gen_fkf(fw_n, 2, fw_g, fw_b, fw_mu, ts, pred);
                const BigInt truth = count_fkf(inst);
                const AvgSolver A =
                    fw_rate > 0 ? fw.noisy_solver(fw_rate, substream_seed(ts, "oracle")) : fw.exact_solver();
                Rng rng = substream(ts, "pipeline");
                const auto t1 = Clock::now();
                Json o{{"trial", t}, {"expected", big_json(truth)}};
                try {
                    const WorstCaseReport rep = solve_worst_case(indicator(inst), gpp, A, rng, cfg);
                    o["value"] = big_json(rep.value);
                    o["oracle_calls"] = rep.oracle_calls;
                    o["correction_runs"] = rep.correction_runs;
                    o["failed_runs"] = rep.failed_runs;
                    log.ok[t] = rep.value == truth;
                } catch (const Error& e) {
                    o["error"] = std::string(errc_name(e.code()));
                }
                o["match"] = static_cast<bool>(log.ok[t]);
                o["seconds"] = seconds_since(t1);
                log.outcomes[t] = o;
            });
            Json r = s.report("framework-demo");
            r["problem"] = fw_problem;
            r["params"] = {{"n", fw_n}, {"g", fw_g}, {"b", fw_b}, {"d", gpp.d}, {"error_rate", fw_rate},
                           {"curve_points", cfg.curve_points}, {"sampler_C", cfg.sampler_C}};
            log.fill(r);
            r["seconds"] = seconds_since(t0);
            s.emit(r);
            return 0;
        };
    });

    // correct-demo
    unsigned cd_d = 3, cd_vars = 2, cd_reps = 25, cd_m = 0;
    std::uint64_t cd_p = 101;
    std::size_t cd_trials = 1000, cd_monomials = 12;
    double cd_rate = 0.1;
    CLI::App* c_cd = sub("correct-demo", "Self-correction of a planted-corruption polynomial oracle");
    c_cd->add_option("--d", cd_d)->check(CLI::Range(1U, 16U));
    c_cd->add_option("--p", cd_p);
    c_cd->add_option("--m", cd_m, "curve points (default 12d + 1)");
    c_cd->add_option("--vars", cd_vars, "variables per partition")->check(CLI::Range(1U, 64U));
    c_cd->add_option("--monomials", cd_monomials);
    c_cd->add_option("--corruption", cd_rate)->check(CLI::Range(0.0, 1.0));
    c_cd->add_option("--trials", cd_trials);
    c_cd->add_option("--reps", cd_reps, "amplification repetitions")->check(CLI::Range(1U, 1000U));
    c_cd->callback([&] {
        action = [&] {
            if (!is_prime(cd_p)) throw Error(Errc::invalid_parameters, "p must be prime");
            CorrectionParams params{cd_d, cd_p, 0.25, cd_m};
            params.validate();
            Rng prng = substream(s.seed, "polynomial");
            const PartitePolynomial f = random_partite_poly(cd_d, cd_vars, cd_p, cd_monomials, prng);
            FieldOracle truth = [&f](std::span<const std::uint64_t> x) { return evaluate(f, x); };
            const FieldOracle oracle = planted_oracle(truth, cd_p, cd_rate, substream_seed(s.seed, "corruption"));
            std::vector<char> single(cd_trials, 0), amplified(cd_trials, 0);
            const auto t0 = Clock::now();
            parallel_for(cd_trials, s.jobs, [&](std::size_t t) {
                Rng rng = substream(trial_seed(s.seed, t), "correct");
                std::vector<std::uint64_t> x(f.n_vars());
                for (auto& v : x) v = uniform_below(rng, cd_p);
                const std::uint64_t want = evaluate(f, x);
                try {
                    single[t] = correct(x, oracle, params, rng) == want;
                } catch (const Error&) {
                }
                try {
                    amplified[t] = amplify([&] { return correct(x, oracle, params, rng); }, cd_reps) == want;
                } catch (const Error&) {
                }
            });
            const auto freq = [](const std::vector<char>& v) {
                return v.empty() ? 0.0 : static_cast<double>(std::count(v.begin(), v.end(), 1)) / static_cast<double>(v.size());
            };
            Json r = s.report("correct-demo");
            r["params"] = {{"d", cd_d}, {"p", cd_p}, {"m", params.curve_points()}, {"corruption", cd_rate},
                           {"reps", cd_reps}, {"n_vars", f.n_vars()}, {"monomials", f.monomials().size()},
                           {"below_asymptotic_regime", params.below_asymptotic_regime()}};
            r["trial_count"] = cd_trials;
            r["single_success_frequency"] = freq(single);
            r["amplified_success_frequency"] = freq(amplified);
            r["seconds"] = seconds_since(t0);
            s.emit(r);
            return 0;
        };
    });

    // zkc
    std::string z_action = "count", z_detector = "exact", z_path;
    std::size_t z_n = 12, z_trials = 1;
    unsigned z_k = 3;
    std::uint64_t z_R = 0;
    double z_eps = 0.5;
    CLI::App* c_zkc = sub("zkc", "Average-case zero-k-clique tools");
    c_zkc->add_option("action", z_action, "gen, count, detect or pipeline")
        ->check(CLI::IsMember({"gen", "count", "detect", "pipeline"}));
    c_zkc->add_option("--n", z_n)->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
    c_zkc->add_option("--k", z_k)->check(CLI::Range(2U, 8U));
    c_zkc->add_option("--R", z_R, "weight modulus (default n^k)");
    c_zkc->add_option("--detector", z_detector, "exact, true or noisy:<p>");
    c_zkc->add_option("--epsilon", z_eps)->check(CLI::Range(0.0, 1.0));
    c_zkc->add_option("--trials", z_trials);
    c_zkc->add_option("--instance", z_path, "use this instance instead of generating one");
    c_zkc->callback([&] {
        action = [&] {
            std::uint64_t R = z_R;
            if (R == 0) {
                R = 1;
                for (unsigned i = 0; i < z_k; ++i) R *= z_n;
            }
            const auto make = [&](std::uint64_t ts) {
                return z_path.empty() ? gen_aczkc(z_n, z_k, R, substream_seed(ts, "zkc")) : zkc_from_json(read_json_file(z_path));
            };
            if (z_action == "gen") {
                s.emit(to_json(make(s.seed)));
                return 0;
            }
            Json r = s.report("zkc");
            r["action"] = z_action;
            const auto t0 = Clock::now();
            if (z_action == "detect") {
                const ZkcInstance inst = make(s.seed);
                const auto w = search_via_detection(inst, parse_detector(z_detector, s.seed), z_eps,
                                                    substream_seed(s.seed, "search"));
                r["found"] = w.has_value();
                r["witness"] = clique_json(w);
                r["brute_found"] = brute_search(inst).has_value();
            } else {
                const std::size_t trials = z_action == "count" ? 1 : z_trials;
                TrialLog log(trials);
                parallel_for(trials, s.jobs, [&](std::size_t t) {
                    const std::uint64_t ts = trials == 1 ? s.seed : trial_seed(s.seed, t);
                    const ZkcInstance inst = make(ts);
                    ChainStats st;
                    const std::uint64_t got =
                        count_via_detection(inst, parse_detector(z_detector, ts), substream_seed(ts, "chain"), &st);
                    const std::uint64_t want = brute_count(inst);
                    log.ok[t] = got == want;
                    log.outcomes[t] = {{"trial", t}, {"count", got}, {"brute", want}, {"match", got == want},
                                       {"path", st.path}, {"detector_calls", st.detector_calls},
                                       {"search_calls", st.search_calls}, {"subinstances", st.subinstances}};
                });
                log.fill(r);
            }
            r["params"] = {{"n", z_n}, {"k", z_k}, {"R", R}, {"detector", z_detector}};
            r["seconds"] = seconds_since(t0);
            s.emit(r);
            return 0;
        };
    });

    // avgov
    std::size_t ov_n = 64, ov_trials = 1;
    unsigned ov_d = 8;
    double ov_mu = 0.5;
    CLI::App* c_ov = sub("avgov", "Average-case orthogonal vectors counting");
    c_ov->add_option("--n", ov_n);
    c_ov->add_option("--d", ov_d)->check(CLI::Range(1U, BitString::kMaxWidth));
    c_ov->add_option("--mu", ov_mu)->check(CLI::Range(0.0, 1.0));
    c_ov->add_option("--trials", ov_trials);
    c_ov->callback([&] {
        action = [&] {
            TrialLog log(ov_trials);
            std::vector<char> zero(ov_trials, 0);
            const auto t0 = Clock::now();
            parallel_for(ov_trials, s.jobs, [&](std::size_t t) {
                const OvInstance inst = gen_ov(ov_n, ov_d, ov_mu, trial_seed(s.seed, t));
                const std::uint64_t fast = count_ov_avg(inst), brute = brute_count_ov(inst);
                log.ok[t] = fast == brute;
                zero[t] = brute == 0;
                log.outcomes[t] = {{"trial", t}, {"count", fast}, {"brute", brute}, {"match", fast == brute}};
            });
            Json r = s.report("avgov");
            r["params"] = {{"n", ov_n}, {"d", ov_d}, {"mu", ov_mu}};
            r["threshold"] = ov_threshold(ov_n, ov_mu);
            r["long_regime"] = ov_d >= ov_threshold(ov_n, ov_mu);
            r["zero_fraction"] =
                ov_trials ? static_cast<double>(std::count(zero.begin(), zero.end(), 1)) / static_cast<double>(ov_trials) : 0.0;
            log.fill(r);
            r["seconds"] = seconds_since(t0);
            s.emit(r);
            return 0;
        };
    });

    // subgraph
    std::string sg_pattern = "triangle", sg_oracle = "brute";
    std::size_t sg_n = 5, sg_trials = 1;
    unsigned sg_b = 2;
    CLI::App* c_sg = sub("subgraph", "Labeled subgraph counting through random-graph oracles");
    c_sg->add_option("--pattern", sg_pattern, "triangle, p3, k4 or an edge list like 0-1,1-2");
    c_sg->add_option("--n", sg_n, "nodes per partition")->check(CLI::Range(std::size_t{1}, std::size_t{16}));
    c_sg->add_option("--b", sg_b, "edge probability is 1/b")->check(CLI::Range(2U, 8U));
    c_sg->add_option("--oracle", sg_oracle)->check(CLI::IsMember({"brute"}));
    c_sg->add_option("--trials", sg_trials);
    c_sg->callback([&] {
        action = [&] {
            const Pattern h = parse_pattern(sg_pattern);
            if (static_cast<std::size_t>(h.k) * sg_n > 64) throw Error(Errc::invalid_parameters, "k n must be at most 64");
            TrialLog log(sg_trials);
            const auto t0 = Clock::now();
            parallel_for(sg_trials, s.jobs, [&](std::size_t t) {
                const std::uint64_t ts = trial_seed(s.seed, t);
                const PartitionedGraph g = random_kpartite(h.k, sg_n, sg_b, substream_seed(ts, "graph"), h.mask());
                ErStats st;
                const BigInt got = count_labeled_H_er(g, h, sg_b, brute_oracle(h), substream_seed(ts, "er"), &st);
                const BigInt want = count_chghp_brute(h, g);
                const auto [family, complete] = warm_up_totals(g, h, sg_b, substream_seed(ts, "warm_up"));
                log.ok[t] = got == want && family == complete;
                log.outcomes[t] = {{"trial", t}, {"count", big_json(got)}, {"brute", big_json(want)},
                                   {"match", got == want}, {"warm_up_family", big_json(family)},
                                   {"warm_up_complete", big_json(complete)}, {"oracle_calls", st.oracle_calls}};
            });
            Json r = s.report("subgraph");
            r["params"] = {{"pattern", sg_pattern}, {"k", h.k}, {"n", sg_n}, {"b", sg_b}, {"oracle", sg_oracle}};
            log.fill(r);
            r["seconds"] = seconds_since(t0);
            s.emit(r);
            return 0;
        };
    });

    // regex
    std::string rx_pattern, rx_text, rx_path;
    std::uint64_t rx_mod = kDefaultModulus;
    bool rx_brute = false;
    CLI::App* c_rx = sub("regex", "Count substring matches of a regular expression");
    c_rx->add_option("--pattern", rx_pattern);
    c_rx->add_option("--text", rx_text);
    c_rx->add_option("--instance", rx_path, "2-list OV instance to encode as pattern and text");
    c_rx->add_option("--mod", rx_mod)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
    c_rx->add_flag("--brute", rx_brute, "also count by enumerating substrings");
    c_rx->callback([&] {
        action = [&] {
            Json r = s.report("regex");
            Regex e;
            std::string text = rx_text;
            std::optional<BigInt> expected;
            if (!rx_path.empty()) {
                const FkfInstance inst = fkf_from_json(read_json_file(rx_path));
                const RegexInstance ri = fkov2_to_regex(inst);
                e = ri.pattern;
                text = ri.text;
                expected = count_fkf(inst);
                r["text"] = text;
                r["pattern"] = to_string(e);
            } else {
                if (rx_pattern.empty()) throw Error(Errc::invalid_parameters, "--pattern or --instance is required");
                e = parse_regex(rx_pattern);
            }
            const auto t0 = Clock::now();
            const Nfa m = regex_to_nfa(e);
            const std::uint64_t count = count_matches(m, text, rx_mod);
            r["count"] = count;
            r["modulus"] = rx_mod;
            r["nfa_states"] = m.states;
            r["seconds"] = seconds_since(t0);
            int status = 0;
            if (expected) {
                r["fkf_count"] = big_json(*expected);
                r["match"] = mod_of(*expected, rx_mod) == count;
                if (!r["match"].get<bool>()) status = 1;
            }
            if (rx_brute) {
                const BigInt b = count_matches_brute(e, text);
                r["brute"] = big_json(b);
                r["brute_match"] = mod_of(b, rx_mod) == count;
                if (mod_of(b, rx_mod) != count) status = 1;
            }
            s.emit(r);
            return status;
        };
    });

    // lcs
    std::string lcs_strings, lcs_weights;
    std::uint64_t lcs_mod = kDefaultModulus;
    bool lcs_brute = false;
    CLI::App* c_lcs = sub("lcs", "Length and number of longest (weighted) common subsequences");
    c_lcs->add_option("--strings", lcs_strings, "comma-separated, 1 to 3 strings")->required();
    c_lcs->add_option("--weights", lcs_weights, "per-symbol weights like a=2,b=1 (default all 1)");
    c_lcs->add_option("--mod", lcs_mod)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
    c_lcs->add_flag("--brute", lcs_brute, "also count by enumerating subsequences");
    c_lcs->callback([&] {
        action = [&] {
            const std::vector<std::string> strs = split_list(lcs_strings, ',');
            const auto weights = parse_weights(lcs_weights);
            const auto t0 = Clock::now();
            const LcsResult res = weights.empty() ? count_klcs(strs, lcs_mod) : count_kwlcs(strs, weights, lcs_mod);
            Json r = s.report("lcs");
            r["strings"] = strs;
            r["length"] = res.length;
            r["count"] = res.count;
            r["modulus"] = lcs_mod;
            r["seconds"] = seconds_since(t0);
            int status = 0;
            if (lcs_brute) {
                std::map<char, std::uint64_t> w = weights;
                if (w.empty()) {
                    for (const auto& str : strs) {
                        for (char ch : str) w[ch] = 1;
                    }
                }
                const auto [len, cnt] = count_kwlcs_brute(strs, w);
                const bool ok = len == res.length && mod_of(cnt, lcs_mod) == res.count;
                r["brute"] = {{"length", len}, {"count", big_json(cnt)}, {"match", ok}};
                if (!ok) status = 1;
            }
            s.emit(r);
            return status;
        };
    });

    // verify
    std::string ver_path;
    CLI::App* c_ver = sub("verify", "Cross-check fast counters against brute-force oracles");
    c_ver->add_option("--instance", ver_path)->required();
    c_ver->callback([&] {
        action = [&] {
            const Loaded l = load(ver_path);
            const auto t0 = Clock::now();
            const std::vector<Check> checks = verify_instance(l.raw, s.seed);
            Json r = s.report("verify");
            r["kind"] = l.kind;
            r["count"] = big_json(checks.front().oracle);
            bool all = true;
            Json cj = Json::array();
            for (const Check& c : checks) {
                cj.push_back(c.json());
                all = all && c.match();
            }
            r["checks"] = cj;
            r["match"] = all;
            r["seconds"] = seconds_since(t0);
            s.emit(r);
            return all ? 0 : 1;
        };
    });

    // bench
    std::string bench_problem = "fkf", bench_sizes = "2,4,8";
    std::size_t bench_trials = 3;
    CLI::App* c_bench = sub("bench", "Time fast counters against brute force over sizes");
    c_bench->add_option("--problem", bench_problem)->check(CLI::IsMember({"fkf", "ffkc", "zkc", "avgov", "lcs"}));
    c_bench->add_option("--sizes", bench_sizes, "comma-separated n values");
    c_bench->add_option("--trials", bench_trials);
    c_bench->callback([&] {
        action = [&] {
            std::vector<std::size_t> sizes;
            for (const std::string& x : split_list(bench_sizes, ',')) sizes.push_back(std::stoull(x));
            Json rows = Json::array();
            for (std::size_t n : sizes) {
                std::vector<double> fast_t(bench_trials), brute_t(bench_trials);
                std::vector<char> agree(bench_trials, 0);
                // Timings are taken serially so that they are not skewed by contention.
                for (std::size_t t = 0; t < bench_trials; ++t) {
                    const std::uint64_t ts = substream_seed(trial_seed(s.seed, t), "n=" + std::to_string(n));
                    std::function<BigInt()> fast, brute;
                    if (bench_problem == "fkf") {
                        auto inst = std::make_shared<FkfInstance>(gen_fkf(n, 2, 2, 2, 0.5, ts, make_predicate(PredKind::OV, 2)));
                        fast = [inst] { return count_fkf(*inst); };
                        brute = [inst] { return brute_fkf(*inst); };
                    } else if (bench_problem == "ffkc") {
                        auto inst = std::make_shared<FfkcInstance>(
                            gen_ffkc(n, 3, 1, 2, 0.5, ts, make_predicate(PredKind::SUM_ZERO, 3)));
                        fast = [inst] { return count_ffkc(*inst); };
                        brute = [inst] { return brute_ffkc(*inst); };
                    } else if (bench_problem == "zkc") {
                        auto inst = std::make_shared<ZkcInstance>(gen_aczkc(n, 3, n * n * n, ts));
                        fast = [inst, ts] { return BigInt(count_via_detection(*inst, exact_detector(), ts)); };
                        brute = [inst] { return BigInt(brute_count(*inst)); };
                    } else if (bench_problem == "avgov") {
                        auto inst = std::make_shared<OvInstance>(gen_ov(n, 8, 0.5, ts));
                        fast = [inst] { return BigInt(count_ov_avg(*inst)); };
                        brute = [inst] { return BigInt(brute_count_ov(*inst)); };
                    } else {
                        Rng rng = substream(ts, "strings");
                        std::vector<std::string> strs(3);
                        for (auto& x : strs) {
                            for (std::size_t i = 0; i < n; ++i) x.push_back(static_cast<char>('a' + uniform_below(rng, 3)));
                        }
                        fast = [strs] { return BigInt(count_klcs(strs, kDefaultModulus).count); };
                        brute = [strs] {
                            return mod_of(count_kwlcs_brute(strs, {{'a', 1}, {'b', 1}, {'c', 1}}).second, kDefaultModulus);
                        };
                    }
                    auto t1 = Clock::now();
                    const BigInt a = fast();
                    fast_t[t] = seconds_since(t1);
                    t1 = Clock::now();
                    const BigInt b = brute();
                    brute_t[t] = seconds_since(t1);
                    agree[t] = a == b;
                }
                const auto mean = [](const std::vector<double>& v) {
                    double sum = 0;
                    for (double x : v) sum += x;
                    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
                };
                rows.push_back({{"n", n}, {"fast_seconds", mean(fast_t)}, {"brute_seconds", mean(brute_t)},
                                {"agree", std::all_of(agree.begin(), agree.end(), [](char c) { return c != 0; })}});
            }
            Json r = s.report("bench");
            r["problem"] = bench_problem;
            r["rows"] = rows;
            s.emit(r);
            return 0;
        };
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        return action ? action() : 2;
    } catch (const Error& e) {
        err << Json{{"error", std::string(errc_name(e.code()))}, {"message", e.what()}}.dump() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << Json{{"error", "invalid-parameters"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }
}

}  // namespace facred
