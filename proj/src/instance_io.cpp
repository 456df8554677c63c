#include "facred/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "facred/error.hpp"

namespace facred {

namespace {

template <class T>
T get_field(const Json& j, const char* key) {
    if (!j.contains(key)) throw Error(Errc::parse_error, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw Error(Errc::parse_error, std::string("bad field '") + key + "': " + e.what());
    }
}

BitString bits_from_json(const Json& j, unsigned b) {
    if (!j.is_string()) throw Error(Errc::parse_error, "bit strings must be JSON strings");
    const auto text = j.get<std::string>();
    if (text.size() != b) throw Error(Errc::width_mismatch, "bit string '" + text + "' is not " + std::to_string(b) + " bits");
    return BitString::from_text(text);
}

}  // namespace

Json to_json(const FactoredVector& v) {
    Json out = Json::array();
    for (const StringSet& s : v.groups) {
        Json grp = Json::array();
        for (const BitString& x : s.items()) grp.push_back(x.text());
        out.push_back(std::move(grp));
    }
    return out;
}

FactoredVector vector_from_json(const Json& j, unsigned b) {
    if (!j.is_array()) throw Error(Errc::parse_error, "a factored vector is an array of groups");
    FactoredVector v;
    v.b = b;
    for (const Json& grp : j) {
        if (!grp.is_array()) throw Error(Errc::parse_error, "a group is an array of bit strings");
        StringSet s(b);
        for (const Json& x : grp) s.insert(bits_from_json(x, b));
        v.groups.push_back(std::move(s));
    }
    return v;
}

Json to_json(const Predicate& p) { return std::string(pred_name(p.kind)); }

Predicate predicate_from_json(const Json& j, unsigned arity, unsigned b) {
    const auto name = get_field<std::string>(j, "pred");
    Predicate p = make_predicate(parse_pred_kind(name), arity);
    if (p.kind == PredKind::TABLE) {
        for (const Json& row : get_field<Json>(j, "table")) {
            std::vector<BitString> tuple;
            for (const Json& x : row) tuple.push_back(bits_from_json(x, b));
            if (tuple.size() != arity) throw Error(Errc::arity_mismatch, "table row has the wrong arity");
            p.table.insert(std::move(tuple));
        }
    }
    return p;
}

namespace {

void put_predicate(Json& out, const Predicate& p) {
    out["pred"] = to_json(p);
    if (p.kind == PredKind::TABLE) {
        Json rows = Json::array();
        for (const auto& tuple : p.table) {
            Json row = Json::array();
            for (const BitString& x : tuple) row.push_back(x.text());
            rows.push_back(std::move(row));
        }
        out["table"] = std::move(rows);
    }
}

}  // namespace

Json to_json(const FkfInstance& inst) {
    Json out;
    out["kind"] = "fkf";
    out["k"] = inst.k;
    out["g"] = inst.g;
    out["b"] = inst.b;
    put_predicate(out, inst.pred);
    Json lists = Json::array();
    for (const auto& list : inst.lists) {
        Json l = Json::array();
        for (const FactoredVector& v : list) l.push_back(to_json(v));
        lists.push_back(std::move(l));
    }
    out["lists"] = std::move(lists);
    return out;
}

FkfInstance fkf_from_json(const Json& j) {
    FkfInstance inst;
    inst.k = get_field<unsigned>(j, "k");
    inst.g = get_field<unsigned>(j, "g");
    inst.b = get_field<unsigned>(j, "b");
    inst.pred = predicate_from_json(j, inst.k, inst.b);
    for (const Json& l : get_field<Json>(j, "lists")) {
        std::vector<FactoredVector> list;
        for (const Json& v : l) list.push_back(vector_from_json(v, inst.b));
        inst.lists.push_back(std::move(list));
    }
    validate(inst);
    return inst;
}

Json to_json(const FfkcInstance& inst) {
    Json out;
    out["kind"] = "ffkc";
    out["k"] = inst.k;
    out["g"] = inst.g;
    out["b"] = inst.b;
    out["n"] = inst.n;
    put_predicate(out, inst.pred);
    Json edges = Json::array();
    for (const auto& cls : inst.edges) {
        Json c = Json::array();
        for (const auto& e : cls) c.push_back(e ? to_json(*e) : Json(nullptr));
        edges.push_back(std::move(c));
    }
    out["edges"] = std::move(edges);
    return out;
}

FfkcInstance ffkc_from_json(const Json& j) {
    FfkcInstance inst;
    inst.k = get_field<unsigned>(j, "k");
    inst.g = get_field<unsigned>(j, "g");
    inst.b = get_field<unsigned>(j, "b");
    inst.n = get_field<std::size_t>(j, "n");
    inst.pred = predicate_from_json(j, pair_count(inst.k), inst.b);
    for (const Json& c : get_field<Json>(j, "edges")) {
        std::vector<std::optional<FactoredVector>> cls;
        for (const Json& e : c) {
            if (e.is_null()) {
                cls.emplace_back(std::nullopt);
            } else {
                cls.emplace_back(vector_from_json(e, inst.b));
            }
        }
        inst.edges.push_back(std::move(cls));
    }
    validate(inst);
    return inst;
}

Json to_json(const ZkcInstance& inst) {
    Json out;
    out["kind"] = "zkc";
    out["k"] = inst.k;
    out["n"] = inst.n;
    out["R"] = inst.R;
    out["weights"] = inst.weights;
    return out;
}

ZkcInstance zkc_from_json(const Json& j) {
    ZkcInstance inst;
    inst.k = get_field<unsigned>(j, "k");
    inst.n = get_field<std::size_t>(j, "n");
    inst.R = get_field<std::uint64_t>(j, "R");
    inst.weights = get_field<std::vector<std::vector<std::uint64_t>>>(j, "weights");
    validate(inst);
    return inst;
}

Json to_json(const PmtInstance& inst) {
    Json graphs = Json::array();
    for (const ColoredGraph& g : inst.graphs) {
        Json edges = Json::array();
        for (auto [a, b] : g.edges) edges.push_back({a, b});
        graphs.push_back({{"nodes", g.nodes}, {"color", g.color}, {"edges", edges}});
    }
    return {{"kind", "pmt"}, {"colors", inst.colors}, {"graphs", graphs}};
}

PmtInstance pmt_from_json(const Json& j) {
    PmtInstance inst;
    inst.colors = get_field<std::size_t>(j, "colors");
    for (const Json& gj : get_field<Json>(j, "graphs")) {
        ColoredGraph g;
        g.nodes = get_field<std::size_t>(gj, "nodes");
        g.color = get_field<std::vector<std::uint32_t>>(gj, "color");
        g.edges = get_field<std::vector<std::pair<std::uint32_t, std::uint32_t>>>(gj, "edges");
        if (g.color.size() != g.nodes) throw Error(Errc::parse_error, "one color per node expected");
        for (std::uint32_t c : g.color) {
            if (c >= inst.colors) throw Error(Errc::parse_error, "color out of range");
        }
        for (auto [a, b] : g.edges) {
            if (a >= g.nodes || b >= g.nodes || a == b) throw Error(Errc::parse_error, "bad edge");
        }
        inst.graphs.push_back(std::move(g));
    }
    return inst;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse_error, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(Errc::parse_error, path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::parse_error, "cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace facred
