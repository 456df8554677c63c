#pragma once

#include <string>

#include <json.hpp>

#include "facred/factored.hpp"
#include "facred/xforms.hpp"
#include "facred/zkc.hpp"

namespace facred {

using Json = nlohmann::json;

// Vector: array of g groups, each an array of b-character bit strings (leftmost is the high bit).
Json to_json(const FactoredVector& v);
FactoredVector vector_from_json(const Json& j, unsigned b);

Json to_json(const Predicate& p);
Predicate predicate_from_json(const Json& j, unsigned arity, unsigned b);

// {"kind": "fkf", "k", "g", "b", "pred", ["table"], "lists": [[vector, ...], ...]}
Json to_json(const FkfInstance& inst);
FkfInstance fkf_from_json(const Json& j);

// {"kind": "ffkc", "k", "g", "b", "n", "pred", ["table"], "edges": [[vector or null, ...] per pair]}
Json to_json(const FfkcInstance& inst);
FfkcInstance ffkc_from_json(const Json& j);

// {"kind": "zkc", "k", "n", "R", "weights": [[w, ...] per pair]}
Json to_json(const ZkcInstance& inst);
ZkcInstance zkc_from_json(const Json& j);

// {"kind": "pmt", "colors", "graphs": [{"nodes", "color": [...], "edges": [[a, b], ...]}, ...]}
Json to_json(const PmtInstance& inst);
PmtInstance pmt_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace facred
