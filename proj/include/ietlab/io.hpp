#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ietlab/iet.hpp"
#include "ietlab/rauzy_veech.hpp"
#include "ietlab/roof.hpp"
#include "ietlab/zippered.hpp"

namespace ietlab {

using Json = nlohmann::ordered_json;

// Malformed input; `field` names the offending entry.
struct FormatError : std::invalid_argument {
    std::string field;
    FormatError(std::string f, const std::string& what) : std::invalid_argument(what), field(std::move(f)) {}
};

// {alphabet, top, bottom, lengths}; lengths is either a label -> string map or a list in alphabet order.
Iet iet_from_json(const Json& j);
Json iet_to_json(const Iet& T);
// A file path, or one of the builtin names "golden", "symmetric3", "bounded3".
Iet load_iet(const std::string& source);

// {c0, Cplus: {label: value}, Cminus: {label: value}}; missing labels default to 0.
RoofSpec roof_from_json(const Json& j, const Iet& T);
Json roof_to_json(const RoofSpec& s, const Iet& T);
// A file path, "golden" (single left singularity of strength 1 at r_A) or "constant".
RoofSpec load_roof(const std::string& source, const Iet& T);

// {lengths, tau, permutation}.
Json triple_to_json(const ZipperedRectangles& z);
ZipperedRectangles triple_from_json(const Json& j);

// One record of an induction trace at depth n >= 1.
Json trace_record(const InductionTrace& trace, std::size_t n);

std::string hex64(std::uint64_t v);
Json read_json_file(const std::string& path);

}  // namespace ietlab
