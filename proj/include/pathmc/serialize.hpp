#pragma once

#include <nlohmann/json_fwd.hpp>
#include <utility>

#include "pathmc/path.hpp"

namespace pathmc {

// Path records look like
//   {"n":7,"a":1,"b":2,"family":"meander","word":"UUDUUUD"}
// with an extra "wall":{"h":..,"r":..,"s":..} object for wall families.
// Heights are never serialized; they are recomputed on load.

nlohmann::json family_to_json(const FamilySpec& spec);
FamilySpec family_from_json(const nlohmann::json& j);

nlohmann::json path_record(const FamilySpec& spec, const LatticePath& path);
std::pair<FamilySpec, LatticePath> parse_path_record(const nlohmann::json& j);

}  // namespace pathmc
