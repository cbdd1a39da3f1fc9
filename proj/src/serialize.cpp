#include "pathmc/serialize.hpp"

#include <nlohmann/json.hpp>

namespace pathmc {

using nlohmann::json;

json family_to_json(const FamilySpec& spec) {
  json j;
  j["n"] = spec.params().n;
  j["a"] = spec.params().a;
  j["b"] = spec.params().b;
  j["family"] = family_name(spec.kind());
  if (spec.kind() == FamilyKind::Wall) {
    j["wall"] = {{"h", spec.wall_window().h}, {"r", spec.wall_window().r},
                 {"s", spec.wall_window().s}};
  }
  return j;
}

namespace {

std::int64_t require_int(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw validation_error(std::string("record missing integer field '") + key + "'");
  return j.at(key).get<std::int64_t>();
}

}  // namespace

FamilySpec family_from_json(const json& j) {
  StepParams params{require_int(j, "n"), require_int(j, "a"), require_int(j, "b")};
  if (!j.contains("family") || !j.at("family").is_string())
    throw validation_error("record missing string field 'family'");
  const FamilyKind kind = family_from_name(j.at("family").get<std::string>());
  WallWindow w;
  if (kind == FamilyKind::Wall) {
    if (!j.contains("wall") || !j.at("wall").is_object())
      throw validation_error("wall family record requires a 'wall' object");
    const json& wj = j.at("wall");
    w = WallWindow{require_int(wj, "h"), require_int(wj, "r"), require_int(wj, "s")};
  }
  return FamilySpec::make(kind, params, w);
}

json path_record(const FamilySpec& spec, const LatticePath& path) {
  json j = family_to_json(spec);
  j["word"] = path.word_string();
  return j;
}

std::pair<FamilySpec, LatticePath> parse_path_record(const json& j) {
  FamilySpec spec = family_from_json(j);
  if (!j.contains("word") || !j.at("word").is_string())
    throw validation_error("record missing string field 'word'");
  LatticePath path = LatticePath::from_word(spec.params(), j.at("word").get<std::string>());
  return {std::move(spec), std::move(path)};
}

}  // namespace pathmc
