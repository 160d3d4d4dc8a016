#include "justify/blueprint.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "justify/errors.hpp"
#include "justify/text.hpp"

namespace justify {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(where + ": missing key '" + key + "'");
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw SchemaError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string optional_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return {};
  if (!obj.at(key).is_string()) throw SchemaError(where + ": '" + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* key, const std::string& where,
                                     bool required) {
  if (!obj.contains(key)) {
    if (required) throw SchemaError(where + ": missing key '" + key + "'");
    return {};
  }
  const json& v = obj.at(key);
  if (!v.is_array()) throw SchemaError(where + ": '" + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw SchemaError(where + ": '" + key + "' entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::string normalize_id(const std::string& raw, const std::string& where) {
  std::string id = text::to_lower(text::trim(raw));
  if (id.empty()) throw IntegrityError(where + ": empty identifier");
  return id;
}

// Dictionary terms and cues are single lemmas; multiword entries keep their
// words but each word is singularised.
std::string normalize_term(const std::string& raw) {
  std::string lower = text::to_lower(text::trim(raw));
  std::string out;
  for (auto word : text::whitespace_tokens(lower)) {
    if (!out.empty()) out.push_back(' ');
    out += text::singularize(word);
  }
  return out;
}

}  // namespace

bool EntityRule::has_cue(std::string_view lemma) const {
  return std::find(cues.begin(), cues.end(), lemma) != cues.end();
}

const CoarseDimension* DimensionTaxonomy::find_coarse(std::string_view id) const {
  for (const auto& c : coarse_)
    if (c.id == id) return &c;
  return nullptr;
}

const FineDimension* DimensionTaxonomy::find_fine(std::string_view id) const {
  for (const auto& f : fine_)
    if (f.id == id) return &f;
  return nullptr;
}

std::vector<const FineDimension*> DimensionTaxonomy::fine_dims_of(std::string_view coarse_id) const {
  std::vector<const FineDimension*> out;
  for (const auto& f : fine_)
    if (f.coarse_id == coarse_id) out.push_back(&f);
  return out;
}

std::optional<CoarseDimensionId> DimensionTaxonomy::coarse_of(std::string_view fine_id) const {
  if (const auto* f = find_fine(fine_id)) return f->coarse_id;
  return std::nullopt;
}

std::optional<FineDimensionId> DimensionTaxonomy::lookup_dimension(std::string_view term) const {
  auto it = term_index_.find(term);
  if (it == term_index_.end()) return std::nullopt;
  return it->second;
}

std::set<std::string> DimensionTaxonomy::vocabulary() const {
  std::set<std::string> out;
  for (const auto& [term, _] : term_index_) out.insert(term);
  for (const auto& r : rules_) out.insert(r.cues.begin(), r.cues.end());
  return out;
}

bool DimensionTaxonomy::operator==(const DimensionTaxonomy& other) const {
  return coarse_ == other.coarse_ && fine_ == other.fine_ && rules_ == other.rules_ &&
         dictionaries_ == other.dictionaries_;
}

DimensionTaxonomy load_taxonomy(const json& config) {
  if (!config.is_object()) throw SchemaError("blueprint config must be an object");
  DimensionTaxonomy t;

  const json& coarse = require(config, "coarse", "blueprint");
  if (!coarse.is_array()) throw SchemaError("blueprint: 'coarse' must be a list");
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const std::string where = "coarse[" + std::to_string(i) + "]";
    CoarseDimension c;
    c.id = normalize_id(require_string(coarse[i], "id", where), where);
    c.label = require_string(coarse[i], "label", where);
    if (text::trim(c.label).empty()) throw IntegrityError(where + ": empty label");
    if (coarse[i].contains("presented")) {
      if (!coarse[i]["presented"].is_boolean())
        throw SchemaError(where + ": 'presented' must be a boolean");
      c.presented = coarse[i]["presented"].get<bool>();
    }
    if (t.find_coarse(c.id)) throw IntegrityError(where + ": duplicate coarse id '" + c.id + "'");
    t.coarse_.push_back(std::move(c));
  }
  if (t.coarse_.empty()) throw IntegrityError("blueprint: at least one coarse dimension required");

  const json& fine = require(config, "fine", "blueprint");
  if (!fine.is_array()) throw SchemaError("blueprint: 'fine' must be a list");
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const std::string where = "fine[" + std::to_string(i) + "]";
    FineDimension f;
    f.id = normalize_id(require_string(fine[i], "id", where), where);
    f.label = require_string(fine[i], "label", where);
    if (text::trim(f.label).empty()) throw IntegrityError(where + ": empty label");
    f.coarse_id = normalize_id(require_string(fine[i], "coarse_id", where), where);
    f.physical_evidence = optional_string(fine[i], "physical_evidence", where);
    if (!t.find_coarse(f.coarse_id)) {
      throw IntegrityError(where + ": fine dimension '" + f.id + "' names undeclared coarse '" +
                           f.coarse_id + "'");
    }
    if (t.find_fine(f.id)) throw IntegrityError(where + ": duplicate fine id '" + f.id + "'");

    auto& dict = t.dictionaries_[f.id];
    for (const auto& raw : string_list(fine[i], "dictionary", where, false)) {
      std::string term = normalize_term(raw);
      if (term.empty()) continue;
      auto [it, inserted] = t.term_index_.emplace(term, f.id);
      if (!inserted && it->second != f.id) {
        throw IntegrityError(where + ": term '" + term + "' already belongs to '" + it->second +
                             "'");
      }
      dict.insert(term);
    }
    t.fine_.push_back(std::move(f));
  }

  if (config.contains("entity_rules")) {
    const json& rules = config.at("entity_rules");
    if (!rules.is_array()) throw SchemaError("blueprint: 'entity_rules' must be a list");
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const std::string where = "entity_rules[" + std::to_string(i) + "]";
      EntityRule r;
      std::string kind = require_string(rules[i], "kind", where);
      if (kind == "person") {
        r.kind = EntityKind::person;
      } else if (kind == "place") {
        r.kind = EntityKind::place;
      } else {
        throw SchemaError(where + ": kind must be 'person' or 'place'");
      }
      for (const auto& cue : string_list(rules[i], "cues", where, true)) {
        auto term = normalize_term(cue);
        if (!term.empty() && !r.has_cue(term)) r.cues.push_back(std::move(term));
      }
      for (const auto& p : string_list(rules[i], "pronouns", where, false)) {
        r.pronouns.insert(text::to_lower(text::trim(p)));
      }
      if (r.cues.empty()) throw IntegrityError(where + ": at least one cue required");
      if (!r.pronouns.empty() && r.kind != EntityKind::person) {
        throw IntegrityError(where + ": pronouns only apply to person rules");
      }
      r.target_fine_id = normalize_id(require_string(rules[i], "target_fine_id", where), where);
      if (!t.find_fine(r.target_fine_id)) {
        throw IntegrityError(where + ": target '" + r.target_fine_id + "' is not a fine dimension");
      }
      t.rules_.push_back(std::move(r));
    }
  }
  return t;
}

DimensionTaxonomy load_taxonomy_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read blueprint config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return load_taxonomy(doc);
}

json to_json(const DimensionTaxonomy& t) {
  json out;
  out["coarse"] = json::array();
  for (const auto& c : t.coarse_dims()) {
    out["coarse"].push_back({{"id", c.id}, {"label", c.label}, {"presented", c.presented}});
  }
  out["fine"] = json::array();
  for (const auto& f : t.fine_dims()) {
    json dict = json::array();
    if (auto it = t.dictionaries().find(f.id); it != t.dictionaries().end()) {
      for (const auto& term : it->second) dict.push_back(term);
    }
    out["fine"].push_back({{"id", f.id},
                           {"label", f.label},
                           {"coarse_id", f.coarse_id},
                           {"physical_evidence", f.physical_evidence},
                           {"dictionary", dict}});
  }
  out["entity_rules"] = json::array();
  for (const auto& r : t.entity_rules()) {
    json rule = {{"kind", r.kind == EntityKind::person ? "person" : "place"},
                 {"cues", r.cues},
                 {"target_fine_id", r.target_fine_id}};
    if (!r.pronouns.empty()) rule["pronouns"] = r.pronouns;
    out["entity_rules"].push_back(std::move(rule));
  }
  return out;
}

}  // namespace justify
