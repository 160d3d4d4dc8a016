#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace justify {

using CoarseDimensionId = std::string;
using FineDimensionId = std::string;

struct CoarseDimension {
  CoarseDimensionId id;
  std::string label;
  bool presented = true;  // shown as a bar in the item view

  bool operator==(const CoarseDimension&) const = default;
};

struct FineDimension {
  FineDimensionId id;
  std::string label;
  CoarseDimensionId coarse_id;
  std::string physical_evidence;

  bool operator==(const FineDimension&) const = default;
};

enum class EntityKind { person, place };

/// A cue list for people or places. `pronouns` is only meaningful for
/// person rules: it enables resolving "she"/"he"/"they" to the rule's
/// target when no other person is named in the sentence.
struct EntityRule {
  EntityKind kind = EntityKind::person;
  std::vector<std::string> cues;  // config order; the first is canonical
  std::set<std::string> pronouns;
  FineDimensionId target_fine_id;

  bool has_cue(std::string_view lemma) const;
  bool operator==(const EntityRule&) const = default;
};

/// Service-blueprint dimensions plus the term dictionaries and entity cues
/// that steer aspect classification. Immutable once loaded.
class DimensionTaxonomy {
 public:
  DimensionTaxonomy() = default;

  const std::vector<CoarseDimension>& coarse_dims() const { return coarse_; }
  const std::vector<FineDimension>& fine_dims() const { return fine_; }
  const std::vector<EntityRule>& entity_rules() const { return rules_; }
  const std::map<FineDimensionId, std::set<std::string>>& dictionaries() const {
    return dictionaries_;
  }

  const CoarseDimension* find_coarse(std::string_view id) const;
  const FineDimension* find_fine(std::string_view id) const;

  /// Fine dimensions of `coarse_id`, in declaration order.
  std::vector<const FineDimension*> fine_dims_of(std::string_view coarse_id) const;

  /// Coarse dimension owning `fine_id`; nullopt for unknown ids.
  std::optional<CoarseDimensionId> coarse_of(std::string_view fine_id) const;

  /// Exact-lemma dictionary lookup.
  std::optional<FineDimensionId> lookup_dimension(std::string_view term) const;

  /// Every dictionary term and entity cue; feeds the tagger's noun lexicon.
  std::set<std::string> vocabulary() const;

  bool operator==(const DimensionTaxonomy& other) const;

 private:
  friend DimensionTaxonomy load_taxonomy(const nlohmann::json&);

  std::vector<CoarseDimension> coarse_;
  std::vector<FineDimension> fine_;
  std::vector<EntityRule> rules_;
  std::map<FineDimensionId, std::set<std::string>> dictionaries_;
  std::map<std::string, FineDimensionId, std::less<>> term_index_;
};

/// Validates and builds a taxonomy. Throws SchemaError for malformed
/// documents and IntegrityError for dangling coarse ids, duplicate ids or
/// a term claimed by two dictionaries.
DimensionTaxonomy load_taxonomy(const nlohmann::json& config);
DimensionTaxonomy load_taxonomy_file(const std::filesystem::path& path);

nlohmann::json to_json(const DimensionTaxonomy& taxonomy);

inline std::optional<FineDimensionId> lookup_dimension(std::string_view term,
                                                       const DimensionTaxonomy& taxonomy) {
  return taxonomy.lookup_dimension(term);
}

}  // namespace justify
