#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "justify/aggregation.hpp"
#include "justify/blueprint.hpp"

namespace justify {

inline constexpr int kIndexVersion = 1;

/// Analyses plus the taxonomy they were classified with.
struct AnalysisIndex {
  DimensionTaxonomy taxonomy;
  std::vector<ItemAnalysis> items;

  bool operator==(const AnalysisIndex&) const = default;
};

/// The document is a JSON object {version, taxonomy, items:[...]} followed
/// by one trailing line "crc32 XXXXXXXX" over the JSON bytes.
std::string serialize_index(const AnalysisIndex& index);
/// Throws CorruptIndexError on checksum/parse failures and VersionError on
/// an unsupported version.
AnalysisIndex parse_index(const std::string& document);

void save_index(const AnalysisIndex& index, const std::filesystem::path& path);
AnalysisIndex load_index(const std::filesystem::path& path);

nlohmann::json to_json(const ItemAnalysis& item);
nlohmann::json to_json(const Quote& quote);
nlohmann::json to_json(const Review& review);
ItemAnalysis item_from_json(const nlohmann::json& j, const DimensionTaxonomy& taxonomy);

}  // namespace justify
