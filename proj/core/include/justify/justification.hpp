#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "justify/aggregation.hpp"
#include "justify/index_store.hpp"
#include "justify/summarizer.hpp"

namespace justify {

enum class Model { thumbs, aspects, summary, opinions, reviews };

inline constexpr Model kAllModels[] = {Model::thumbs, Model::aspects, Model::summary,
                                       Model::opinions, Model::reviews};

std::string_view to_string(Model model);
/// "m-thumbs", ...; throws InvalidArgument otherwise.
Model parse_model(std::string_view text);

inline constexpr std::size_t kAspectPageSize = 3;
inline constexpr std::size_t kReviewPageSize = 3;

struct AspectEntry {
  std::string aspect;
  std::size_t asp_rev = 0;
  ThumbCounts thumbs;
  std::vector<AdjectiveRank> adjectives;
};

struct DimensionPage {
  FineDimensionId id;
  std::string label;
  std::size_t n_aspects = 0;
  bool has_info = false;
  std::size_t offset = 0;
  std::vector<AspectEntry> aspects;
  bool has_more = false;
};

struct CoarseBar {
  CoarseDimensionId id;
  std::string label;
  double value = 0;
  bool zero_knowledge = true;
  std::vector<DimensionPage> fine_dims;  // first page of each, rank order
};

struct OpinionBar {
  std::string aspect;
  double bar_value = 0;
  std::size_t asp_rev = 0;
  std::vector<AdjectiveRank> adjectives;
};

struct ReviewPage {
  std::size_t offset = 0;
  std::size_t total = 0;
  bool has_more = false;
  std::vector<Review> reviews;
};

/// What one justification model shows for one item. Only the members of
/// the requested model are filled. Names, prices and pictures are never
/// part of a payload.
struct JustificationPayload {
  std::string item_id;
  Model model = Model::thumbs;
  std::vector<std::string> amenities;
  std::vector<CoarseBar> bars;        // m-thumbs, m-aspects
  std::optional<std::string> summary; // m-summary
  std::vector<OpinionBar> opinions;   // m-opinions
  std::optional<double> mean_rating;  // m-reviews
  std::optional<ReviewPage> reviews;  // m-reviews
};

nlohmann::json to_json(const JustificationPayload& payload);
nlohmann::json to_json(const DimensionPage& page, Model model);
nlohmann::json to_json(const ReviewPage& page);

struct AdjectiveFilter {
  std::string adjective;
};
using QuoteFilter = std::variant<AdjectiveFilter, Sign>;

/// Stable across runs and platforms (CRC-32 of the id).
std::uint64_t stable_seed(std::string_view item_id);

/// Read-only view over a loaded index. Safe to share across threads.
class JustificationService {
 public:
  JustificationService(std::shared_ptr<const AnalysisIndex> index, SummaryGrammar grammar,
                       SummaryOptions summary_defaults = {});

  std::vector<std::string> item_ids() const;
  const ItemAnalysis& item(std::string_view item_id) const;

  /// Throws NotFoundError for an unknown item.
  JustificationPayload get_justification(std::string_view item_id, Model model) const;

  /// Throws NotFoundError for an unknown item or aspect.
  std::vector<Quote> get_quotes(std::string_view item_id, std::string_view aspect,
                                const QuoteFilter& filter) const;

  /// Aspects of one fine dimension from `offset`, kAspectPageSize at a time.
  DimensionPage get_dimension(std::string_view item_id, std::string_view fine_id,
                              std::size_t offset) const;

  ReviewPage get_reviews(std::string_view item_id, std::size_t offset) const;

  std::string summary_text(std::string_view item_id) const;

  const AnalysisIndex& index() const { return *index_; }

 private:
  std::shared_ptr<const AnalysisIndex> index_;
  SummaryGrammar grammar_;
  SummaryOptions summary_defaults_;
};

}  // namespace justify
