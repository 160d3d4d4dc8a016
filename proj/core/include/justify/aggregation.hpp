#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "justify/blueprint.hpp"
#include "justify/extraction.hpp"

namespace justify {

/// One row of an item's aspect table.
struct AspectTuple {
  std::string aspect;
  std::size_t asp_rev = 0;      // reviews mentioning the aspect
  std::string adjective;
  std::size_t asp_adj_rev = 0;  // reviews mentioning the pair
  double evaluation = 3.0;      // [1,5]
  std::optional<FineDimensionId> dimension;

  bool operator==(const AspectTuple&) const = default;
};

struct ItemAnalysis {
  std::string item_id;
  std::size_t n_reviews = 0;
  std::vector<AspectTuple> tuples;
  std::map<CoarseDimensionId, double> coarse_values;  // 0 = zero knowledge
  QuoteIndex quotes;
  std::vector<std::string> amenities;
  std::optional<double> mean_rating;
  std::vector<Review> reviews;  // served by m-reviews, (date, id) order

  bool operator==(const ItemAnalysis&) const = default;
};

/// asp_rev counts reviews in which the aspect occurs (paired or not);
/// asp_adj_rev counts reviews containing the pair. Negated mentions form
/// their own row under opinion_label ("not clean"). A row's evaluation is
/// the mean over its mentions of evaluate(adjective, negated). Rows are
/// ordered by aspect rank, then adjective rank.
std::vector<AspectTuple> build_tuple_table(
    std::span<const PairMention> mentions, const EvaluationFn& evaluate,
    const std::set<std::pair<std::string, std::string>>& aspect_occurrences = {});

/// asp_adj_rev-weighted mean of the evaluations of tuples whose fine
/// dimension belongs to `coarse_id`; 0 when there are none.
double coarse_value(std::span<const AspectTuple> tuples, std::string_view coarse_id,
                    const DimensionTaxonomy& taxonomy);

/// asp_adj_rev-weighted mean over the aspect's tuples. Throws NotFoundError
/// for an unknown aspect.
double aspect_bar_value(std::span<const AspectTuple> tuples, std::string_view aspect);

struct ThumbCounts {
  std::size_t up = 0;
  std::size_t down = 0;
  bool operator==(const ThumbCounts&) const = default;
};

/// Sums asp_adj_rev over tuples above (up) and below (down) 3.0; neutral
/// tuples count for neither. Throws NotFoundError for an unknown aspect.
ThumbCounts thumb_counts(std::span<const AspectTuple> tuples, std::string_view aspect);

struct AspectRank {
  std::string aspect;
  std::size_t asp_rev = 0;
  std::size_t adj_total = 0;  // sum of asp_adj_rev
};

/// Descending asp_rev, then descending sum of asp_adj_rev, then name.
/// With `fine_dim` set, only aspects classified in that dimension.
std::vector<AspectRank> rank_aspects(std::span<const AspectTuple> tuples,
                                     std::optional<std::string_view> fine_dim = std::nullopt);

struct FineDimRank {
  FineDimensionId id;
  std::size_t n_aspects = 0;
  bool has_info = false;
};

/// Fine dimensions of `coarse_id` by descending distinct-aspect count, ties
/// by id; empty dimensions last with has_info = false.
std::vector<FineDimRank> rank_fine_dims(std::span<const AspectTuple> tuples,
                                        std::string_view coarse_id,
                                        const DimensionTaxonomy& taxonomy);

struct AdjectiveRank {
  std::string adjective;
  std::size_t count = 0;
  double evaluation = 3.0;
};

/// Descending asp_adj_rev, ties by name. Throws NotFoundError for an
/// unknown aspect.
std::vector<AdjectiveRank> rank_adjectives(std::span<const AspectTuple> tuples,
                                           std::string_view aspect);

/// Coarse values for every coarse dimension of the taxonomy.
std::map<CoarseDimensionId, double> coarse_values(std::span<const AspectTuple> tuples,
                                                  const DimensionTaxonomy& taxonomy);

/// Reads the six-column tuple CSV (aspect, asp#rev, adjective,
/// asp_adj#rev, evaluation, dimension). Dimension labels are matched
/// against fine ids and labels of the taxonomy, also after stripping a
/// "-prop" suffix; unmatched labels become unclassified.
std::vector<AspectTuple> load_tuple_table(std::istream& in, const DimensionTaxonomy& taxonomy);

/// Throws IntegrityError if a table breaks the AspectTuple invariants.
void check_tuple_invariants(std::span<const AspectTuple> tuples, std::size_t n_reviews);

}  // namespace justify
