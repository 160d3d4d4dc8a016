#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "justify/aggregation.hpp"
#include "justify/corpus.hpp"
#include "justify/pipeline.hpp"

namespace justify::fx {

std::filesystem::path data_dir();
std::filesystem::path fixture(const std::string& relative);

/// Loaded once per process.
const Resources& resources();

std::vector<AspectTuple> sample_tuples();

/// One row of the sample tuple fixture.
struct SampleRow {
  std::string aspect;
  std::size_t asp_rev;
  std::string adjective;
  std::size_t asp_adj_rev;
  double evaluation;
  std::string dimension;
};
const std::vector<SampleRow>& sample_rows();

/// Reviews of one listing ("SAMPLE") that reproduce the sample table's counts:
/// each counted pair gets its own review ("The location was great."), and
/// bare mentions ("We talked about the location.") make up asp#rev.
ReviewCorpus sample_corpus();

ReviewCorpus f1_corpus();

struct GoldenMention {
  std::string review_id;
  std::size_t sentence_id;
  std::string aspect;
  std::string adjective;
  bool negated;
  std::string dimension;
  bool operator==(const GoldenMention&) const = default;
};
std::vector<GoldenMention> f1_golden_mentions();

/// Mentions of all F1 listings in (review, sentence) order, shaped like
/// the golden file.
std::vector<GoldenMention> f1_extracted_mentions();

/// Random table honouring the tuple invariants; dimensions drawn from the
/// taxonomy's fine ids or left unclassified.
struct RandomTable {
  std::vector<AspectTuple> tuples;
  std::size_t n_reviews = 0;
};
RandomTable random_table(std::mt19937_64& rng, const DimensionTaxonomy& taxonomy,
                         std::size_t max_aspects = 8);

/// Mean over the multiset where each tuple contributes asp_adj_rev copies of
/// its evaluation; nullopt when the multiset is empty.
std::optional<double> unit_expansion_mean(const std::vector<double>& values,
                                          const std::vector<std::size_t>& weights);

std::filesystem::path temp_dir(const std::string& name);

}  // namespace justify::fx
