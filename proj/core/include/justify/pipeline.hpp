#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "justify/aggregation.hpp"
#include "justify/blueprint.hpp"
#include "justify/corpus.hpp"
#include "justify/extraction.hpp"
#include "justify/sentiment.hpp"
#include "justify/summarizer.hpp"
#include "justify/tagger.hpp"

namespace justify {

/// Directory with taxonomy/, lexicons/ and grammar/ subfolders. Resolution
/// order: $JUSTIFY_DATA_DIR, the build tree, the install prefix.
std::filesystem::path default_data_dir();

/// Everything the offline analysis needs, loaded once and shared read-only.
struct Resources {
  DimensionTaxonomy taxonomy;
  SentimentScorer scorer;
  Tagger tagger;
  SummaryGrammar grammar;
  std::set<std::string, std::less<>> seed_opinions;

  static Resources load(const std::filesystem::path& data_dir);
  /// Swaps in another taxonomy and rebuilds the tagger's noun lexicon.
  static Resources load(const std::filesystem::path& data_dir,
                        const std::filesystem::path& taxonomy_file);
};

ItemAnalysis analyze_item(const Listing& listing, std::span<const Review> reviews,
                          const Resources& resources);

/// One analysis per listing, in listing-id order.
std::vector<ItemAnalysis> analyze_corpus(const ReviewCorpus& corpus, const Resources& resources);

}  // namespace justify
