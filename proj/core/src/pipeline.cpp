#include "justify/pipeline.hpp"

#include <cstdlib>

#include "justify/errors.hpp"

namespace justify {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("JUSTIFY_DATA_DIR"); env && *env) return env;
#ifdef JUSTIFY_SOURCE_DATA_DIR
  if (std::filesystem::exists(JUSTIFY_SOURCE_DATA_DIR)) return JUSTIFY_SOURCE_DATA_DIR;
#endif
  return JUSTIFY_DEFAULT_DATA_DIR;
}

Resources Resources::load(const std::filesystem::path& data_dir) {
  return load(data_dir, data_dir / "taxonomy" / "airbnb.json");
}

Resources Resources::load(const std::filesystem::path& data_dir,
                          const std::filesystem::path& taxonomy_file) {
  if (!std::filesystem::is_directory(data_dir)) {
    throw IoError("data directory not found: " + data_dir.string());
  }
  const auto lex = data_dir / "lexicons";
  std::map<std::string, double, std::less<>> overrides;
  if (std::filesystem::exists(lex / "overrides.tsv")) overrides = load_overrides(lex / "overrides.tsv");

  Resources r;
  r.taxonomy = load_taxonomy_file(taxonomy_file);
  r.scorer = SentimentScorer(Lexicon::load(lex / "valence.tsv"), Lexicon::load(lex / "polarity.tsv"),
                             std::move(overrides));
  auto adjectives = Tagger::load_word_list(lex / "adjectives.txt");
  for (const auto& adj : adjectives) {
    if (r.scorer.is_opinion_word(adj)) r.seed_opinions.insert(adj);
  }
  auto vocab = r.taxonomy.vocabulary();
  r.tagger = Tagger(std::move(adjectives), {vocab.begin(), vocab.end()});
  r.grammar = SummaryGrammar::load(data_dir / "grammar" / "summary.bnf");
  return r;
}

ItemAnalysis analyze_item(const Listing& listing, std::span<const Review> reviews,
                          const Resources& resources) {
  PairExtractor extractor(resources.tagger, resources.taxonomy, resources.seed_opinions);
  auto extraction = extractor.extract(reviews);
  EvaluationFn evaluate = [&](std::string_view adj, bool negated) {
    return resources.scorer.evaluate(adj, negated);
  };

  ItemAnalysis item;
  item.item_id = listing.listing_id;
  item.n_reviews = reviews.size();
  item.tuples = build_tuple_table(extraction.mentions, evaluate, extraction.aspect_occurrences);
  item.coarse_values = coarse_values(item.tuples, resources.taxonomy);
  item.quotes = build_quote_index(extraction.mentions, evaluate);
  item.amenities.assign(listing.amenities.begin(), listing.amenities.end());
  item.mean_rating = listing.mean_rating;
  item.reviews.assign(reviews.begin(), reviews.end());
  return item;
}

std::vector<ItemAnalysis> analyze_corpus(const ReviewCorpus& corpus, const Resources& resources) {
  std::vector<ItemAnalysis> out;
  out.reserve(corpus.n_listings());
  for (const auto& [id, listing] : corpus.listings()) {
    std::vector<Review> reviews;
    for (const Review* r : corpus.reviews_of(id)) reviews.push_back(*r);
    out.push_back(analyze_item(listing, reviews, resources));
  }
  return out;
}

}  // namespace justify
