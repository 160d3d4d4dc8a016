#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "justify/blueprint.hpp"
#include "justify/corpus.hpp"
#include "justify/sentiment.hpp"
#include "justify/tagger.hpp"

namespace justify {

struct PairMention {
  std::string review_id;
  std::size_t sentence_id = 0;
  std::string aspect_lemma;
  std::string adjective_lemma;
  std::string sentence_text;
  bool negated = false;
  // Context carried for classification, highlighting and quote ordering.
  std::string aspect_surface;
  std::string adjective_surface;
  std::optional<FineDimensionId> dimension;
  Date review_date{};

  bool operator==(const PairMention&) const = default;
};

struct TaggedSentence {
  std::string review_id;
  std::size_t sentence_id = 0;
  std::string text;
  std::vector<Token> tokens;
};

struct ExtractionResult {
  std::vector<PairMention> mentions;
  /// (review_id, aspect) for every noun occurrence of a final aspect,
  /// whether or not an adjective qualified it.
  std::set<std::pair<std::string, std::string>> aspect_occurrences;
  std::set<std::string> aspects;
  std::set<std::string> opinion_words;
  std::size_t iterations = 0;
};

/// Aspect-adjective extraction over POS patterns, grown to a fixpoint
/// from a seed opinion lexicon in the manner of double propagation.
///
///   R1  ADJ immediately before NOUN.
///   R2  NOUN, at most two tokens, a form of "be", at most two ADV/NEG
///       tokens, then ADJ; adjectives coordinated with that ADJ by "and"
///       or a comma share the subject.
///   R3  NOUN coordinated with a known aspect becomes an aspect.
///   R4  ADJ coordinated with a known opinion word becomes an opinion word.
///
/// An R1/R2 candidate is accepted when its adjective is a known opinion
/// word or its noun a known aspect; acceptance adds both to their sets.
/// A mention is negated when a NEG token sits within the three tokens
/// before the adjective.
class PairExtractor {
 public:
  PairExtractor(const Tagger& tagger, const DimensionTaxonomy& taxonomy,
                std::set<std::string, std::less<>> seed_opinions);

  std::vector<TaggedSentence> tag_reviews(std::span<const Review> reviews) const;
  ExtractionResult extract(std::span<const Review> reviews) const;

 private:
  void resolve_pronouns(std::vector<Token>& tokens) const;

  const Tagger& tagger_;
  const DimensionTaxonomy& taxonomy_;
  std::set<std::string, std::less<>> seed_;
};

/// Entity cues first, then the taxonomy dictionaries; nullopt means
/// unclassified.
std::optional<FineDimensionId> classify_dimension(std::string_view aspect_lemma,
                                                  std::span<const Token> sentence,
                                                  const DimensionTaxonomy& taxonomy);

enum class Sign { up, down };

struct Quote {
  std::string review_id;
  std::size_t sentence_id = 0;
  Date date{};
  std::string text;
  std::string aspect_surface;
  std::string adjective_surface;
  std::string opinion;  // tuple adjective the quote supports, e.g. "not clean"

  bool operator==(const Quote&) const = default;
};

/// Review sentences keyed by (aspect, opinion) and by (aspect, sign).
/// Lists are ordered by (date, review id, sentence id). Each review backs
/// an opinion with one quote (its first sentence), so a list keyed by sign
/// is as long as the review counts it stands behind.
class QuoteIndex {
 public:
  using PairKey = std::pair<std::string, std::string>;
  using SignKey = std::pair<std::string, Sign>;

  const std::vector<Quote>& by_pair(std::string_view aspect, std::string_view adjective) const;
  const std::vector<Quote>& by_sign(std::string_view aspect, Sign sign) const;

  const std::map<PairKey, std::vector<Quote>>& pairs() const { return pairs_; }
  const std::map<SignKey, std::vector<Quote>>& signs() const { return signs_; }

  void insert_pair(const PairKey& key, Quote quote);
  void insert_sign(const SignKey& key, Quote quote);
  void sort();

  bool empty() const { return pairs_.empty() && signs_.empty(); }
  bool operator==(const QuoteIndex&) const = default;

 private:
  std::map<PairKey, std::vector<Quote>> pairs_;
  std::map<SignKey, std::vector<Quote>> signs_;
};

std::string_view to_string(Sign sign);
Sign parse_sign(std::string_view text);

/// Tuple adjective of a mention: the adjective lemma, prefixed with "not "
/// when negated.
std::string opinion_label(const PairMention& mention);

/// (adjective, negated) -> evaluation.
using EvaluationFn = std::function<Evaluation(std::string_view adjective, bool negated)>;

/// A mention's quote goes under its pair, and under up/down when the
/// mention's own evaluation (negation included) is above/below 3.
QuoteIndex build_quote_index(std::span<const PairMention> mentions, const EvaluationFn& evaluate);

}  // namespace justify
