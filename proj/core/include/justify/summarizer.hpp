#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "justify/aggregation.hpp"

namespace justify {

struct GrammarSymbol {
  enum class Kind { terminal, nonterminal };
  Kind kind = Kind::terminal;
  std::string value;  // literal text (may hold {SLOT}s) or nonterminal name

  bool operator==(const GrammarSymbol&) const = default;
};

using Alternative = std::vector<GrammarSymbol>;

/// Plain-text BNF:
///
///   NAME ::= "literal {SLOT}" OTHER | "..."
///          | ...
///
/// `#` starts a comment; a line starting with `|` continues the previous
/// production. The start symbol is SUMMARY. ASPECT_SENTENCE is the
/// per-aspect unit: each expansion binds the slots to the next selected
/// aspect. Slots: {ASPECT}, {ADJ}, {ADJ2}, {COUNT} (reviews mentioning
/// the aspect), {GUESTS} ("one guest" / "N guests") and {ASPECT_LIST}.
class SummaryGrammar {
 public:
  static constexpr std::string_view kStart = "SUMMARY";
  static constexpr std::string_view kAspectUnit = "ASPECT_SENTENCE";

  /// Throws SchemaError on syntax errors, undefined nonterminals, a missing
  /// start symbol, left recursion or cycles that cannot terminate.
  static SummaryGrammar parse(std::string_view source);
  static SummaryGrammar load(const std::filesystem::path& path);

  const std::vector<Alternative>& alternatives(std::string_view nonterminal) const;
  bool has(std::string_view nonterminal) const;
  const std::map<std::string, std::vector<Alternative>, std::less<>>& productions() const {
    return productions_;
  }

 private:
  std::map<std::string, std::vector<Alternative>, std::less<>> productions_;
};

struct DerivationStep {
  std::string nonterminal;
  std::size_t alternative = 0;
  std::map<std::string, std::string> slots;  // fills used by this alternative

  bool operator==(const DerivationStep&) const = default;
};

struct SummaryText {
  std::string text;
  std::vector<DerivationStep> derivation;  // pre-order
  std::vector<std::string> aspects;        // selected aspects, rank order
};

inline constexpr std::string_view kNoFeedbackSentence =
    "No guest feedback is available for this home.";

struct SummaryOptions {
  std::uint64_t seed = 0;
  std::size_t k_aspects = 5;
  std::size_t k_adjs = 2;
};

/// Picks the top aspects by rank_aspects and their top adjectives by
/// rank_adjectives, then expands the grammar choosing uniformly (seeded)
/// among the alternatives whose slots can be filled and whose aspect
/// consumption fits the aspects left. An empty table yields the fallback
/// sentence with an empty derivation.
SummaryText generate_summary(std::span<const AspectTuple> tuples, const SummaryGrammar& grammar,
                             const SummaryOptions& options);

/// True iff replaying the derivation under the grammar renders exactly
/// `text`. The fallback sentence validates with an empty derivation.
bool validate_summary(std::string_view text, std::span<const DerivationStep> derivation,
                      const SummaryGrammar& grammar);

}  // namespace justify
