#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace justify {

enum class Pos { noun, adj, verb, adv, neg, other };

std::string_view to_string(Pos pos);

struct Token {
  std::string surface;
  std::string lemma;  // lowercase
  Pos pos = Pos::other;
  std::size_t index = 0;

  bool operator==(const Token&) const = default;
};

/// Lexicon-driven part-of-speech tagger and lemmatizer.
///
/// Lookup order: punctuation, closed-class words (determiners, copulas,
/// negators, adverbs, common verbs), domain nouns, open-class adjectives,
/// general nouns, then suffix rules. Words that are both a domain noun and
/// an adjective ("light") read as adjectives after a copula/adverb/negator
/// or before a noun, otherwise as nouns.
class Tagger {
 public:
  Tagger() = default;
  Tagger(std::set<std::string, std::less<>> adjectives, std::set<std::string, std::less<>> nouns);

  /// Adds an adjective file (one word per line, `#` comments).
  static std::set<std::string, std::less<>> load_word_list(const std::filesystem::path& path);

  std::vector<Token> tag(std::string_view sentence) const;

  bool is_adjective(std::string_view word) const;
  bool is_noun(std::string_view word) const;

 private:
  struct Entry {
    Pos pos;
    std::string lemma;
  };
  Entry classify(const std::string& lower, const std::string& surface, std::size_t index,
                 Pos previous, const std::string* next_lower) const;
  std::optional<std::string> adjective_base(const std::string& lower) const;

  std::set<std::string, std::less<>> adjectives_;
  std::set<std::string, std::less<>> nouns_;
};

}  // namespace justify
