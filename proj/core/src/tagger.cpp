#include "justify/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include "justify/errors.hpp"
#include "justify/text.hpp"

namespace justify {
namespace {

struct ClosedEntry {
  Pos pos;
  std::string_view lemma;  // empty: the word itself
};

const std::unordered_map<std::string_view, ClosedEntry>& closed_class() {
  static const std::unordered_map<std::string_view, ClosedEntry> words = [] {
    std::unordered_map<std::string_view, ClosedEntry> m;
    for (std::string_view w : {"am", "is", "are", "was", "were", "be", "been", "being"}) {
      m[w] = {Pos::verb, "be"};
    }
    for (std::string_view w : {"not", "n't", "never", "no", "hardly", "barely", "neither", "nor",
                               "nothing", "without"}) {
      m[w] = {Pos::neg, w == "n't" ? std::string_view("not") : std::string_view{}};
    }
    for (std::string_view w :
         {"very", "really", "so", "too", "quite", "extremely", "super", "incredibly", "truly",
          "absolutely", "totally", "fairly", "rather", "also", "just", "always",
          "still", "all", "overall", "again", "definitely", "highly", "especially", "even",
          "exceptionally", "perfectly", "reasonably", "somewhat", "slightly", "here",
          "there", "then", "now", "only", "well", "already", "almost", "enough", "most", "more",
          "less", "much", "as"}) {
      m[w] = {Pos::adv, {}};
    }
    for (std::string_view w :
         {"a", "an", "the", "this", "that", "these", "those", "my", "our", "your", "his", "her",
          "their", "its", "some", "any", "every", "each", "i", "we", "you", "he", "she", "it",
          "they", "me", "us", "him", "them", "who", "which", "what", "and", "or", "but", "if",
          "because", "while", "of", "in", "on", "at", "to", "for", "with", "from", "by", "about",
          "into", "near", "around", "for", "within", "during", "after", "before", "than", "up",
          "down", "out", "over", "under", "off", "'s", "one", "two", "three", "four", "five",
          "lot", "lots", "bit", "thanks", "thank", "please", "yes", "oh", "wow"}) {
      m[w] = {Pos::other, {}};
    }
    struct V {
      std::string_view word, lemma;
    };
    for (V v : std::initializer_list<V>{
             {"have", "have"},       {"has", "have"},        {"had", "have"},
             {"do", "do"},           {"does", "do"},         {"did", "do"},
             {"will", "will"},       {"would", "would"},     {"can", "can"},
             {"could", "could"},     {"should", "should"},    {"may", "may"},
             {"might", "might"},     {"must", "must"},       {"wo", "will"},
             {"ca", "can"},          {"stay", "stay"},       {"stayed", "stay"},
             {"staying", "stay"},    {"recommend", "recommend"}, {"recommended", "recommend"},
             {"enjoy", "enjoy"},     {"enjoyed", "enjoy"},   {"felt", "feel"},
             {"feel", "feel"},       {"feels", "feel"},      {"found", "find"},
             {"find", "find"},       {"made", "make"},       {"make", "make"},
             {"get", "get"},         {"got", "get"},         {"go", "go"},
             {"went", "go"},         {"come", "come"},       {"came", "come"},
             {"said", "say"},        {"need", "need"},       {"needed", "need"},
             {"want", "want"},       {"wanted", "want"},     {"arrived", "arrive"},
             {"arrive", "arrive"},   {"left", "leave"},      {"leave", "leave"},
             {"loved", "love"},      {"love", "love"},       {"liked", "like"},
             {"like", "like"},       {"looked", "look"},     {"look", "look"},
             {"provided", "provide"}, {"took", "take"},      {"take", "take"},
             {"talked", "talk"},     {"saw", "see"},         {"see", "see"},
             {"met", "meet"},        {"checked", "check"},   {"visited", "visit"},
             {"booked", "book"},     {"used", "use"},        {"use", "use"},
             {"walked", "walk"},     {"mentioned", "mention"}, {"hope", "hope"},
             {"let", "let"},         {"gave", "give"},       {"give", "give"},
             {"knew", "know"},       {"know", "know"},       {"think", "think"},
             {"thought", "think"},   {"seemed", "seem"},     {"had", "have"}}) {
      m[v.word] = {Pos::verb, v.lemma};
    }
    return m;
  }();
  return words;
}

const std::unordered_map<std::string_view, std::string_view>& general_nouns() {
  // Review vocabulary that is neither domain-specific nor adjectival.
  static const std::unordered_map<std::string_view, std::string_view> words = {
      {"time", "time"},         {"trip", "trip"},
      {"night", "night"},   {"nights", "night"},      {"day", "day"},
      {"days", "day"},      {"experience", "experience"}, {"value", "value"},
      {"everything", "everything"}, {"thing", "thing"}, {"things", "thing"},
      {"weekend", "weekend"}, {"week", "week"},       {"visit", "visit"},
      {"holiday", "holiday"}, {"family", "family"},   {"friend", "friend"},
      {"friends", "friend"}, {"london", "london"},    {"city", "city"},
      {"price", "price"},   {"money", "money"},       {"way", "way"},
      {"guest", "guest"},   {"guests", "guest"},      {"kid", "kid"},
      {"kids", "kid"},      {"child", "child"},       {"children", "child"},
      {"people", "person"}, {"person", "person"},     {"minute", "minute"},
      {"minutes", "minute"}, {"walk", "walk"},        {"toy", "toy"},
      {"toys", "toy"},      {"breeze", "breeze"},     {"problem", "problem"},
      {"issue", "issue"},   {"issues", "issue"},      {"touch", "touch"},
  };
  return words;
}

bool has_suffix(const std::string& w, std::string_view suffix, std::size_t min_len) {
  return w.size() >= min_len && w.ends_with(suffix);
}

bool noun_suffix(const std::string& w) {
  for (std::string_view s : {"tion", "sion", "ment", "ness", "ity", "ance", "ence", "ship",
                             "hood", "ery", "ist"}) {
    if (has_suffix(w, s, s.size() + 3)) return true;
  }
  return false;
}

bool adjective_suffix(const std::string& w) {
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "less"}) {
    if (has_suffix(w, s, s.size() + 3)) return true;
  }
  return false;
}

bool looks_plural(const std::string& w) {
  return w.size() > 3 && w.back() == 's' && !w.ends_with("ss") && !w.ends_with("us") &&
         !w.ends_with("is");
}

bool is_capitalized(const std::string& surface) {
  return !surface.empty() && std::isupper(static_cast<unsigned char>(surface.front()));
}

bool is_number(const std::string& w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](unsigned char c) {
    return std::isdigit(c) || c == '.' || c == ',';
  });
}

}  // namespace

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::noun: return "NOUN";
    case Pos::adj: return "ADJ";
    case Pos::verb: return "VERB";
    case Pos::adv: return "ADV";
    case Pos::neg: return "NEG";
    case Pos::other: return "OTHER";
  }
  return "OTHER";
}

Tagger::Tagger(std::set<std::string, std::less<>> adjectives, std::set<std::string, std::less<>> nouns)
    : adjectives_(std::move(adjectives)), nouns_(std::move(nouns)) {}

std::set<std::string, std::less<>> Tagger::load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read word list " + path.string());
  std::set<std::string, std::less<>> out;
  std::string line;
  while (std::getline(in, line)) {
    auto w = text::trim(line);
    if (w.empty() || w.front() == '#') continue;
    out.insert(text::to_lower(w));
  }
  return out;
}

bool Tagger::is_adjective(std::string_view word) const { return adjectives_.contains(word); }
bool Tagger::is_noun(std::string_view word) const { return nouns_.contains(word); }

std::optional<std::string> Tagger::adjective_base(const std::string& w) const {
  // Comparatives and superlatives of known adjectives.
  for (std::string_view suffix : {"est", "er"}) {
    if (w.size() <= suffix.size() + 2 || !w.ends_with(suffix)) continue;
    std::string stem = w.substr(0, w.size() - suffix.size());
    if (adjectives_.contains(stem)) return stem;                     // cleaner
    if (adjectives_.contains(stem + "e")) return stem + "e";         // nicer
    if (stem.back() == 'i' && adjectives_.contains(stem.substr(0, stem.size() - 1) + "y")) {
      return stem.substr(0, stem.size() - 1) + "y";                  // happier
    }
    if (stem.size() > 2 && stem[stem.size() - 1] == stem[stem.size() - 2] &&
        adjectives_.contains(stem.substr(0, stem.size() - 1))) {
      return stem.substr(0, stem.size() - 1);                        // bigger
    }
  }
  return std::nullopt;
}

Tagger::Entry Tagger::classify(const std::string& lower, const std::string& surface,
                               std::size_t index, Pos previous, const std::string* next) const {
  if (text::is_punctuation(lower) || is_number(lower)) return {Pos::other, lower};

  const auto& closed = closed_class();
  if (auto it = closed.find(lower); it != closed.end()) {
    return {it->second.pos, it->second.lemma.empty() ? lower : std::string(it->second.lemma)};
  }

  const std::string singular = text::singularize(lower);
  const bool domain_noun = nouns_.contains(lower) || nouns_.contains(singular);
  const bool adjective = adjectives_.contains(lower);

  if (domain_noun && adjective) {
    const bool predicative = previous == Pos::verb || previous == Pos::adv || previous == Pos::neg;
    const bool attributive =
        next != nullptr && (nouns_.contains(*next) || nouns_.contains(text::singularize(*next)));
    if (predicative || attributive) return {Pos::adj, lower};
    return {Pos::noun, nouns_.contains(lower) ? lower : singular};
  }
  if (domain_noun) return {Pos::noun, nouns_.contains(lower) ? lower : singular};
  if (adjective) return {Pos::adj, lower};
  if (auto base = adjective_base(lower)) return {Pos::adj, *base};

  const auto& general = general_nouns();
  if (auto it = general.find(lower); it != general.end()) return {Pos::noun, std::string(it->second)};

  // Suffix rules for unknown words.
  if (has_suffix(lower, "ly", 4)) return {Pos::adv, lower};
  if ((has_suffix(lower, "ed", 4) || has_suffix(lower, "ing", 5)) &&
      (previous == Pos::verb || previous == Pos::adv)) {
    return {Pos::adj, lower};
  }
  if (adjective_suffix(lower)) return {Pos::adj, lower};
  if (noun_suffix(lower)) return {Pos::noun, lower};
  if (looks_plural(lower) && !has_suffix(lower, "ed", 4)) return {Pos::noun, singular};
  if (index > 0 && is_capitalized(surface)) return {Pos::noun, lower};
  return {Pos::other, lower};
}

std::vector<Token> Tagger::tag(std::string_view sentence) const {
  auto words = text::word_tokens(sentence);
  std::vector<std::string> lowers;
  lowers.reserve(words.size());
  for (const auto& w : words) lowers.push_back(text::to_lower(w));

  std::vector<Token> out;
  out.reserve(words.size());
  Pos previous = Pos::other;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string* next = i + 1 < words.size() ? &lowers[i + 1] : nullptr;
    Entry e = classify(lowers[i], words[i], i, previous, next);
    // "'s" after a pronoun is the copula ("it's"), otherwise possessive.
    if (lowers[i] == "'s" && i > 0) {
      static const std::set<std::string_view> pronouns = {"it", "that", "there", "he", "she",
                                                          "what", "here", "who"};
      if (pronouns.contains(lowers[i - 1])) e = {Pos::verb, "be"};
    }
    out.push_back(Token{words[i], std::move(e.lemma), e.pos, i});
    previous = e.pos;
  }
  return out;
}

}  // namespace justify
