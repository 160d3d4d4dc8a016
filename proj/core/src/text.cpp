#include "justify/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

namespace justify::text {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) {
  // Bytes >= 0x80 belong to UTF-8 sequences and are kept inside words.
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || static_cast<unsigned char>(c) >= 0x80;
}
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

constexpr std::array kAbbreviations = {
    "mr", "mrs", "ms", "dr", "st", "prof", "sr", "jr", "vs", "etc", "e.g", "i.e",
    "approx", "min", "max", "no", "nr", "ave", "rd", "mt", "ft", "incl", "esp", "dept",
};

bool ends_with_abbreviation(std::string_view before) {
  // `before` is the text up to (excluding) the period.
  std::size_t start = before.size();
  while (start > 0 && (is_alnum(before[start - 1]) || before[start - 1] == '.')) --start;
  std::string word = to_lower(before.substr(start));
  if (word.empty()) return false;
  if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(before[start])) &&
      std::isupper(static_cast<unsigned char>(before[start]))) {
    return true;  // initial, "J. Smith"
  }
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::vector<SentenceSpan> segment_sentences(std::string_view text) {
  std::vector<SentenceSpan> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    if (b < e) out.push_back({std::string(text.substr(b, e - b)), b, e});
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      // Blank line ends a paragraph.
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < text.size() && text[j] == '\n') {
        emit(start, i);
        start = j + 1;
        i = j + 1;
        continue;
      }
      ++i;
      continue;
    }
    if (!is_terminator(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_terminator(text[j])) ++j;
    // Closing quotes/brackets stay with the sentence.
    while (j < text.size() && (text[j] == '"' || text[j] == '\'' || text[j] == ')')) ++j;
    bool boundary = j == text.size() || is_space(text[j]);
    if (boundary && c == '.' && j == i + 1 && ends_with_abbreviation(text.substr(0, i))) {
      boundary = false;
    }
    if (boundary) {
      emit(start, j);
      start = j;
    }
    i = j;
  }
  emit(start, text.size());
  return out;
}

std::vector<std::string> word_tokens(std::string_view sentence) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = sentence.size();
  while (i < n) {
    char c = sentence[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (!is_alnum(c)) {
      // Punctuation: keep runs of the same mark together ("!!", "...").
      std::size_t j = i + 1;
      while (j < n && sentence[j] == c) ++j;
      out.emplace_back(sentence.substr(i, j - i));
      i = j;
      continue;
    }
    std::size_t j = i;
    while (j < n) {
      if (is_alnum(sentence[j])) {
        ++j;
      } else if ((sentence[j] == '-' || sentence[j] == '\'') && j + 1 < n &&
                 is_alnum(sentence[j + 1])) {
        j += 2;
      } else {
        break;
      }
    }
    std::string word(sentence.substr(i, j - i));
    std::string lower = to_lower(word);
    if (lower.size() > 3 && lower.ends_with("n't")) {
      out.push_back(word.substr(0, word.size() - 3));
      out.push_back(word.substr(word.size() - 3));
    } else if (lower.size() > 2 && lower.ends_with("'s")) {
      out.push_back(word.substr(0, word.size() - 2));
      out.push_back(word.substr(word.size() - 2));
    } else {
      out.push_back(std::move(word));
    }
    i = j;
  }
  return out;
}

std::vector<std::string_view> whitespace_tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_punctuation(std::string_view token) {
  return !token.empty() && std::none_of(token.begin(), token.end(), is_alnum);
}

std::string singularize(std::string_view word) {
  static const std::unordered_map<std::string_view, std::string_view> irregular = {
      {"children", "child"}, {"people", "person"}, {"men", "man"},       {"women", "woman"},
      {"feet", "foot"},      {"teeth", "tooth"},   {"mice", "mouse"},    {"knives", "knife"},
      {"wives", "wife"},     {"lives", "life"},    {"shelves", "shelf"}, {"geese", "goose"},
      {"cookies", "cookie"}, {"movies", "movie"},  {"pies", "pie"},      {"ties", "tie"},
      {"series", "series"},  {"species", "species"}, {"news", "news"},   {"clothes", "clothes"},
      {"stairs", "stairs"},  {"toiletries", "toiletry"}, {"premises", "premises"},
  };
  std::string w(word);
  if (auto it = irregular.find(word); it != irregular.end()) return std::string(it->second);
  if (w.size() <= 3 || w.back() != 's') return w;
  if (w.ends_with("ss") || w.ends_with("us") || w.ends_with("is") || w.ends_with("'s")) return w;
  if (w.ends_with("ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  for (std::string_view suffix : {"sses", "shes", "ches", "xes", "zes"}) {
    if (w.ends_with(suffix)) return w.substr(0, w.size() - 2);
  }
  return w.substr(0, w.size() - 1);
}

}  // namespace justify::text
