#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace justify::text {

struct SentenceSpan {
  std::string text;
  std::size_t begin = 0;  // byte offset into the source text
  std::size_t end = 0;    // one past the last byte
};

/// Splits on runs of '.', '!' or '?' that are followed by whitespace or end
/// of input. Known abbreviations ("Mr.", "e.g.", ...) and single capital
/// initials do not end a sentence. Blank lines also end a sentence.
/// Spans are trimmed of surrounding whitespace and point into `text`.
std::vector<SentenceSpan> segment_sentences(std::string_view text);

/// Word and punctuation tokens. Words keep inner hyphens ("check-in").
/// Possessives and negative contractions are split ("host's" -> "host",
/// "'s"; "wasn't" -> "was", "n't").
std::vector<std::string> word_tokens(std::string_view sentence);

std::vector<std::string_view> whitespace_tokens(std::string_view text);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

bool is_punctuation(std::string_view token);

/// Plural noun to singular ("beds" -> "bed", "amenities" -> "amenity").
/// Input must be lowercase; words that do not look plural come back as-is.
std::string singularize(std::string_view word);

}  // namespace justify::text
