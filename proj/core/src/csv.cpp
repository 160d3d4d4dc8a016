#include "justify/csv.hpp"

#include <algorithm>

#include "justify/errors.hpp"
#include "justify/text.hpp"

namespace justify::csv {

Reader::Reader(std::istream& in, char separator) : in_(in), sep_(separator) {}

std::optional<std::vector<std::string>> Reader::next() {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  std::size_t start_line = line_ + 1;
  int ch;
  while ((ch = in_.get()) != std::char_traits<char>::eof()) {
    any = true;
    char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == sep_) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      // CRLF: swallow, the '\n' ends the record
    } else if (c == '\n') {
      ++line_;
      fields.push_back(std::move(field));
      return fields;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) {
    throw FormatError("unterminated quoted field starting on line " + std::to_string(start_line));
  }
  if (!any) return std::nullopt;
  ++line_;
  fields.push_back(std::move(field));
  return fields;
}

Header::Header(std::vector<std::string> names) : names_(std::move(names)) {
  for (auto& n : names_) {
    // Tolerate a UTF-8 BOM on the first column and stray spaces.
    if (n.starts_with("\xEF\xBB\xBF")) n.erase(0, 3);
    n = std::string(text::trim(n));
  }
}

std::optional<std::size_t> Header::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t Header::require(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw FormatError("missing column '" + std::string(name) + "'");
}

std::string escape(std::string_view field, char separator) {
  bool quote = field.find_first_of(std::string{'"', '\n', '\r', separator}) != std::string_view::npos;
  if (!quote) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace justify::csv
