#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace justify::csv {

/// Streaming RFC 4180 reader: quoted fields may contain separators,
/// doubled quotes and line breaks.
class Reader {
 public:
  explicit Reader(std::istream& in, char separator = ',');

  /// Next record, or nullopt at end of input. Throws FormatError on an
  /// unterminated quoted field.
  std::optional<std::vector<std::string>> next();

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  char sep_;
  std::size_t line_ = 0;
};

/// Maps header names to column positions.
class Header {
 public:
  explicit Header(std::vector<std::string> names);

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws FormatError naming the missing column.
  std::size_t require(std::string_view name) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
};

std::string escape(std::string_view field, char separator = ',');

}  // namespace justify::csv
