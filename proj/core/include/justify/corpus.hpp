#pragma once

#include <chrono>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace justify {

using Date = std::chrono::year_month_day;

/// Parses YYYY-MM-DD. Throws InvalidArgument on anything else, including
/// impossible days such as 2021-02-30.
Date parse_date(std::string_view iso);
std::string format_date(const Date& date);

struct Listing {
  std::string listing_id;
  std::set<std::string> amenities;
  std::optional<double> mean_rating;  // [1,5]

  bool operator==(const Listing&) const = default;
};

struct Review {
  std::string review_id;
  std::string listing_id;
  Date date;
  std::string text;
  std::optional<std::string> language;
  std::optional<std::string> reviewer_id;

  bool operator==(const Review&) const = default;
};

/// Listings and reviews with a per-listing review index. Every review's
/// listing resolves; the index lists review ids in (date, id) order.
class ReviewCorpus {
 public:
  ReviewCorpus() = default;

  void add_listing(Listing listing);
  /// Returns false (and stores nothing) when the listing is unknown.
  bool add_review(Review review);

  const std::map<std::string, Listing>& listings() const { return listings_; }
  const std::map<std::string, Review>& reviews() const { return reviews_; }

  /// Reviews of one listing in (date, id) order.
  std::vector<const Review*> reviews_of(std::string_view listing_id) const;

  std::size_t n_listings() const { return listings_.size(); }
  std::size_t n_reviews() const { return reviews_.size(); }

  /// Number of reviews dropped because their listing was unknown.
  std::size_t skipped_reviews() const { return skipped_; }
  void set_skipped_reviews(std::size_t n) { skipped_ = n; }

  bool operator==(const ReviewCorpus& other) const {
    return listings_ == other.listings_ && reviews_ == other.reviews_;
  }

 private:
  std::map<std::string, Listing> listings_;
  std::map<std::string, Review> reviews_;
  std::map<std::string, std::vector<std::string>, std::less<>> by_listing_;
  std::size_t skipped_ = 0;
};

/// Reads the listings and reviews CSVs. Throws IoError when a source cannot
/// be read and FormatError when a required column is missing.
ReviewCorpus load_corpus(std::istream& listings, std::istream& reviews);
ReviewCorpus load_corpus(const std::filesystem::path& listings,
                         const std::filesystem::path& reviews);

/// Writes the corpus back in the input CSV schema (ratings on [1,5]).
void write_corpus(const ReviewCorpus& corpus, const std::filesystem::path& listings,
                  const std::filesystem::path& reviews);

/// "en" or "other". Stopword ratio >= 0.18 means English; texts of at most
/// three tokens fall back to an ASCII-letter ratio >= 0.9.
std::string detect_language(std::string_view text);

struct FilterOptions {
  Date review_cutoff;       // keep reviews strictly before this day
  Date min_activity_since;  // drop listings with no kept review on/after this day
  std::string language = "en";
};

ReviewCorpus filter_corpus(const ReviewCorpus& corpus, const FilterOptions& options);

struct Summary {
  double min = 0;
  double max = 0;
  double mean = 0;
  double sd = 0;  // sample standard deviation; 0 for fewer than two values

  bool operator==(const Summary&) const = default;
};

Summary summarize(const std::vector<double>& values);

struct CorpusStats {
  Summary words_per_review;
  Summary reviews_per_listing;
  Summary amenities_per_listing;
  std::size_t n_listings = 0;
  std::size_t n_reviews = 0;
  std::optional<std::size_t> n_guests;  // only when reviewer ids are present
};

CorpusStats corpus_stats(const ReviewCorpus& corpus);

}  // namespace justify
