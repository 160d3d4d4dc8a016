#include "justify/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "justify/csv.hpp"
#include "justify/errors.hpp"
#include "justify/text.hpp"

namespace justify {
namespace {

const std::unordered_set<std::string_view>& english_stopwords() {
  static const std::unordered_set<std::string_view> words = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and",
      "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing", "down",
      "during", "each", "even", "every", "few", "for", "from", "further", "get", "got", "had",
      "has", "have", "having", "he", "her", "here", "hers", "herself", "him", "himself",
      "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "me",
      "more", "most", "much", "my", "myself", "no", "nor", "not", "now", "of", "off", "on",
      "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own",
      "really", "same", "she", "should", "so", "some", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this",
      "those", "through", "to", "too", "under", "until", "up", "us", "very", "was", "we",
      "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will",
      "with", "would", "you", "your", "yours", "yourself", "yourselves",
  };
  return words;
}

std::vector<std::string> letter_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalpha(u) || u >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::set<std::string> parse_amenities(std::string_view raw) {
  std::set<std::string> out;
  std::string_view s = text::trim(raw);
  if (s.empty()) return out;
  if (s.front() == '[') {
    try {
      auto j = nlohmann::json::parse(s);
      for (const auto& e : j) {
        if (e.is_string()) {
          auto v = std::string(text::trim(e.get<std::string>()));
          if (!v.empty()) out.insert(v);
        }
      }
      return out;
    } catch (const nlohmann::json::exception&) {
      // fall through to the loose parser
    }
  }
  // Loose form: {TV,Wifi,"Air conditioning"} or [a, b].
  if (s.front() == '{' || s.front() == '[') s.remove_prefix(1);
  if (!s.empty() && (s.back() == '}' || s.back() == ']')) s.remove_suffix(1);
  std::string cur;
  bool quoted = false;
  auto flush = [&] {
    auto v = std::string(text::trim(cur));
    if (!v.empty()) out.insert(v);
    cur.clear();
  };
  for (char c : s) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

std::optional<double> parse_number(std::string_view raw) {
  std::string s(text::trim(raw));
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

const std::string& field(const std::vector<std::string>& row, std::size_t i) {
  static const std::string empty;
  return i < row.size() ? row[i] : empty;
}

bool date_before(const Review& a, const Review& b) {
  if (a.date != b.date) return a.date < b.date;
  return a.review_id < b.review_id;
}

}  // namespace

Date parse_date(std::string_view iso) {
  auto s = text::trim(iso);
  // Accept a trailing time part ("2019-05-01 10:00:00").
  if (s.size() > 10 && (s[10] == ' ' || s[10] == 'T')) s = s.substr(0, 10);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    throw InvalidArgument("invalid date '" + std::string(iso) + "' (expected YYYY-MM-DD)");
  }
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  auto parse = [&](std::string_view part, auto& out) {
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc{} || p != part.data() + part.size()) {
      throw InvalidArgument("invalid date '" + std::string(iso) + "'");
    }
  };
  parse(s.substr(0, 4), y);
  parse(s.substr(5, 2), m);
  parse(s.substr(8, 2), d);
  Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) throw InvalidArgument("invalid date '" + std::string(iso) + "'");
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

void ReviewCorpus::add_listing(Listing listing) {
  by_listing_.try_emplace(listing.listing_id);
  std::string id = listing.listing_id;
  listings_.insert_or_assign(std::move(id), std::move(listing));
}

bool ReviewCorpus::add_review(Review review) {
  auto it = by_listing_.find(review.listing_id);
  if (it == by_listing_.end()) return false;
  auto& ids = it->second;
  if (reviews_.contains(review.review_id)) {
    // Replacing a review: drop the stale index entry first.
    const auto& old = reviews_.at(review.review_id);
    auto& old_ids = by_listing_[old.listing_id];
    old_ids.erase(std::remove(old_ids.begin(), old_ids.end(), review.review_id), old_ids.end());
  }
  ids.push_back(review.review_id);
  std::string id = review.review_id;
  reviews_.insert_or_assign(std::move(id), std::move(review));
  return true;
}

std::vector<const Review*> ReviewCorpus::reviews_of(std::string_view listing_id) const {
  std::vector<const Review*> out;
  auto it = by_listing_.find(listing_id);
  if (it == by_listing_.end()) return out;
  out.reserve(it->second.size());
  for (const auto& id : it->second) out.push_back(&reviews_.at(id));
  std::sort(out.begin(), out.end(), [](const Review* a, const Review* b) { return date_before(*a, *b); });
  return out;
}

ReviewCorpus load_corpus(std::istream& listings_in, std::istream& reviews_in) {
  ReviewCorpus corpus;

  csv::Reader lr(listings_in);
  auto lhead_row = lr.next();
  if (!lhead_row) throw FormatError("listings source is empty (no header)");
  csv::Header lhead(std::move(*lhead_row));
  const std::size_t l_id = lhead.require("id");
  const auto l_amen = lhead.find("amenities");
  const auto l_rating = lhead.find("review_scores_rating");

  std::vector<Listing> listings;
  double max_rating = 0;
  while (auto row = lr.next()) {
    if (row->size() == 1 && text::trim((*row)[0]).empty()) continue;
    Listing l;
    l.listing_id = std::string(text::trim(field(*row, l_id)));
    if (l.listing_id.empty()) continue;
    if (l_amen) l.amenities = parse_amenities(field(*row, *l_amen));
    if (l_rating) {
      l.mean_rating = parse_number(field(*row, *l_rating));
      if (l.mean_rating) max_rating = std::max(max_rating, *l.mean_rating);
    }
    listings.push_back(std::move(l));
  }
  const bool percent_scale = max_rating > 5.0;
  for (auto& l : listings) {
    if (l.mean_rating && percent_scale) l.mean_rating = 1.0 + 4.0 * (*l.mean_rating / 100.0);
    if (l.mean_rating) l.mean_rating = std::clamp(*l.mean_rating, 1.0, 5.0);
    corpus.add_listing(std::move(l));
  }

  csv::Reader rr(reviews_in);
  auto rhead_row = rr.next();
  if (!rhead_row) return corpus;  // empty reviews file
  csv::Header rhead(std::move(*rhead_row));
  const std::size_t r_id = rhead.require("id");
  const std::size_t r_listing = rhead.require("listing_id");
  const std::size_t r_date = rhead.require("date");
  const std::size_t r_text = rhead.require("comments");
  const auto r_reviewer = rhead.find("reviewer_id");
  const auto r_lang = rhead.find("language");

  std::size_t skipped = 0;
  while (auto row = rr.next()) {
    if (row->size() == 1 && text::trim((*row)[0]).empty()) continue;
    Review r;
    r.review_id = std::string(text::trim(field(*row, r_id)));
    r.listing_id = std::string(text::trim(field(*row, r_listing)));
    r.text = std::string(text::trim(field(*row, r_text)));
    if (r.review_id.empty() || r.text.empty()) {
      ++skipped;
      continue;
    }
    try {
      r.date = parse_date(field(*row, r_date));
    } catch (const InvalidArgument&) {
      ++skipped;
      continue;
    }
    if (r_reviewer) {
      auto v = std::string(text::trim(field(*row, *r_reviewer)));
      if (!v.empty()) r.reviewer_id = std::move(v);
    }
    if (r_lang) {
      auto v = std::string(text::trim(field(*row, *r_lang)));
      if (!v.empty()) r.language = std::move(v);
    }
    if (!corpus.add_review(std::move(r))) ++skipped;
  }
  corpus.set_skipped_reviews(skipped);
  return corpus;
}

ReviewCorpus load_corpus(const std::filesystem::path& listings,
                         const std::filesystem::path& reviews) {
  std::ifstream lin(listings, std::ios::binary);
  if (!lin) throw IoError("cannot read listings source " + listings.string());
  std::ifstream rin(reviews, std::ios::binary);
  if (!rin) throw IoError("cannot read reviews source " + reviews.string());
  return load_corpus(lin, rin);
}

void write_corpus(const ReviewCorpus& corpus, const std::filesystem::path& listings,
                  const std::filesystem::path& reviews) {
  std::ofstream lout(listings, std::ios::binary);
  if (!lout) throw IoError("cannot write " + listings.string());
  lout << "id,amenities,review_scores_rating\n";
  for (const auto& [id, l] : corpus.listings()) {
    nlohmann::json amen = l.amenities;
    lout << csv::escape(id) << ',' << csv::escape(amen.dump()) << ',';
    if (l.mean_rating) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", *l.mean_rating);
      lout << buf;
    }
    lout << '\n';
  }
  std::ofstream rout(reviews, std::ios::binary);
  if (!rout) throw IoError("cannot write " + reviews.string());
  rout << "id,listing_id,date,comments,reviewer_id\n";
  for (const auto& [id, r] : corpus.reviews()) {
    rout << csv::escape(id) << ',' << csv::escape(r.listing_id) << ',' << format_date(r.date)
         << ',' << csv::escape(r.text) << ',' << csv::escape(r.reviewer_id.value_or("")) << '\n';
  }
}

std::string detect_language(std::string_view text) {
  auto trimmed = text::trim(text);
  if (trimmed.empty()) return "other";
  auto words = letter_words(trimmed);
  if (words.size() <= 3) {
    std::size_t letters = 0;
    std::size_t ascii = 0;
    for (char c : trimmed) {
      unsigned char u = static_cast<unsigned char>(c);
      if (std::isspace(u) || std::ispunct(u) || std::isdigit(u)) continue;
      ++letters;
      if (u < 0x80) ++ascii;
    }
    if (letters == 0) return "other";
    return static_cast<double>(ascii) / static_cast<double>(letters) >= 0.9 ? "en" : "other";
  }
  const auto& stop = english_stopwords();
  std::size_t hits = 0;
  for (const auto& w : words) hits += stop.contains(w) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(words.size()) >= 0.18 ? "en" : "other";
}

ReviewCorpus filter_corpus(const ReviewCorpus& corpus, const FilterOptions& options) {
  const std::chrono::sys_days cutoff{options.review_cutoff};
  const std::chrono::sys_days active{options.min_activity_since};

  std::map<std::string, std::vector<const Review*>> kept;
  for (const auto& [id, r] : corpus.reviews()) {
    if (std::chrono::sys_days{r.date} >= cutoff) continue;
    const std::string lang = r.language ? *r.language : detect_language(r.text);
    if (lang != options.language) continue;
    kept[r.listing_id].push_back(&r);
  }

  ReviewCorpus out;
  for (const auto& [lid, listing] : corpus.listings()) {
    auto it = kept.find(lid);
    if (it == kept.end()) continue;
    bool recent = std::any_of(it->second.begin(), it->second.end(), [&](const Review* r) {
      return std::chrono::sys_days{r->date} >= active;
    });
    if (!recent) continue;
    out.add_listing(listing);
    for (const Review* r : it->second) out.add_review(*r);
  }
  return out;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  s.min = *mn;
  s.max = *mx;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1));
  }
  return s;
}

CorpusStats corpus_stats(const ReviewCorpus& corpus) {
  CorpusStats st;
  st.n_listings = corpus.n_listings();
  st.n_reviews = corpus.n_reviews();

  std::vector<double> words;
  words.reserve(corpus.n_reviews());
  std::set<std::string> guests;
  bool have_guests = false;
  for (const auto& [id, r] : corpus.reviews()) {
    words.push_back(static_cast<double>(text::whitespace_tokens(r.text).size()));
    if (r.reviewer_id) {
      have_guests = true;
      guests.insert(*r.reviewer_id);
    }
  }
  std::vector<double> per_listing;
  std::vector<double> amenities;
  for (const auto& [id, l] : corpus.listings()) {
    per_listing.push_back(static_cast<double>(corpus.reviews_of(id).size()));
    amenities.push_back(static_cast<double>(l.amenities.size()));
  }
  st.words_per_review = summarize(words);
  st.reviews_per_listing = summarize(per_listing);
  st.amenities_per_listing = summarize(amenities);
  if (have_guests) st.n_guests = guests.size();
  return st;
}

}  // namespace justify
