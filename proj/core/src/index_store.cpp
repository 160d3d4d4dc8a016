#include "justify/index_store.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "justify/errors.hpp"

namespace justify {
namespace {

using nlohmann::json;

std::string crc_hex(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

Quote quote_from_json(const json& j) {
  Quote q;
  q.review_id = j.at("review_id").get<std::string>();
  q.sentence_id = j.at("sentence_id").get<std::size_t>();
  q.date = parse_date(j.at("date").get<std::string>());
  q.text = j.at("text").get<std::string>();
  q.aspect_surface = j.at("aspect").get<std::string>();
  q.adjective_surface = j.at("adjective").get<std::string>();
  q.opinion = j.at("opinion").get<std::string>();
  return q;
}

json quotes_json(const std::vector<Quote>& quotes) {
  json arr = json::array();
  for (const auto& q : quotes) arr.push_back(to_json(q));
  return arr;
}

std::vector<Quote> quotes_from_json(const json& arr) {
  std::vector<Quote> out;
  for (const auto& q : arr) out.push_back(quote_from_json(q));
  return out;
}

Review review_from_json(const json& j) {
  Review r;
  r.review_id = j.at("review_id").get<std::string>();
  r.listing_id = j.at("listing_id").get<std::string>();
  r.date = parse_date(j.at("date").get<std::string>());
  r.text = j.at("text").get<std::string>();
  if (j.contains("language")) r.language = j["language"].get<std::string>();
  if (j.contains("reviewer_id")) r.reviewer_id = j["reviewer_id"].get<std::string>();
  return r;
}

}  // namespace

json to_json(const Quote& quote) {
  return {{"review_id", quote.review_id},
          {"sentence_id", quote.sentence_id},
          {"date", format_date(quote.date)},
          {"text", quote.text},
          {"aspect", quote.aspect_surface},
          {"adjective", quote.adjective_surface},
          {"opinion", quote.opinion}};
}

json to_json(const Review& review) {
  json j = {{"review_id", review.review_id},
            {"listing_id", review.listing_id},
            {"date", format_date(review.date)},
            {"text", review.text}};
  if (review.language) j["language"] = *review.language;
  if (review.reviewer_id) j["reviewer_id"] = *review.reviewer_id;
  return j;
}

json to_json(const ItemAnalysis& item) {
  json tuples = json::array();
  for (const auto& t : item.tuples) {
    tuples.push_back({{"aspect", t.aspect},
                      {"asp_rev", t.asp_rev},
                      {"adjective", t.adjective},
                      {"asp_adj_rev", t.asp_adj_rev},
                      {"evaluation", t.evaluation},
                      {"dimension", t.dimension ? json(*t.dimension) : json(nullptr)}});
  }
  json pairs = json::array();
  for (const auto& [key, quotes] : item.quotes.pairs()) {
    pairs.push_back({{"aspect", key.first}, {"adjective", key.second}, {"quotes", quotes_json(quotes)}});
  }
  json signs = json::array();
  for (const auto& [key, quotes] : item.quotes.signs()) {
    signs.push_back({{"aspect", key.first}, {"sign", to_string(key.second)}, {"quotes", quotes_json(quotes)}});
  }
  json reviews = json::array();
  for (const auto& r : item.reviews) reviews.push_back(to_json(r));

  return {{"item_id", item.item_id},
          {"n_reviews", item.n_reviews},
          {"amenities", item.amenities},
          {"mean_rating", item.mean_rating ? json(*item.mean_rating) : json(nullptr)},
          {"coarse_values", item.coarse_values},
          {"tuples", std::move(tuples)},
          {"quotes", {{"pairs", std::move(pairs)}, {"signs", std::move(signs)}}},
          {"reviews", std::move(reviews)}};
}

ItemAnalysis item_from_json(const json& j, const DimensionTaxonomy& taxonomy) {
  ItemAnalysis item;
  item.item_id = j.at("item_id").get<std::string>();
  item.n_reviews = j.at("n_reviews").get<std::size_t>();
  item.amenities = j.at("amenities").get<std::vector<std::string>>();
  if (!j.at("mean_rating").is_null()) item.mean_rating = j["mean_rating"].get<double>();
  item.coarse_values = j.at("coarse_values").get<std::map<CoarseDimensionId, double>>();
  for (const auto& t : j.at("tuples")) {
    AspectTuple tuple;
    tuple.aspect = t.at("aspect").get<std::string>();
    tuple.asp_rev = t.at("asp_rev").get<std::size_t>();
    tuple.adjective = t.at("adjective").get<std::string>();
    tuple.asp_adj_rev = t.at("asp_adj_rev").get<std::size_t>();
    tuple.evaluation = t.at("evaluation").get<double>();
    if (!t.at("dimension").is_null()) {
      auto dim = t["dimension"].get<std::string>();
      if (!taxonomy.find_fine(dim)) throw IntegrityError("item " + item.item_id + ": unknown dimension '" + dim + "'");
      tuple.dimension = std::move(dim);
    }
    item.tuples.push_back(std::move(tuple));
  }
  for (const auto& p : j.at("quotes").at("pairs")) {
    for (auto& q : quotes_from_json(p.at("quotes"))) {
      item.quotes.insert_pair({p.at("aspect").get<std::string>(), p.at("adjective").get<std::string>()},
                              std::move(q));
    }
  }
  for (const auto& s : j.at("quotes").at("signs")) {
    for (auto& q : quotes_from_json(s.at("quotes"))) {
      item.quotes.insert_sign({s.at("aspect").get<std::string>(), parse_sign(s.at("sign").get<std::string>())},
                              std::move(q));
    }
  }
  for (const auto& r : j.at("reviews")) item.reviews.push_back(review_from_json(r));
  check_tuple_invariants(item.tuples, item.n_reviews);
  return item;
}

std::string serialize_index(const AnalysisIndex& index) {
  json items = json::array();
  for (const auto& item : index.items) items.push_back(to_json(item));
  json doc = {{"version", kIndexVersion}, {"taxonomy", to_json(index.taxonomy)}, {"items", std::move(items)}};
  std::string body = doc.dump();
  return body + "\ncrc32 " + crc_hex(body) + "\n";
}

AnalysisIndex parse_index(const std::string& document) {
  auto marker = document.rfind("\ncrc32 ");
  if (marker == std::string::npos) throw CorruptIndexError("index has no checksum line");
  std::string body = document.substr(0, marker);
  std::string stored = document.substr(marker + 7);
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
  if (stored != crc_hex(body)) throw CorruptIndexError("index checksum mismatch");

  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw CorruptIndexError(std::string("index is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version")) throw CorruptIndexError("index has no version");
  if (doc["version"] != kIndexVersion) {
    throw VersionError("unsupported index version " + doc["version"].dump());
  }
  try {
    AnalysisIndex index;
    index.taxonomy = load_taxonomy(doc.at("taxonomy"));
    for (const auto& item : doc.at("items")) index.items.push_back(item_from_json(item, index.taxonomy));
    return index;
  } catch (const json::exception& e) {
    throw CorruptIndexError(std::string("malformed index: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw CorruptIndexError(std::string("malformed index: ") + e.what());
  }
}

void save_index(const AnalysisIndex& index, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << serialize_index(index);
    if (!out.flush()) throw IoError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

AnalysisIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_index(ss.str());
}

}  // namespace justify
