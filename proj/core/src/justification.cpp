#include "justify/justification.hpp"

#include <algorithm>

#include <boost/multiprecision/cpp_int.hpp>
#include <zlib.h>

#include "justify/errors.hpp"

namespace justify {
namespace {

using nlohmann::json;

json adjectives_json(const std::vector<AdjectiveRank>& adjectives) {
  json arr = json::array();
  for (const auto& a : adjectives) {
    arr.push_back({{"adjective", a.adjective}, {"count", a.count}, {"evaluation", a.evaluation}});
  }
  return arr;
}

std::optional<double> overall_mean(std::span<const AspectTuple> tuples) {
  using Rational = boost::multiprecision::cpp_rational;
  Rational sum = 0;
  std::size_t weight = 0;
  for (const auto& t : tuples) {
    sum += Rational(t.evaluation) * t.asp_adj_rev;
    weight += t.asp_adj_rev;
  }
  if (weight == 0) return std::nullopt;
  return (sum / weight).convert_to<double>();
}

DimensionPage dimension_page(const ItemAnalysis& item, const FineDimension& fine, std::size_t offset) {
  auto ranked = rank_aspects(item.tuples, std::string_view(fine.id));
  DimensionPage page;
  page.id = fine.id;
  page.label = fine.label;
  page.n_aspects = ranked.size();
  page.has_info = !ranked.empty();
  page.offset = offset;
  for (std::size_t i = offset; i < ranked.size() && i < offset + kAspectPageSize; ++i) {
    const auto& r = ranked[i];
    page.aspects.push_back({r.aspect, r.asp_rev, thumb_counts(item.tuples, r.aspect),
                            rank_adjectives(item.tuples, r.aspect)});
  }
  page.has_more = offset + kAspectPageSize < ranked.size();
  return page;
}

}  // namespace

std::string_view to_string(Model model) {
  switch (model) {
    case Model::thumbs: return "m-thumbs";
    case Model::aspects: return "m-aspects";
    case Model::summary: return "m-summary";
    case Model::opinions: return "m-opinions";
    case Model::reviews: return "m-reviews";
  }
  return "m-thumbs";
}

Model parse_model(std::string_view text) {
  for (Model m : kAllModels) {
    if (to_string(m) == text) return m;
  }
  throw InvalidArgument("unknown model '" + std::string(text) + "'");
}

json to_json(const DimensionPage& page, Model model) {
  json aspects = json::array();
  for (const auto& a : page.aspects) {
    json entry = {{"aspect", a.aspect}, {"asp_rev", a.asp_rev}};
    if (model == Model::thumbs) {
      entry["thumbs"] = {{"up", a.thumbs.up}, {"down", a.thumbs.down}};
    } else {
      entry["adjectives"] = adjectives_json(a.adjectives);
    }
    aspects.push_back(std::move(entry));
  }
  return {{"id", page.id},
          {"label", page.label},
          {"n_aspects", page.n_aspects},
          {"has_info", page.has_info},
          {"offset", page.offset},
          {"aspects", std::move(aspects)},
          {"has_more", page.has_more}};
}

json to_json(const ReviewPage& page) {
  json reviews = json::array();
  for (const auto& r : page.reviews) {
    reviews.push_back({{"review_id", r.review_id}, {"date", format_date(r.date)}, {"text", r.text}});
  }
  return {{"offset", page.offset}, {"total", page.total}, {"has_more", page.has_more}, {"reviews", std::move(reviews)}};
}

json to_json(const JustificationPayload& payload) {
  json j = {{"item_id", payload.item_id}, {"model", to_string(payload.model)}, {"amenities", payload.amenities}};
  switch (payload.model) {
    case Model::thumbs:
    case Model::aspects: {
      json bars = json::array();
      for (const auto& b : payload.bars) {
        json fine = json::array();
        for (const auto& page : b.fine_dims) fine.push_back(to_json(page, payload.model));
        bars.push_back({{"dim", b.id},
                        {"label", b.label},
                        {"value", b.value},
                        {"zero_knowledge", b.zero_knowledge},
                        {"fine_dims", std::move(fine)}});
      }
      j["bars"] = std::move(bars);
      break;
    }
    case Model::summary:
      j["summary"] = payload.summary.value_or("");
      break;
    case Model::opinions: {
      json bars = json::array();
      for (const auto& o : payload.opinions) {
        bars.push_back({{"aspect", o.aspect},
                        {"bar_value", o.bar_value},
                        {"asp_rev", o.asp_rev},
                        {"adjectives", adjectives_json(o.adjectives)}});
      }
      j["opinions"] = std::move(bars);
      break;
    }
    case Model::reviews:
      j["mean_rating"] = payload.mean_rating ? json(*payload.mean_rating) : json(nullptr);
      j["reviews"] = payload.reviews ? to_json(*payload.reviews) : json(nullptr);
      break;
  }
  return j;
}

std::uint64_t stable_seed(std::string_view item_id) {
  uLong crc = crc32(0L, Z_NULL, 0);
  return crc32(crc, reinterpret_cast<const Bytef*>(item_id.data()), static_cast<uInt>(item_id.size()));
}

JustificationService::JustificationService(std::shared_ptr<const AnalysisIndex> index,
                                           SummaryGrammar grammar, SummaryOptions summary_defaults)
    : index_(std::move(index)), grammar_(std::move(grammar)), summary_defaults_(summary_defaults) {
  if (!index_) throw InvalidArgument("justification service needs an index");
}

std::vector<std::string> JustificationService::item_ids() const {
  std::vector<std::string> ids;
  for (const auto& item : index_->items) ids.push_back(item.item_id);
  return ids;
}

const ItemAnalysis& JustificationService::item(std::string_view item_id) const {
  auto it = std::find_if(index_->items.begin(), index_->items.end(),
                         [&](const ItemAnalysis& i) { return i.item_id == item_id; });
  if (it == index_->items.end()) throw NotFoundError("unknown item '" + std::string(item_id) + "'");
  return *it;
}

std::string JustificationService::summary_text(std::string_view item_id) const {
  const auto& it = item(item_id);
  SummaryOptions options = summary_defaults_;
  options.seed = stable_seed(item_id);
  return generate_summary(it.tuples, grammar_, options).text;
}

JustificationPayload JustificationService::get_justification(std::string_view item_id, Model model) const {
  const auto& it = item(item_id);
  const auto& taxonomy = index_->taxonomy;
  JustificationPayload p;
  p.item_id = it.item_id;
  p.model = model;
  p.amenities = it.amenities;

  switch (model) {
    case Model::thumbs:
    case Model::aspects:
      for (const auto& coarse : taxonomy.coarse_dims()) {
        if (!coarse.presented) continue;
        CoarseBar bar;
        bar.id = coarse.id;
        bar.label = coarse.label;
        auto v = it.coarse_values.find(coarse.id);
        bar.value = v == it.coarse_values.end() ? 0.0 : v->second;
        bar.zero_knowledge = bar.value == 0.0;
        for (const auto& rank : rank_fine_dims(it.tuples, coarse.id, taxonomy)) {
          bar.fine_dims.push_back(dimension_page(it, *taxonomy.find_fine(rank.id), 0));
        }
        p.bars.push_back(std::move(bar));
      }
      break;
    case Model::summary:
      p.summary = summary_text(item_id);
      break;
    case Model::opinions:
      for (const auto& r : rank_aspects(it.tuples)) {
        p.opinions.push_back({r.aspect, aspect_bar_value(it.tuples, r.aspect), r.asp_rev,
                              rank_adjectives(it.tuples, r.aspect)});
      }
      break;
    case Model::reviews:
      p.mean_rating = it.mean_rating ? it.mean_rating : overall_mean(it.tuples);
      p.reviews = get_reviews(item_id, 0);
      break;
  }
  return p;
}

std::vector<Quote> JustificationService::get_quotes(std::string_view item_id, std::string_view aspect,
                                                    const QuoteFilter& filter) const {
  const auto& it = item(item_id);
  if (std::none_of(it.tuples.begin(), it.tuples.end(), [&](const AspectTuple& t) { return t.aspect == aspect; })) {
    throw NotFoundError("unknown aspect '" + std::string(aspect) + "' for item " + it.item_id);
  }
  if (const auto* adj = std::get_if<AdjectiveFilter>(&filter)) return it.quotes.by_pair(aspect, adj->adjective);
  return it.quotes.by_sign(aspect, std::get<Sign>(filter));
}

DimensionPage JustificationService::get_dimension(std::string_view item_id, std::string_view fine_id,
                                                  std::size_t offset) const {
  const auto& it = item(item_id);
  const auto* fine = index_->taxonomy.find_fine(fine_id);
  if (!fine) throw NotFoundError("unknown fine dimension '" + std::string(fine_id) + "'");
  return dimension_page(it, *fine, offset);
}

ReviewPage JustificationService::get_reviews(std::string_view item_id, std::size_t offset) const {
  const auto& it = item(item_id);
  ReviewPage page;
  page.offset = offset;
  page.total = it.reviews.size();
  for (std::size_t i = offset; i < it.reviews.size() && i < offset + kReviewPageSize; ++i) {
    page.reviews.push_back(it.reviews[i]);
  }
  page.has_more = offset + kReviewPageSize < it.reviews.size();
  return page;
}

}  // namespace justify
