#include "justify/aggregation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "justify/csv.hpp"
#include "justify/errors.hpp"
#include "justify/text.hpp"

namespace justify {
namespace {

using Rational = boost::multiprecision::cpp_rational;

// Exact sum of weight * value, divided once.
class WeightedMean {
 public:
  void add(double value, std::size_t weight) {
    sum_ += Rational(value) * weight;
    weight_ += weight;
  }
  bool empty() const { return weight_ == 0; }
  double value() const { return (sum_ / weight_).convert_to<double>(); }

 private:
  Rational sum_ = 0;
  std::size_t weight_ = 0;
};

bool tuple_matches(const AspectTuple& t, std::string_view aspect) { return t.aspect == aspect; }

void require_aspect(std::span<const AspectTuple> tuples, std::string_view aspect) {
  if (std::none_of(tuples.begin(), tuples.end(),
                   [&](const AspectTuple& t) { return tuple_matches(t, aspect); })) {
    throw NotFoundError("unknown aspect '" + std::string(aspect) + "'");
  }
}

std::optional<std::size_t> parse_count(const std::string& raw) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(raw, &used);
    if (used != raw.size() || v < 0) return std::nullopt;
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<AspectRank> rank_aspects(std::span<const AspectTuple> tuples,
                                     std::optional<std::string_view> fine_dim) {
  std::map<std::string, AspectRank> by_aspect;
  for (const auto& t : tuples) {
    if (fine_dim && t.dimension != std::optional<FineDimensionId>(std::string(*fine_dim))) continue;
    auto& r = by_aspect[t.aspect];
    r.aspect = t.aspect;
    r.asp_rev = std::max(r.asp_rev, t.asp_rev);
    r.adj_total += t.asp_adj_rev;
  }
  std::vector<AspectRank> out;
  out.reserve(by_aspect.size());
  for (auto& [_, r] : by_aspect) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(), [](const AspectRank& a, const AspectRank& b) {
    if (a.asp_rev != b.asp_rev) return a.asp_rev > b.asp_rev;
    if (a.adj_total != b.adj_total) return a.adj_total > b.adj_total;
    return a.aspect < b.aspect;
  });
  return out;
}

std::vector<AdjectiveRank> rank_adjectives(std::span<const AspectTuple> tuples,
                                           std::string_view aspect) {
  require_aspect(tuples, aspect);
  std::vector<AdjectiveRank> out;
  for (const auto& t : tuples) {
    if (tuple_matches(t, aspect)) out.push_back({t.adjective, t.asp_adj_rev, t.evaluation});
  }
  std::sort(out.begin(), out.end(), [](const AdjectiveRank& a, const AdjectiveRank& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.adjective < b.adjective;
  });
  return out;
}

std::vector<AspectTuple> build_tuple_table(
    std::span<const PairMention> mentions, const EvaluationFn& evaluate,
    const std::set<std::pair<std::string, std::string>>& aspect_occurrences) {
  struct PairAcc {
    std::set<std::string> reviews;
    Rational eval_sum = 0;
    std::size_t n_mentions = 0;
  };
  std::map<std::pair<std::string, std::string>, PairAcc> pairs;
  std::map<std::string, std::set<std::string>> aspect_reviews;
  std::map<std::string, std::optional<FineDimensionId>> dimension;

  for (const auto& m : mentions) {
    auto& acc = pairs[{m.aspect_lemma, opinion_label(m)}];
    acc.reviews.insert(m.review_id);
    acc.eval_sum += Rational(evaluate(m.adjective_lemma, m.negated).value());
    ++acc.n_mentions;
    aspect_reviews[m.aspect_lemma].insert(m.review_id);
    dimension.try_emplace(m.aspect_lemma, m.dimension);
  }
  for (const auto& [review, aspect] : aspect_occurrences) {
    if (auto it = aspect_reviews.find(aspect); it != aspect_reviews.end()) it->second.insert(review);
  }

  std::vector<AspectTuple> rows;
  rows.reserve(pairs.size());
  for (const auto& [key, acc] : pairs) {
    AspectTuple t;
    t.aspect = key.first;
    t.adjective = key.second;
    t.asp_rev = aspect_reviews[key.first].size();
    t.asp_adj_rev = acc.reviews.size();
    t.evaluation = (acc.eval_sum / acc.n_mentions).convert_to<double>();
    t.dimension = dimension[key.first];
    rows.push_back(std::move(t));
  }

  // Present rows in relevance order.
  std::map<std::string, std::size_t> aspect_pos;
  for (const auto& r : rank_aspects(rows)) aspect_pos.emplace(r.aspect, aspect_pos.size());
  std::sort(rows.begin(), rows.end(), [&](const AspectTuple& a, const AspectTuple& b) {
    if (a.aspect != b.aspect) return aspect_pos.at(a.aspect) < aspect_pos.at(b.aspect);
    if (a.asp_adj_rev != b.asp_adj_rev) return a.asp_adj_rev > b.asp_adj_rev;
    return a.adjective < b.adjective;
  });
  return rows;
}

double coarse_value(std::span<const AspectTuple> tuples, std::string_view coarse_id,
                    const DimensionTaxonomy& taxonomy) {
  WeightedMean mean;
  for (const auto& t : tuples) {
    if (!t.dimension) continue;
    auto coarse = taxonomy.coarse_of(*t.dimension);
    if (coarse && *coarse == coarse_id) mean.add(t.evaluation, t.asp_adj_rev);
  }
  return mean.empty() ? 0.0 : mean.value();
}

std::map<CoarseDimensionId, double> coarse_values(std::span<const AspectTuple> tuples,
                                                  const DimensionTaxonomy& taxonomy) {
  std::map<CoarseDimensionId, double> out;
  for (const auto& c : taxonomy.coarse_dims()) out[c.id] = coarse_value(tuples, c.id, taxonomy);
  return out;
}

double aspect_bar_value(std::span<const AspectTuple> tuples, std::string_view aspect) {
  require_aspect(tuples, aspect);
  WeightedMean mean;
  for (const auto& t : tuples) {
    if (tuple_matches(t, aspect)) mean.add(t.evaluation, t.asp_adj_rev);
  }
  if (mean.empty()) {
    // Only zero-weight rows: fall back to the plain mean of their evaluations.
    for (const auto& t : tuples)
      if (tuple_matches(t, aspect)) mean.add(t.evaluation, 1);
  }
  return mean.value();
}

ThumbCounts thumb_counts(std::span<const AspectTuple> tuples, std::string_view aspect) {
  require_aspect(tuples, aspect);
  ThumbCounts out;
  for (const auto& t : tuples) {
    if (!tuple_matches(t, aspect)) continue;
    if (t.evaluation > 3.0) out.up += t.asp_adj_rev;
    if (t.evaluation < 3.0) out.down += t.asp_adj_rev;
  }
  return out;
}

std::vector<FineDimRank> rank_fine_dims(std::span<const AspectTuple> tuples,
                                        std::string_view coarse_id,
                                        const DimensionTaxonomy& taxonomy) {
  std::vector<FineDimRank> out;
  for (const auto* f : taxonomy.fine_dims_of(coarse_id)) {
    std::set<std::string> aspects;
    for (const auto& t : tuples) {
      if (t.dimension && *t.dimension == f->id) aspects.insert(t.aspect);
    }
    out.push_back({f->id, aspects.size(), !aspects.empty()});
  }
  std::sort(out.begin(), out.end(), [](const FineDimRank& a, const FineDimRank& b) {
    if (a.n_aspects != b.n_aspects) return a.n_aspects > b.n_aspects;
    return a.id < b.id;
  });
  return out;
}

std::vector<AspectTuple> load_tuple_table(std::istream& in, const DimensionTaxonomy& taxonomy) {
  auto resolve = [&](std::string label) -> std::optional<FineDimensionId> {
    label = text::to_lower(text::trim(label));
    if (label.empty() || label == "unclassified") return std::nullopt;
    for (std::string candidate : {label, label.ends_with("-prop") ? label.substr(0, label.size() - 5) : label}) {
      if (taxonomy.find_fine(candidate)) return candidate;
      for (const auto& f : taxonomy.fine_dims()) {
        if (text::to_lower(f.label) == candidate) return f.id;
      }
    }
    return std::nullopt;
  };

  csv::Reader reader(in);
  std::vector<AspectTuple> out;
  bool first = true;
  while (auto row = reader.next()) {
    if (row->size() == 1 && text::trim((*row)[0]).empty()) continue;
    if (first) {
      first = false;
      if (!row->empty() && text::to_lower(text::trim((*row)[0])) == "aspect") continue;
    }
    if (row->size() != 6) {
      throw FormatError("tuple table line " + std::to_string(reader.line()) +
                        ": expected 6 columns, got " + std::to_string(row->size()));
    }
    AspectTuple t;
    t.aspect = text::to_lower(text::trim((*row)[0]));
    auto asp_rev = parse_count(std::string(text::trim((*row)[1])));
    t.adjective = text::to_lower(text::trim((*row)[2]));
    auto adj_rev = parse_count(std::string(text::trim((*row)[3])));
    if (!asp_rev || !adj_rev) {
      throw FormatError("tuple table line " + std::to_string(reader.line()) + ": bad count");
    }
    t.asp_rev = *asp_rev;
    t.asp_adj_rev = *adj_rev;
    try {
      t.evaluation = Evaluation(std::stod(std::string(text::trim((*row)[4])))).value();
    } catch (const std::exception&) {
      throw FormatError("tuple table line " + std::to_string(reader.line()) + ": bad evaluation");
    }
    t.dimension = resolve((*row)[5]);
    out.push_back(std::move(t));
  }
  return out;
}

void check_tuple_invariants(std::span<const AspectTuple> tuples, std::size_t n_reviews) {
  std::map<std::string, const AspectTuple*> first;
  for (const auto& t : tuples) {
    const std::string row = t.aspect + "/" + t.adjective;
    if (t.asp_adj_rev < 1 || t.asp_adj_rev > t.asp_rev || t.asp_rev > n_reviews) {
      throw IntegrityError(row + ": counts violate 1 <= asp_adj_rev <= asp_rev <= n_reviews");
    }
    if (t.evaluation < 1.0 || t.evaluation > 5.0) throw IntegrityError(row + ": evaluation outside [1,5]");
    auto [it, inserted] = first.emplace(t.aspect, &t);
    if (!inserted && (it->second->asp_rev != t.asp_rev || it->second->dimension != t.dimension)) {
      throw IntegrityError(row + ": tuples of one aspect disagree on asp_rev or dimension");
    }
  }
}

}  // namespace justify
