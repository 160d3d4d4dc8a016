#include "justify/extraction.hpp"

#include <algorithm>
#include <unordered_set>

#include "justify/errors.hpp"
#include "justify/text.hpp"

namespace justify {
namespace {

constexpr std::size_t kNegationWindow = 3;
constexpr std::size_t kSubjectGap = 2;    // tokens allowed between subject and copula
constexpr std::size_t kModifierGap = 2;   // ADV/NEG tokens allowed after the copula

// People who are not the item's provider; their presence blocks pronoun
// resolution.
const std::unordered_set<std::string_view>& companion_nouns() {
  static const std::unordered_set<std::string_view> words = {
      "husband", "wife", "partner", "boyfriend", "girlfriend", "friend", "family", "kid",
      "child", "son", "daughter", "mother", "father", "mum", "mom", "dad", "parent",
      "brother", "sister", "baby", "colleague", "neighbour", "neighbor", "guest", "person",
      "fiance", "fiancee", "group", "cousin",
  };
  return words;
}

bool is_conjunction(const Token& t) {
  return t.lemma == "and" || t.surface == "," || t.surface == "&";
}

bool other_person_present(std::span<const Token> sentence, const EntityRule& rule,
                          const DimensionTaxonomy& taxonomy) {
  for (const auto& t : sentence) {
    if (companion_nouns().contains(text::singularize(t.lemma))) return true;
    if (t.pos != Pos::noun) continue;
    for (const auto& other : taxonomy.entity_rules()) {
      if (&other != &rule && other.kind == EntityKind::person && other.has_cue(t.lemma)) {
        return true;
      }
    }
  }
  return false;
}

struct Candidate {
  std::size_t noun;
  std::size_t adj;
};

// R1 and R2 matches of one sentence, in adjective order.
std::vector<Candidate> candidates(const std::vector<Token>& tok) {
  std::vector<Candidate> out;
  const std::size_t n = tok.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (tok[i].pos == Pos::adj && tok[i + 1].pos == Pos::noun) out.push_back({i + 1, i});
  }
  for (std::size_t c = 1; c < n; ++c) {
    if (tok[c].pos != Pos::verb || tok[c].lemma != "be") continue;
    std::optional<std::size_t> subject;
    for (std::size_t k = c; k-- > 0 && c - k - 1 <= kSubjectGap;) {
      if (tok[k].pos == Pos::noun) {
        subject = k;
        break;
      }
      if (tok[k].pos == Pos::verb) break;
    }
    if (!subject) continue;
    std::size_t p = c + 1;
    while (p < n && p - (c + 1) < kModifierGap && (tok[p].pos == Pos::adv || tok[p].pos == Pos::neg)) {
      ++p;
    }
    if (p >= n || tok[p].pos != Pos::adj) continue;
    out.push_back({*subject, p});
    // Coordinated predicate adjectives: "clean, quiet and comfortable".
    std::size_t a = p;
    while (true) {
      std::size_t q = a + 1;
      if (q >= n || !is_conjunction(tok[q])) break;
      ++q;
      if (q < n && tok[q].lemma == "and" && tok[q - 1].surface == ",") ++q;
      std::size_t skipped = 0;
      while (q < n && skipped < kModifierGap && (tok[q].pos == Pos::adv || tok[q].pos == Pos::neg)) {
        ++q;
        ++skipped;
      }
      if (q >= n || tok[q].pos != Pos::adj) break;
      out.push_back({*subject, q});
      a = q;
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.adj, x.noun) < std::tie(y.adj, y.noun);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Candidate& x, const Candidate& y) {
                          return x.adj == y.adj && x.noun == y.noun;
                        }),
            out.end());
  return out;
}

// Index of the token coordinated with `i` to its right, skipping one
// determiner (nouns) or adverbs (adjectives).
std::optional<std::size_t> coordinated(const std::vector<Token>& tok, std::size_t i, Pos pos) {
  std::size_t q = i + 1;
  if (q >= tok.size() || !is_conjunction(tok[q])) return std::nullopt;
  ++q;
  if (q < tok.size() && tok[q].lemma == "and" && tok[q - 1].surface == ",") ++q;
  if (pos == Pos::noun) {
    if (q < tok.size() && (tok[q].lemma == "the" || tok[q].lemma == "a" || tok[q].lemma == "an")) ++q;
  } else {
    std::size_t skipped = 0;
    while (q < tok.size() && skipped < kModifierGap && tok[q].pos == Pos::adv) {
      ++q;
      ++skipped;
    }
  }
  if (q < tok.size() && tok[q].pos == pos) return q;
  return std::nullopt;
}

bool negated_at(const std::vector<Token>& tok, std::size_t adj) {
  const std::size_t from = adj >= kNegationWindow ? adj - kNegationWindow : 0;
  for (std::size_t k = from; k < adj; ++k) {
    if (tok[k].pos == Pos::neg) return true;
  }
  return false;
}

}  // namespace

PairExtractor::PairExtractor(const Tagger& tagger, const DimensionTaxonomy& taxonomy,
                             std::set<std::string, std::less<>> seed_opinions)
    : tagger_(tagger), taxonomy_(taxonomy), seed_(std::move(seed_opinions)) {}

void PairExtractor::resolve_pronouns(std::vector<Token>& tokens) const {
  for (const auto& rule : taxonomy_.entity_rules()) {
    if (rule.kind != EntityKind::person || rule.pronouns.empty()) continue;
    if (other_person_present(tokens, rule, taxonomy_)) continue;
    for (auto& t : tokens) {
      if (t.pos != Pos::noun && rule.pronouns.contains(t.lemma)) {
        t.pos = Pos::noun;
        t.lemma = rule.cues.front();
      }
    }
  }
}

std::vector<TaggedSentence> PairExtractor::tag_reviews(std::span<const Review> reviews) const {
  std::vector<TaggedSentence> out;
  for (const auto& r : reviews) {
    auto spans = text::segment_sentences(r.text);
    for (std::size_t i = 0; i < spans.size(); ++i) {
      TaggedSentence s{r.review_id, i, spans[i].text, tagger_.tag(spans[i].text)};
      resolve_pronouns(s.tokens);
      out.push_back(std::move(s));
    }
  }
  return out;
}

ExtractionResult PairExtractor::extract(std::span<const Review> reviews) const {
  ExtractionResult result;
  const auto sentences = tag_reviews(reviews);

  std::vector<std::vector<Candidate>> cands;
  cands.reserve(sentences.size());
  for (const auto& s : sentences) cands.push_back(candidates(s.tokens));

  std::set<std::string> opinions(seed_.begin(), seed_.end());
  std::set<std::string> aspects;

  // Propagate until neither set grows; both are bounded by the vocabulary.
  bool changed = true;
  while (changed) {
    changed = false;
    ++result.iterations;
    for (std::size_t si = 0; si < sentences.size(); ++si) {
      const auto& tok = sentences[si].tokens;
      for (const auto& c : cands[si]) {
        const auto& noun = tok[c.noun].lemma;
        const auto& adj = tok[c.adj].lemma;
        if (opinions.contains(adj) || aspects.contains(noun)) {
          changed |= aspects.insert(noun).second;
          changed |= opinions.insert(adj).second;
        }
      }
      for (std::size_t i = 0; i < tok.size(); ++i) {
        if (tok[i].pos == Pos::noun) {  // R3
          if (auto j = coordinated(tok, i, Pos::noun)) {
            const bool left = aspects.contains(tok[i].lemma);
            const bool right = aspects.contains(tok[*j].lemma);
            if (left && !right) changed |= aspects.insert(tok[*j].lemma).second;
            if (right && !left) changed |= aspects.insert(tok[i].lemma).second;
          }
        } else if (tok[i].pos == Pos::adj) {  // R4
          if (auto j = coordinated(tok, i, Pos::adj)) {
            const bool left = opinions.contains(tok[i].lemma);
            const bool right = opinions.contains(tok[*j].lemma);
            if (left && !right) changed |= opinions.insert(tok[*j].lemma).second;
            if (right && !left) changed |= opinions.insert(tok[i].lemma).second;
          }
        }
      }
    }
  }

  std::map<std::string, Date> dates;
  for (const auto& r : reviews) dates.emplace(r.review_id, r.date);

  std::set<std::tuple<std::string, std::size_t, std::string, std::string>> seen;
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const auto& s = sentences[si];
    const auto& tok = s.tokens;
    for (const auto& c : cands[si]) {
      const auto& noun = tok[c.noun];
      const auto& adj = tok[c.adj];
      if (!opinions.contains(adj.lemma) && !aspects.contains(noun.lemma)) continue;
      if (!seen.emplace(s.review_id, s.sentence_id, noun.lemma, adj.lemma).second) continue;
      PairMention m;
      m.review_id = s.review_id;
      m.sentence_id = s.sentence_id;
      m.aspect_lemma = noun.lemma;
      m.adjective_lemma = adj.lemma;
      m.sentence_text = s.text;
      m.negated = negated_at(tok, c.adj);
      m.aspect_surface = noun.surface;
      m.adjective_surface = adj.surface;
      m.dimension = classify_dimension(noun.lemma, tok, taxonomy_);
      m.review_date = dates.at(s.review_id);
      result.mentions.push_back(std::move(m));
    }
    for (const auto& t : tok) {
      if (t.pos == Pos::noun && aspects.contains(t.lemma)) {
        result.aspect_occurrences.emplace(s.review_id, t.lemma);
      }
    }
  }
  result.aspects = std::move(aspects);
  result.opinion_words = std::move(opinions);
  return result;
}

std::optional<FineDimensionId> classify_dimension(std::string_view aspect_lemma,
                                                  std::span<const Token> sentence,
                                                  const DimensionTaxonomy& taxonomy) {
  for (const auto& rule : taxonomy.entity_rules()) {
    if (rule.has_cue(aspect_lemma)) return rule.target_fine_id;
    if (rule.kind == EntityKind::person && rule.pronouns.contains(std::string(aspect_lemma)) &&
        !other_person_present(sentence, rule, taxonomy)) {
      return rule.target_fine_id;
    }
  }
  return taxonomy.lookup_dimension(aspect_lemma);
}

std::string_view to_string(Sign sign) { return sign == Sign::up ? "up" : "down"; }

Sign parse_sign(std::string_view text) {
  if (text == "up") return Sign::up;
  if (text == "down") return Sign::down;
  throw InvalidArgument("sign must be 'up' or 'down', got '" + std::string(text) + "'");
}

namespace {
const std::vector<Quote>& empty_quotes() {
  static const std::vector<Quote> none;
  return none;
}

bool quote_order(const Quote& a, const Quote& b) {
  return std::tie(a.date, a.review_id, a.sentence_id) < std::tie(b.date, b.review_id, b.sentence_id);
}

void insert_unique(std::vector<Quote>& list, Quote quote) {
  for (const auto& q : list) {
    if (q.review_id == quote.review_id && q.opinion == quote.opinion) return;
  }
  list.push_back(std::move(quote));
}
}  // namespace

const std::vector<Quote>& QuoteIndex::by_pair(std::string_view aspect, std::string_view adjective) const {
  auto it = pairs_.find(PairKey{std::string(aspect), std::string(adjective)});
  return it == pairs_.end() ? empty_quotes() : it->second;
}

const std::vector<Quote>& QuoteIndex::by_sign(std::string_view aspect, Sign sign) const {
  auto it = signs_.find(SignKey{std::string(aspect), sign});
  return it == signs_.end() ? empty_quotes() : it->second;
}

void QuoteIndex::insert_pair(const PairKey& key, Quote quote) {
  insert_unique(pairs_[key], std::move(quote));
}

void QuoteIndex::insert_sign(const SignKey& key, Quote quote) {
  insert_unique(signs_[key], std::move(quote));
}

void QuoteIndex::sort() {
  for (auto& [_, list] : pairs_) std::sort(list.begin(), list.end(), quote_order);
  for (auto& [_, list] : signs_) std::sort(list.begin(), list.end(), quote_order);
}

std::string opinion_label(const PairMention& mention) {
  return mention.negated ? "not " + mention.adjective_lemma : mention.adjective_lemma;
}

QuoteIndex build_quote_index(std::span<const PairMention> mentions, const EvaluationFn& evaluate) {
  QuoteIndex index;
  for (const auto& m : mentions) {
    Quote q{m.review_id, m.sentence_id, m.review_date, m.sentence_text, m.aspect_surface,
            m.adjective_surface, opinion_label(m)};
    index.insert_pair({m.aspect_lemma, q.opinion}, q);
    const double value = evaluate(m.adjective_lemma, m.negated).value();
    if (value > 3.0) {
      index.insert_sign({m.aspect_lemma, Sign::up}, std::move(q));
    } else if (value < 3.0) {
      index.insert_sign({m.aspect_lemma, Sign::down}, std::move(q));
    }
  }
  index.sort();
  return index;
}

}  // namespace justify
