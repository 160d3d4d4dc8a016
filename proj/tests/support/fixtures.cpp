#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "justify/csv.hpp"
#include "justify/errors.hpp"

namespace justify::fx {

std::filesystem::path data_dir() { return JUSTIFY_TEST_DATA_DIR; }

std::filesystem::path fixture(const std::string& relative) {
  return data_dir() / "fixtures" / relative;
}

const Resources& resources() {
  static const Resources loaded = Resources::load(data_dir());
  return loaded;
}

const std::vector<SampleRow>& sample_rows() {
  static const std::vector<SampleRow> rows = [] {
    std::ifstream in(fixture("sample_tuples.csv"));
    if (!in) throw IoError("cannot open sample_tuples.csv");
    csv::Reader reader(in);
    std::vector<SampleRow> out;
    reader.next();
    while (auto rec = reader.next()) {
      const auto& r = *rec;
      out.push_back({r.at(0), std::stoul(r.at(1)), r.at(2), std::stoul(r.at(3)), std::stod(r.at(4)),
                     r.at(5)});
    }
    return out;
  }();
  return rows;
}

std::vector<AspectTuple> sample_tuples() {
  std::ifstream in(fixture("sample_tuples.csv"));
  return load_tuple_table(in, resources().taxonomy);
}

ReviewCorpus sample_corpus() {
  ReviewCorpus corpus;
  corpus.add_listing({"SAMPLE", {}, std::nullopt});
  std::size_t next = 1;
  auto add = [&](const std::string& text) {
    const auto day = static_cast<unsigned>(1 + (next - 1) % 28);
    const auto month = static_cast<unsigned>(1 + (next - 1) / 28);
    Review r{"r" + std::to_string(1000 + next), "SAMPLE",
             Date{std::chrono::year{2019}, std::chrono::month{month}, std::chrono::day{day}}, text,
             std::nullopt, std::nullopt};
    corpus.add_review(std::move(r));
    ++next;
  };
  std::map<std::string, std::size_t> paired;
  std::map<std::string, std::size_t> asp_rev;
  std::vector<std::string> order;
  for (const auto& row : sample_rows()) {
    if (!asp_rev.count(row.aspect)) order.push_back(row.aspect);
    asp_rev[row.aspect] = row.asp_rev;
    for (std::size_t i = 0; i < row.asp_adj_rev; ++i) {
      add("The " + row.aspect + " was " + row.adjective + ".");
    }
    paired[row.aspect] += row.asp_adj_rev;
  }
  for (const auto& aspect : order) {
    for (std::size_t i = paired[aspect]; i < asp_rev[aspect]; ++i) {
      add("We talked about the " + aspect + ".");
    }
  }
  return corpus;
}

ReviewCorpus f1_corpus() {
  return load_corpus(fixture("f1/listings.csv"), fixture("f1/reviews.csv"));
}

namespace {

bool golden_less(const GoldenMention& a, const GoldenMention& b) {
  auto key = [](const GoldenMention& m) {
    return std::tie(m.review_id, m.sentence_id, m.aspect, m.adjective, m.negated, m.dimension);
  };
  return key(a) < key(b);
}

}  // namespace

std::vector<GoldenMention> f1_golden_mentions() {
  std::ifstream in(fixture("f1/mentions.golden.tsv"));
  if (!in) throw IoError("cannot open mentions.golden.tsv");
  std::vector<GoldenMention> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    GoldenMention m;
    int negated = 0;
    fields >> m.review_id >> m.sentence_id >> m.aspect >> m.adjective >> negated >> m.dimension;
    m.negated = negated != 0;
    out.push_back(m);
  }
  std::sort(out.begin(), out.end(), golden_less);
  return out;
}

std::vector<GoldenMention> f1_extracted_mentions() {
  const auto corpus = f1_corpus();
  const auto& res = resources();
  PairExtractor extractor(res.tagger, res.taxonomy, res.seed_opinions);
  std::vector<GoldenMention> out;
  for (const auto& [id, listing] : corpus.listings()) {
    std::vector<Review> reviews;
    for (const auto* r : corpus.reviews_of(id)) reviews.push_back(*r);
    for (const auto& m : extractor.extract(reviews).mentions) {
      out.push_back({m.review_id, m.sentence_id, m.aspect_lemma, m.adjective_lemma, m.negated,
                     m.dimension.value_or("unclassified")});
    }
  }
  std::sort(out.begin(), out.end(), golden_less);
  return out;
}

RandomTable random_table(std::mt19937_64& rng, const DimensionTaxonomy& taxonomy,
                         std::size_t max_aspects) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  RandomTable table;
  table.n_reviews = pick(1, 40);
  const std::size_t n_aspects = pick(0, max_aspects);
  const auto& fine = taxonomy.fine_dims();
  static const std::vector<std::string> adjectives = {"great", "clean", "dirty", "noisy", "nice",
                                                      "small", "cozy",  "rude",  "airy"};
  for (std::size_t a = 0; a < n_aspects; ++a) {
    const std::size_t asp_rev = pick(1, table.n_reviews);
    std::optional<FineDimensionId> dim;
    const std::size_t d = pick(0, fine.size());
    if (d < fine.size()) dim = fine[d].id;
    const std::size_t n_adj = pick(1, 4);
    std::vector<std::string> pool = adjectives;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t j = 0; j < n_adj; ++j) {
      AspectTuple t;
      t.aspect = "aspect" + std::to_string(a);
      t.asp_rev = asp_rev;
      t.adjective = pool[j];
      t.asp_adj_rev = pick(1, asp_rev);
      // Whole hundredths keep some rows exactly neutral.
      t.evaluation = static_cast<double>(pick(100, 500)) / 100.0;
      t.dimension = dim;
      table.tuples.push_back(t);
    }
  }
  return table;
}

std::optional<double> unit_expansion_mean(const std::vector<double>& values,
                                          const std::vector<std::size_t>& weights) {
  std::vector<long double> units;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t k = 0; k < weights[i]; ++k) units.push_back(values[i]);
  }
  if (units.empty()) return std::nullopt;
  long double sum = 0;
  for (auto u : units) sum += u;
  return static_cast<double>(sum / static_cast<long double>(units.size()));
}

std::filesystem::path temp_dir(const std::string& name) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("justify_test_" + name + "_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace justify::fx
