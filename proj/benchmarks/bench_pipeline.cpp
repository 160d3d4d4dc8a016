#include <benchmark/benchmark.h>

#include <fstream>
#include <random>

#include "justify/index_store.hpp"
#include "justify/pipeline.hpp"

using namespace justify;

namespace {

const std::filesystem::path kData = JUSTIFY_BENCH_DATA_DIR;

const Resources& resources() {
  static const Resources r = Resources::load(kData);
  return r;
}

const ReviewCorpus& f1() {
  static const ReviewCorpus c =
      load_corpus(kData / "fixtures/f1/listings.csv", kData / "fixtures/f1/reviews.csv");
  return c;
}

std::vector<AspectTuple> sample_table() {
  std::ifstream in(kData / "fixtures/sample_tuples.csv");
  return load_tuple_table(in, resources().taxonomy);
}

// n aspects with four adjectives each, dimensions cycling through the taxonomy.
std::vector<AspectTuple> synthetic(std::size_t n) {
  std::mt19937_64 rng(n);
  const auto& fine = resources().taxonomy.fine_dims();
  std::vector<AspectTuple> out;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t asp_rev = 5 + rng() % 200;
    for (const char* adj : {"great", "clean", "noisy", "small"}) {
      out.push_back({"aspect" + std::to_string(a), asp_rev, adj, 1 + rng() % asp_rev,
                     1.0 + static_cast<double>(rng() % 400) / 100.0, fine[a % fine.size()].id});
    }
  }
  return out;
}

void BM_TagSentence(benchmark::State& state) {
  const auto& tagger = resources().tagger;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tagger.tag("The apartment was clean, quiet and very comfortable for four people."));
  }
}
BENCHMARK(BM_TagSentence);

void BM_AnalyzeF1(benchmark::State& state) {
  const auto& r = resources();
  for (auto _ : state) benchmark::DoNotOptimize(analyze_corpus(f1(), r));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f1().n_reviews()));
}
BENCHMARK(BM_AnalyzeF1)->Unit(benchmark::kMicrosecond);

void BM_CoarseValues(benchmark::State& state) {
  const auto tuples = synthetic(static_cast<std::size_t>(state.range(0)));
  const auto& tax = resources().taxonomy;
  for (auto _ : state) benchmark::DoNotOptimize(coarse_values(tuples, tax));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CoarseValues)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_RankAspects(benchmark::State& state) {
  const auto tuples = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rank_aspects(tuples));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RankAspects)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_GenerateSummary(benchmark::State& state) {
  const auto tuples = sample_table();
  const auto& g = resources().grammar;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_summary(tuples, g, {.seed = seed++}));
}
BENCHMARK(BM_GenerateSummary);

void BM_ValidateSummary(benchmark::State& state) {
  const auto s = generate_summary(sample_table(), resources().grammar, {.seed = 3});
  for (auto _ : state) benchmark::DoNotOptimize(validate_summary(s.text, s.derivation, resources().grammar));
}
BENCHMARK(BM_ValidateSummary);

void BM_IndexRoundTrip(benchmark::State& state) {
  const AnalysisIndex index{resources().taxonomy, analyze_corpus(f1(), resources())};
  for (auto _ : state) benchmark::DoNotOptimize(parse_index(serialize_index(index)));
}
BENCHMARK(BM_IndexRoundTrip)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
