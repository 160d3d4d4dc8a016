// justify: offline analysis and the justification service.

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "justify/aggregation.hpp"
#include "justify/corpus.hpp"
#include "justify/errors.hpp"
#include "justify/http_server.hpp"
#include "justify/index_store.hpp"
#include "justify/interaction.hpp"
#include "justify/justification.hpp"
#include "justify/pipeline.hpp"
#include "justify/summarizer.hpp"

namespace fs = std::filesystem;
using namespace justify;

namespace {

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

struct CorpusArgs {
  std::string listings;
  std::string reviews;
  std::string cutoff;
  std::string active_since;
  std::string lang = "en";
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& a, bool filters_required) {
  cmd->add_option("--listings", a.listings, "listings CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--reviews", a.reviews, "reviews CSV")->required()->check(CLI::ExistingFile);
  auto* cutoff = cmd->add_option("--cutoff", a.cutoff, "keep reviews strictly before this day (YYYY-MM-DD)");
  auto* since = cmd->add_option("--active-since", a.active_since,
                                "drop listings without a review on or after this day");
  cmd->add_option("--lang", a.lang, "review language to keep")->capture_default_str();
  if (filters_required) {
    cutoff->required();
    since->required();
  }
}

ReviewCorpus load_filtered(const CorpusArgs& a) {
  auto corpus = load_corpus(fs::path(a.listings), fs::path(a.reviews));
  if (corpus.skipped_reviews() > 0) {
    std::cerr << "skipped " << corpus.skipped_reviews() << " reviews with unknown listings or bad rows\n";
  }
  if (a.cutoff.empty() != a.active_since.empty()) {
    throw InvalidArgument("--cutoff and --active-since go together");
  }
  if (a.cutoff.empty()) return corpus;
  return filter_corpus(corpus, {parse_date(a.cutoff), parse_date(a.active_since), a.lang});
}

void print_stats(const CorpusStats& s, std::ostream& out) {
  auto row = [&](const char* name, const Summary& v) {
    out << std::left << std::setw(24) << name << std::right << std::fixed << std::setprecision(2)
        << std::setw(10) << v.min << std::setw(10) << v.max << std::setw(10) << v.mean << std::setw(10) << v.sd
        << '\n';
  };
  out << "listings " << s.n_listings << ", reviews " << s.n_reviews;
  if (s.n_guests) out << ", guests " << *s.n_guests;
  out << "\n\n" << std::left << std::setw(24) << "" << std::right << std::setw(10) << "min" << std::setw(10)
      << "max" << std::setw(10) << "mean" << std::setw(10) << "sd" << '\n';
  row("words per review", s.words_per_review);
  row("reviews per listing", s.reviews_per_listing);
  row("amenities per listing", s.amenities_per_listing);
}

Resources load_resources(const std::string& data_dir, const std::string& taxonomy) {
  fs::path dir = data_dir.empty() ? default_data_dir() : fs::path(data_dir);
  return taxonomy.empty() ? Resources::load(dir) : Resources::load(dir, taxonomy);
}

SummaryGrammar load_grammar(const std::string& data_dir, const std::string& grammar) {
  if (!grammar.empty()) return SummaryGrammar::load(grammar);
  fs::path dir = data_dir.empty() ? default_data_dir() : fs::path(data_dir);
  return SummaryGrammar::load(dir / "grammar" / "summary.bnf");
}

DimensionTaxonomy load_default_taxonomy(const std::string& data_dir, const std::string& taxonomy) {
  if (!taxonomy.empty()) return load_taxonomy_file(taxonomy);
  fs::path dir = data_dir.empty() ? default_data_dir() : fs::path(data_dir);
  return load_taxonomy_file(dir / "taxonomy" / "airbnb.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Service-based justifications for home recommendations"};
  app.require_subcommand(1);
  std::string data_dir;
  std::string taxonomy_file;
  app.add_option("--data-dir", data_dir, "directory with taxonomy/, lexicons/ and grammar/");
  app.add_option("--taxonomy", taxonomy_file, "blueprint taxonomy config (JSON)");

  // ingest
  CorpusArgs ingest_args;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "filter a raw corpus and write it as CSVs");
  add_corpus_options(ingest, ingest_args, true);
  ingest->add_option("--out", ingest_out, "output directory for listings.csv and reviews.csv")->required();

  // stats
  CorpusArgs stats_args;
  auto* stats = app.add_subcommand("stats", "descriptive statistics of a corpus");
  add_corpus_options(stats, stats_args, false);

  // analyze
  CorpusArgs analyze_args;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "extract, aggregate and save an analysis index");
  add_corpus_options(analyze, analyze_args, false);
  analyze->add_option("--out", analyze_out, "index file to write")->required();

  // summarize
  std::string sum_index, sum_item, sum_grammar;
  std::optional<std::uint64_t> sum_seed;
  SummaryOptions sum_options;
  bool sum_derivation = false;
  auto* summarize_cmd = app.add_subcommand("summarize", "generate the m-summary paragraph of one item");
  summarize_cmd->add_option("--index", sum_index, "analysis index")->required()->check(CLI::ExistingFile);
  summarize_cmd->add_option("--item", sum_item, "item id")->required();
  summarize_cmd->add_option("--seed", sum_seed, "generator seed (default: stable per-item seed)");
  summarize_cmd->add_option("--k", sum_options.k_aspects, "aspects to mention")->capture_default_str();
  summarize_cmd->add_option("--k-adjs", sum_options.k_adjs, "adjectives per aspect")->capture_default_str();
  summarize_cmd->add_option("--grammar", sum_grammar, "BNF grammar file");
  summarize_cmd->add_flag("--derivation", sum_derivation, "also print the derivation");

  // aggregate
  std::string agg_tuples;
  auto* aggregate = app.add_subcommand("aggregate", "aggregate a tuple table");
  aggregate->add_option("--from-tuples", agg_tuples, "six-column tuple CSV")->required()->check(CLI::ExistingFile);

  // serve
  std::string serve_index, serve_ui, serve_data, serve_host = "0.0.0.0";
  int serve_port = 8080;
  auto* serve = app.add_subcommand("serve", "serve justifications over HTTP");
  serve->add_option("--index", serve_index, "analysis index")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", serve_port, "port (0 picks a free one)")->capture_default_str();
  serve->add_option("--host", serve_host, "bind address")->capture_default_str();
  serve->add_option("--ui", serve_ui, "static UI bundle to mount at /")->check(CLI::ExistingDirectory);
  serve->add_option("--data", serve_data, "directory for session, rating and event logs");
  serve->add_option("--grammar", sum_grammar, "BNF grammar file");

  // export-metrics
  std::string export_data, export_csv;
  auto* export_cmd = app.add_subcommand("export-metrics", "per-session, per-model interaction metrics");
  export_cmd->add_option("--data", export_data, "interaction log directory")->required()->check(CLI::ExistingDirectory);
  export_cmd->add_option("--csv", export_csv, "output CSV ('-' for stdout)")->required();

  // calibrate
  std::string cal_targets;
  double cal_tolerance = 0.05;
  auto* calibrate = app.add_subcommand("calibrate", "compare scorer evaluations with reference evaluations");
  calibrate->add_option("--targets", cal_targets, "six-column tuple CSV with reference evaluations")
      ->required()
      ->check(CLI::ExistingFile);
  calibrate->add_option("--tolerance", cal_tolerance, "allowed absolute deviation")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      auto corpus = load_filtered(ingest_args);
      fs::create_directories(ingest_out);
      write_corpus(corpus, fs::path(ingest_out) / "listings.csv", fs::path(ingest_out) / "reviews.csv");
      print_stats(corpus_stats(corpus), std::cout);
    } else if (*stats) {
      print_stats(corpus_stats(load_filtered(stats_args)), std::cout);
    } else if (*analyze) {
      auto corpus = load_filtered(analyze_args);
      auto resources = load_resources(data_dir, taxonomy_file);
      AnalysisIndex index{resources.taxonomy, analyze_corpus(corpus, resources)};
      save_index(index, analyze_out);
      std::size_t n_tuples = 0;
      for (const auto& item : index.items) n_tuples += item.tuples.size();
      std::cout << "analyzed " << index.items.size() << " items, " << n_tuples << " tuples -> " << analyze_out
                << '\n';
    } else if (*summarize_cmd) {
      auto index = load_index(sum_index);
      auto grammar = load_grammar(data_dir, sum_grammar);
      auto it = std::find_if(index.items.begin(), index.items.end(),
                             [&](const ItemAnalysis& i) { return i.item_id == sum_item; });
      if (it == index.items.end()) throw NotFoundError("unknown item '" + sum_item + "'");
      sum_options.seed = sum_seed.value_or(stable_seed(sum_item));
      auto summary = generate_summary(it->tuples, grammar, sum_options);
      std::cout << summary.text << '\n';
      if (sum_derivation) {
        for (const auto& step : summary.derivation) {
          std::cout << "  " << step.nonterminal << " #" << step.alternative;
          for (const auto& [slot, value] : step.slots) std::cout << ' ' << slot << '=' << std::quoted(value);
          std::cout << '\n';
        }
      }
    } else if (*aggregate) {
      auto taxonomy = load_default_taxonomy(data_dir, taxonomy_file);
      std::ifstream in(agg_tuples);
      auto tuples = load_tuple_table(in, taxonomy);
      std::cout << std::fixed << std::setprecision(4);
      for (const auto& c : taxonomy.coarse_dims()) {
        double v = coarse_value(tuples, c.id, taxonomy);
        std::cout << std::left << std::setw(26) << c.label << std::right << std::setw(8) << v
                  << (v == 0.0 ? "  (no feedback)" : "") << (c.presented ? "" : "  [not presented]") << '\n';
      }
      std::cout << '\n';
      for (const auto& r : rank_aspects(tuples)) {
        auto thumbs = thumb_counts(tuples, r.aspect);
        std::cout << std::left << std::setw(14) << r.aspect << std::right << std::setw(4) << r.asp_rev
                  << std::setw(10) << aspect_bar_value(tuples, r.aspect) << "  up " << thumbs.up << "  down "
                  << thumbs.down << '\n';
      }
    } else if (*serve) {
      auto index = std::make_shared<const AnalysisIndex>(load_index(serve_index));
      JustificationService service(index, load_grammar(data_dir, sum_grammar));
      auto store = serve_data.empty() ? std::make_unique<InteractionStore>()
                                      : std::make_unique<InteractionStore>(fs::path(serve_data));
      ServerOptions options{serve_host, serve_port, std::nullopt};
      if (!serve_ui.empty()) options.ui_dir = serve_ui;
      HttpServer server(service, *store, options);
      int port = server.bind();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving " << index->items.size() << " items on http://" << serve_host << ':' << port
                << std::endl;
      server.run();
      g_server = nullptr;
    } else if (*export_cmd) {
      InteractionStore store{fs::path(export_data)};
      std::vector<SessionMetrics> metrics;
      for (const auto& id : store.sessions()) metrics.push_back(store.session_metrics(id));
      auto csv_text = metrics_csv(metrics);
      if (export_csv == "-") {
        std::cout << csv_text;
      } else {
        std::ofstream out(export_csv);
        if (!(out << csv_text)) throw IoError("cannot write " + export_csv);
      }
    } else if (*calibrate) {
      auto resources = load_resources(data_dir, taxonomy_file);
      std::ifstream in(cal_targets);
      std::vector<CalibrationTarget> targets;
      for (const auto& t : load_tuple_table(in, resources.taxonomy)) {
        targets.push_back({t.aspect, t.adjective, t.evaluation});
      }
      auto report = calibration_report(resources.scorer, targets, cal_tolerance);
      std::cout << report.to_text();
      return report.all_within() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "justify: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
