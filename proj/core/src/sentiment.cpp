#include "justify/sentiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "justify/errors.hpp"
#include "justify/text.hpp"

namespace justify {
namespace {

bool parse_scale_comment(std::string_view line, double& scale) {
  // "# scale: 4"
  auto body = text::trim(line.substr(1));
  if (!body.starts_with("scale:")) return false;
  auto value = text::trim(body.substr(6));
  try {
    scale = std::stod(std::string(value));
  } catch (const std::exception&) {
    throw SchemaError("invalid lexicon scale '" + std::string(value) + "'");
  }
  if (!(scale > 0)) throw SchemaError("lexicon scale must be positive");
  return true;
}

}  // namespace

Evaluation::Evaluation(double value) : value_(value) {
  if (!(value >= 1.0 && value <= 5.0)) {
    throw InvalidArgument("evaluation " + std::to_string(value) + " outside [1,5]");
  }
}

Evaluation normalize_polarity(double polarity) {
  if (!(polarity >= -1.0 && polarity <= 1.0)) {
    throw InvalidArgument("polarity " + std::to_string(polarity) + " outside [-1,1]");
  }
  return Evaluation(2.0 * polarity + 3.0);
}

double denormalize(Evaluation evaluation) { return (evaluation.value() - 3.0) / 2.0; }

Lexicon::Lexicon(std::map<std::string, double, std::less<>> entries, double scale)
    : entries_(std::move(entries)), scale_(scale) {
  if (!(scale_ > 0)) throw InvalidArgument("lexicon scale must be positive");
}

Lexicon Lexicon::load(std::istream& in) {
  std::map<std::string, double, std::less<>> entries;
  double scale = 1.0;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    if (line.front() == '#') {
      parse_scale_comment(line, scale);
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw SchemaError("lexicon line " + std::to_string(n) + ": expected term<TAB>value");
    }
    std::string term = text::to_lower(text::trim(std::string_view(line).substr(0, tab)));
    double value = 0;
    try {
      value = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw SchemaError("lexicon line " + std::to_string(n) + ": bad value");
    }
    entries[term] = value;
  }
  for (const auto& [term, value] : entries) {
    if (std::abs(value) > scale + 1e-12) {
      throw SchemaError("lexicon entry '" + term + "' exceeds declared scale");
    }
  }
  return Lexicon(std::move(entries), scale);
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read lexicon " + path.string());
  return load(in);
}

std::optional<double> Lexicon::normalized(std::string_view term) const {
  auto it = entries_.find(term);
  if (it == entries_.end()) return std::nullopt;
  return it->second / scale_;
}

std::map<std::string, double, std::less<>> load_overrides(std::istream& in) {
  std::map<std::string, double, std::less<>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw SchemaError("override line " + std::to_string(n) + ": expected adjective<TAB>evaluation");
    }
    double target = 0;
    try {
      target = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw SchemaError("override line " + std::to_string(n) + ": bad evaluation");
    }
    Evaluation checked(target);  // rejects values outside [1,5]
    out[text::to_lower(text::trim(std::string_view(line).substr(0, tab)))] = checked.value();
  }
  return out;
}

std::map<std::string, double, std::less<>> load_overrides(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read override table " + path.string());
  return load_overrides(in);
}

SentimentScorer::SentimentScorer(Lexicon valence, Lexicon polarity,
                                 std::map<std::string, double, std::less<>> overrides)
    : valence_(std::move(valence)), pattern_(std::move(polarity)), overrides_(std::move(overrides)) {}

PolarityScore SentimentScorer::polarity(std::string_view adjective, bool negated) const {
  PolarityScore s;
  if (auto it = overrides_.find(adjective); it != overrides_.end()) {
    const double p = (it->second - 3.0) / 2.0;
    s.primary = p;
    s.secondary = p;
  } else {
    if (auto v = valence_.normalized(adjective)) {
      const double native = *v * 4.0;
      s.primary = native / std::sqrt(native * native + kCompoundAlpha);
    }
    if (auto p = pattern_.normalized(adjective)) s.secondary = *p;
  }
  if (negated) {
    s.primary *= kNegationScalar;
    s.secondary *= kNegationScalar;
  }
  s.mean = (s.primary + s.secondary) / 2.0;
  return s;
}

Evaluation SentimentScorer::evaluate(std::string_view adjective, bool negated) const {
  return normalize_polarity(polarity(adjective, negated).mean);
}

Evaluation SentimentScorer::evaluate_pair(std::string_view /*aspect*/, std::string_view adjective,
                                          bool negated) const {
  return evaluate(adjective, negated);
}

bool SentimentScorer::is_opinion_word(std::string_view word) const {
  if (auto it = overrides_.find(word); it != overrides_.end()) return it->second != 3.0;
  auto v = valence_.normalized(word);
  auto p = pattern_.normalized(word);
  return (v && *v != 0.0) || (p && *p != 0.0);
}

bool CalibrationReport::all_within() const {
  for (const auto& r : rows)
    if (!r.within_tolerance) return false;
  return true;
}

std::string CalibrationReport::to_text() const {
  std::ostringstream out;
  out << "aspect\tadjective\ttarget\tcomputed\tdeviation\toverridden\tstatus\n";
  out << std::fixed;
  for (const auto& r : rows) {
    out << r.target.aspect << '\t' << r.target.adjective << '\t' << std::setprecision(2)
        << r.target.evaluation << '\t' << std::setprecision(4) << r.computed << '\t'
        << std::showpos << r.deviation << std::noshowpos << '\t' << (r.overridden ? "yes" : "no")
        << '\t' << (r.within_tolerance ? "ok" : "DEVIATES") << '\n';
  }
  out << "# max |deviation| = " << std::setprecision(4) << max_abs_deviation
      << ", tolerance = " << std::setprecision(2) << tolerance << '\n';
  return out.str();
}

CalibrationReport calibration_report(const SentimentScorer& scorer,
                                     const std::vector<CalibrationTarget>& targets,
                                     double tolerance) {
  CalibrationReport report;
  report.tolerance = tolerance;
  for (const auto& t : targets) {
    CalibrationRow row;
    row.target = t;
    row.computed = scorer.evaluate_pair(t.aspect, t.adjective, false).value();
    row.deviation = row.computed - t.evaluation;
    row.overridden = scorer.overrides().contains(t.adjective);
    row.within_tolerance = std::abs(row.deviation) <= tolerance;
    report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(row.deviation));
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace justify
