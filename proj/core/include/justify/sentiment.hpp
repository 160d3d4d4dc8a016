#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace justify {

/// Evaluation scale [1,5]; 3 is neutral.
class Evaluation {
 public:
  /// Throws InvalidArgument outside [1,5].
  explicit Evaluation(double value);
  double value() const { return value_; }
  auto operator<=>(const Evaluation&) const = default;

 private:
  double value_;
};

struct PolarityScore {
  double primary = 0;    // rule-augmented compound score
  double secondary = 0;  // averaged pattern-lexicon polarity
  double mean = 0;
};

/// Affine map 2p + 3 from [-1,1] onto [1,5]. Throws InvalidArgument outside
/// [-1,1].
Evaluation normalize_polarity(double polarity);
double denormalize(Evaluation evaluation);

/// `term<TAB>value` lines. A `# scale: N` comment declares the source-native
/// magnitude (4 for valence lexicons, 1 for [-1,1] lexicons); other `#`
/// lines are comments.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::map<std::string, double, std::less<>> entries, double scale);

  static Lexicon load(std::istream& in);
  static Lexicon load(const std::filesystem::path& path);

  /// Entry rescaled to [-1,1].
  std::optional<double> normalized(std::string_view term) const;
  double scale() const { return scale_; }
  bool contains(std::string_view term) const { return entries_.find(term) != entries_.end(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, double, std::less<>> entries_;
  double scale_ = 1.0;
};

/// `adjective<TAB>target_evaluation` lines.
std::map<std::string, double, std::less<>> load_overrides(std::istream& in);
std::map<std::string, double, std::less<>> load_overrides(const std::filesystem::path& path);

inline constexpr double kNegationScalar = -0.74;
inline constexpr double kCompoundAlpha = 15.0;

/// Scores adjectives with two lexicon scorers and averages them.
///
/// The primary scorer follows the valence-lexicon family: an adjective's
/// native valence v (on a +-4 scale) is squashed to v / sqrt(v^2 + 15).
/// The secondary scorer reads the averaged per-word polarity of a
/// pattern-style adjective lexicon. Unknown words score 0 in both. A
/// negated phrase maps the mean p to -0.74 p. Overrides pin an adjective's
/// plain evaluation and take precedence over both lexicons.
class SentimentScorer {
 public:
  SentimentScorer() = default;
  SentimentScorer(Lexicon valence, Lexicon polarity,
                  std::map<std::string, double, std::less<>> overrides = {});

  PolarityScore polarity(std::string_view adjective, bool negated = false) const;
  Evaluation evaluate(std::string_view adjective, bool negated = false) const;

  /// Context-free: the aspect does not influence the score.
  Evaluation evaluate_pair(std::string_view aspect, std::string_view adjective,
                           bool negated) const;

  /// True when either lexicon (or the override table) carries a non-zero
  /// opinion for the word.
  bool is_opinion_word(std::string_view word) const;

  const Lexicon& valence() const { return valence_; }
  const Lexicon& pattern() const { return pattern_; }
  const std::map<std::string, double, std::less<>>& overrides() const { return overrides_; }

 private:
  Lexicon valence_;
  Lexicon pattern_;
  std::map<std::string, double, std::less<>> overrides_;
};

struct CalibrationTarget {
  std::string aspect;
  std::string adjective;
  double evaluation = 0;
};

struct CalibrationRow {
  CalibrationTarget target;
  double computed = 0;
  double deviation = 0;  // computed - target
  bool overridden = false;
  bool within_tolerance = false;
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  double tolerance = 0.05;
  double max_abs_deviation = 0;
  bool all_within() const;
  std::string to_text() const;
};

CalibrationReport calibration_report(const SentimentScorer& scorer,
                                     const std::vector<CalibrationTarget>& targets,
                                     double tolerance = 0.05);

}  // namespace justify
