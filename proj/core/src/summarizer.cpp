#include "justify/summarizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "justify/errors.hpp"
#include "justify/text.hpp"

namespace justify {
namespace {

const std::set<std::string, std::less<>> kAspectSlots = {"ASPECT", "ADJ", "ADJ2", "COUNT", "GUESTS"};
const std::set<std::string, std::less<>> kGlobalSlots = {"ASPECT_LIST"};

std::vector<std::string> slots_of(std::string_view terminal) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = terminal.find('{', pos)) != std::string_view::npos) {
    auto close = terminal.find('}', pos);
    if (close == std::string_view::npos) throw SchemaError("unterminated slot in \"" + std::string(terminal) + "\"");
    out.emplace_back(terminal.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return out;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (quoted && line[i] == '\\') {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (!quoted && line[i] == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<Alternative> parse_alternatives(std::string_view body, std::size_t line_no) {
  auto fail = [&](const std::string& what) {
    throw SchemaError("grammar line " + std::to_string(line_no) + ": " + what);
  };
  std::vector<Alternative> alts(1);
  std::size_t i = 0;
  while (i < body.size()) {
    char c = body[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '|') {
      if (alts.back().empty()) fail("empty alternative");
      alts.emplace_back();
      ++i;
    } else if (c == '"') {
      std::string lit;
      ++i;
      while (i < body.size() && body[i] != '"') {
        if (body[i] == '\\' && i + 1 < body.size()) ++i;
        lit += body[i++];
      }
      if (i >= body.size()) fail("unterminated string literal");
      ++i;
      alts.back().push_back({GrammarSymbol::Kind::terminal, std::move(lit)});
    } else if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < body.size() && is_ident(body[i])) ++i;
      alts.back().push_back({GrammarSymbol::Kind::nonterminal, std::string(body.substr(start, i - start))});
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  if (alts.back().empty()) fail("empty alternative");
  return alts;
}

using Productions = std::map<std::string, std::vector<Alternative>, std::less<>>;

bool is_unit(const GrammarSymbol& s) {
  return s.kind == GrammarSymbol::Kind::nonterminal && s.value == SummaryGrammar::kAspectUnit;
}

// Nonterminals reachable from `from`, optionally without descending into
// the aspect unit.
std::set<std::string> reachable(const Productions& p, std::string_view from, bool stop_at_unit) {
  std::set<std::string> seen{std::string(from)};
  std::vector<std::string> stack{std::string(from)};
  while (!stack.empty()) {
    auto name = stack.back();
    stack.pop_back();
    for (const auto& alt : p.at(name)) {
      for (const auto& s : alt) {
        if (s.kind != GrammarSymbol::Kind::nonterminal) continue;
        if (stop_at_unit && is_unit(s)) continue;
        if (seen.insert(s.value).second) stack.push_back(s.value);
      }
    }
  }
  return seen;
}

bool alternative_slots_fillable(const Alternative& alt, std::size_t n_adjs) {
  for (const auto& s : alt) {
    if (s.kind != GrammarSymbol::Kind::terminal) continue;
    for (const auto& slot : slots_of(s.value)) {
      if (slot == "ADJ2" && n_adjs < 2) return false;
    }
  }
  return true;
}

// Nonterminals that can be fully expanded for an aspect with `n_adjs`
// adjectives (least fixpoint).
std::set<std::string> fillable_set(const Productions& p, std::size_t n_adjs) {
  std::set<std::string> ok;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, alts] : p) {
      if (ok.contains(name)) continue;
      for (const auto& alt : alts) {
        bool good = alternative_slots_fillable(alt, n_adjs) &&
                    std::all_of(alt.begin(), alt.end(), [&](const GrammarSymbol& s) {
                      return s.kind == GrammarSymbol::Kind::terminal || ok.contains(s.value);
                    });
        if (good) {
          ok.insert(name);
          changed = true;
          break;
        }
      }
    }
  }
  return ok;
}

void check_grammar(const Productions& p) {
  if (!p.contains(SummaryGrammar::kStart)) throw SchemaError("grammar has no SUMMARY production");
  if (!p.contains(SummaryGrammar::kAspectUnit)) throw SchemaError("grammar has no ASPECT_SENTENCE production");
  for (const auto& [name, alts] : p) {
    for (const auto& alt : alts) {
      for (const auto& s : alt) {
        if (s.kind == GrammarSymbol::Kind::nonterminal && !p.contains(s.value)) {
          throw SchemaError("undefined nonterminal '" + s.value + "' in " + name);
        }
        if (s.kind == GrammarSymbol::Kind::terminal) {
          for (const auto& slot : slots_of(s.value)) {
            if (!kAspectSlots.contains(slot) && !kGlobalSlots.contains(slot)) {
              throw SchemaError("unknown slot {" + slot + "} in " + name);
            }
          }
        }
      }
    }
  }

  // Left recursion through leftmost nonterminals.
  for (const auto& [name, _] : p) {
    std::set<std::string> seen;
    std::vector<std::string> stack{name};
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      for (const auto& alt : p.at(cur)) {
        if (alt.front().kind != GrammarSymbol::Kind::nonterminal) continue;
        if (alt.front().value == name) throw SchemaError("left-recursive nonterminal '" + name + "'");
        if (seen.insert(alt.front().value).second) stack.push_back(alt.front().value);
      }
    }
  }

  auto productive = fillable_set(p, std::numeric_limits<std::size_t>::max());
  for (const auto& name : reachable(p, SummaryGrammar::kStart, false)) {
    if (!productive.contains(name)) throw SchemaError("nonterminal '" + name + "' cannot terminate");
  }

  auto inside = reachable(p, SummaryGrammar::kAspectUnit, false);
  for (const auto& name : inside) {
    for (const auto& alt : p.at(name)) {
      if (std::any_of(alt.begin(), alt.end(), is_unit)) {
        throw SchemaError("ASPECT_SENTENCE may not contain another ASPECT_SENTENCE");
      }
    }
  }
  for (const auto& name : reachable(p, SummaryGrammar::kStart, true)) {
    if (name == SummaryGrammar::kAspectUnit) continue;
    for (const auto& alt : p.at(name)) {
      for (const auto& s : alt) {
        if (s.kind != GrammarSymbol::Kind::terminal) continue;
        for (const auto& slot : slots_of(s.value)) {
          if (kAspectSlots.contains(slot)) {
            throw SchemaError("slot {" + slot + "} used outside ASPECT_SENTENCE in " + name);
          }
        }
      }
    }
  }
  if (!fillable_set(p, 1).contains(std::string(SummaryGrammar::kAspectUnit))) {
    throw SchemaError("ASPECT_SENTENCE needs an alternative usable with a single adjective");
  }
}

// can[name][n]: the nonterminal derives a string consuming exactly n aspects.
class ConsumptionTable {
 public:
  ConsumptionTable(const Productions& p, std::size_t max_n) : max_n_(max_n) {
    for (const auto& [name, _] : p) table_[name].assign(max_n + 1, false);
    if (max_n >= 1) table_[std::string(SummaryGrammar::kAspectUnit)][1] = true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [name, alts] : p) {
        if (name == SummaryGrammar::kAspectUnit) continue;
        auto& row = table_[name];
        for (std::size_t n = 0; n <= max_n; ++n) {
          if (row[n]) continue;
          for (const auto& alt : alts) {
            if (sequence_can(alt, 0, n)) {
              row[n] = true;
              changed = true;
              break;
            }
          }
        }
      }
    }
  }

  bool can(const GrammarSymbol& s, std::size_t n) const {
    if (n > max_n_) return false;
    if (s.kind == GrammarSymbol::Kind::terminal) return n == 0;
    return table_.at(s.value)[n];
  }

  bool sequence_can(const Alternative& alt, std::size_t from, std::size_t n) const {
    if (from == alt.size()) return n == 0;
    for (std::size_t k = 0; k <= n; ++k) {
      if (can(alt[from], k) && sequence_can(alt, from + 1, n - k)) return true;
    }
    return false;
  }

 private:
  std::size_t max_n_;
  std::map<std::string, std::vector<bool>, std::less<>> table_;
};

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? " and " : ", ";
    out += items[i];
  }
  return out;
}

std::string fill(std::string_view terminal, const std::map<std::string, std::string>& slots) {
  std::string out;
  std::size_t pos = 0;
  while (pos < terminal.size()) {
    auto open = terminal.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(terminal.substr(pos));
      break;
    }
    out.append(terminal.substr(pos, open - pos));
    auto close = terminal.find('}', open);
    auto it = slots.find(std::string(terminal.substr(open + 1, close - open - 1)));
    if (it == slots.end()) throw NotFoundError("unfilled slot");
    out += it->second;
    pos = close + 1;
  }
  return out;
}

void append_piece(std::string& text, const std::string& piece) {
  if (piece.empty()) return;
  bool needs_space = !text.empty() && !std::isspace(static_cast<unsigned char>(text.back())) &&
                     !std::isspace(static_cast<unsigned char>(piece.front())) &&
                     std::string_view(".,;:!?").find(piece.front()) == std::string_view::npos;
  if (needs_space) text += ' ';
  text += piece;
}

std::string finish(std::string text) {
  bool sentence_start = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (sentence_start && std::isalpha(c)) {
      text[i] = static_cast<char>(std::toupper(c));
      sentence_start = false;
    } else if (sentence_start && !std::isspace(c)) {
      sentence_start = false;
    }
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      sentence_start = true;
    }
  }
  return std::string(text::trim(text));
}

std::set<std::string> slot_names(const Alternative& alt) {
  std::set<std::string> out;
  for (const auto& s : alt) {
    if (s.kind == GrammarSymbol::Kind::terminal) {
      for (auto& slot : slots_of(s.value)) out.insert(std::move(slot));
    }
  }
  return out;
}

struct SelectedAspect {
  std::string aspect;
  std::size_t asp_rev = 0;
  std::vector<std::string> adjectives;
};

class Generator {
 public:
  Generator(const Productions& p, std::vector<SelectedAspect> aspects, std::uint64_t seed)
      : p_(p), aspects_(std::move(aspects)), rng_(seed), table_(p, aspects_.size()),
        fill_one_(fillable_set(p, 1)), fill_many_(fillable_set(p, 2)) {
    std::vector<std::string> names;
    for (const auto& a : aspects_) names.push_back(a.aspect);
    global_["ASPECT_LIST"] = join_list(names);
  }


  SummaryText run(std::size_t n) {
    expand(std::string(SummaryGrammar::kStart), n, nullptr);
    SummaryText out;
    out.text = finish(text_);
    out.derivation = std::move(steps_);
    for (std::size_t i = 0; i < next_aspect_; ++i) out.aspects.push_back(aspects_[i].aspect);
    return out;
  }

 private:
  void expand(const std::string& name, std::size_t n, const SelectedAspect* bound) {
    if (name == SummaryGrammar::kAspectUnit) bound = &aspects_.at(next_aspect_++);
    const auto& alts = p_.at(name);
    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < alts.size(); ++i) {
      const auto& alt = alts[i];
      bool fits = name == SummaryGrammar::kAspectUnit || table_.sequence_can(alt, 0, n);
      if (fits && (!bound || usable(alt, bound))) feasible.push_back(i);
    }
    if (feasible.empty()) throw SchemaError("no feasible alternative for " + name);
    std::size_t choice = feasible[rng_() % feasible.size()];
    const auto& alt = alts[choice];

    auto slots = bindings(alt, bound);
    steps_.push_back({name, choice, slots});

    std::size_t remaining = name == SummaryGrammar::kAspectUnit ? 0 : n;
    for (std::size_t i = 0; i < alt.size(); ++i) {
      const auto& s = alt[i];
      if (s.kind == GrammarSymbol::Kind::terminal) {
        append_piece(text_, fill(s.value, slots));
        continue;
      }
      std::size_t take = 0;
      for (std::size_t k = remaining + 1; k-- > 0;) {
        if (table_.can(s, k) && table_.sequence_can(alt, i + 1, remaining - k)) {
          take = k;
          break;
        }
      }
      expand(s.value, take, is_unit(s) ? nullptr : bound);
      remaining -= take;
    }
  }

  bool usable(const Alternative& alt, const SelectedAspect* a) const {
    std::size_t n_adjs = a ? a->adjectives.size() : 2;
    if (!alternative_slots_fillable(alt, n_adjs)) return false;
    const auto& ok = n_adjs >= 2 ? fill_many_ : fill_one_;
    return std::all_of(alt.begin(), alt.end(), [&](const GrammarSymbol& s) {
      return s.kind == GrammarSymbol::Kind::terminal || ok.contains(s.value);
    });
  }

  std::map<std::string, std::string> bindings(const Alternative& alt, const SelectedAspect* a) const {
    std::map<std::string, std::string> out;
    for (const auto& slot : slot_names(alt)) {
      if (kGlobalSlots.contains(slot)) {
        out[slot] = global_.at(slot);
      } else if (slot == "ASPECT") {
        out[slot] = a->aspect;
      } else if (slot == "ADJ") {
        out[slot] = a->adjectives.at(0);
      } else if (slot == "ADJ2") {
        out[slot] = a->adjectives.at(1);
      } else if (slot == "COUNT") {
        out[slot] = std::to_string(a->asp_rev);
      } else if (slot == "GUESTS") {
        out[slot] = a->asp_rev == 1 ? "one guest" : std::to_string(a->asp_rev) + " guests";
      }
    }
    return out;
  }

  const Productions& p_;
  std::vector<SelectedAspect> aspects_;
  std::mt19937_64 rng_;
  ConsumptionTable table_;
  std::set<std::string> fill_one_;
  std::set<std::string> fill_many_;
  std::map<std::string, std::string> global_;
  std::size_t next_aspect_ = 0;
  std::string text_;
  std::vector<DerivationStep> steps_;
};

}  // namespace

SummaryGrammar SummaryGrammar::parse(std::string_view source) {
  SummaryGrammar g;
  std::istringstream in{std::string(source)};
  std::string raw;
  std::string current;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line(text::trim(strip_comment(raw)));
    if (line.empty()) continue;
    if (line.front() == '|') {
      if (current.empty()) throw SchemaError("grammar line " + std::to_string(line_no) + ": continuation without a production");
      auto more = parse_alternatives(std::string_view(line).substr(1), line_no);
      auto& alts = g.productions_[current];
      alts.insert(alts.end(), more.begin(), more.end());
      continue;
    }
    auto def = line.find("::=");
    if (def == std::string::npos) throw SchemaError("grammar line " + std::to_string(line_no) + ": expected '::='");
    std::string name(text::trim(std::string_view(line).substr(0, def)));
    if (name.empty() || !is_ident_start(name.front()) ||
        !std::all_of(name.begin(), name.end(), is_ident)) {
      throw SchemaError("grammar line " + std::to_string(line_no) + ": bad nonterminal name '" + name + "'");
    }
    if (g.productions_.contains(name)) throw SchemaError("nonterminal '" + name + "' defined twice");
    g.productions_[name] = parse_alternatives(std::string_view(line).substr(def + 3), line_no);
    current = name;
  }
  check_grammar(g.productions_);
  return g;
}

SummaryGrammar SummaryGrammar::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grammar " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::vector<Alternative>& SummaryGrammar::alternatives(std::string_view nonterminal) const {
  auto it = productions_.find(nonterminal);
  if (it == productions_.end()) throw NotFoundError("unknown nonterminal '" + std::string(nonterminal) + "'");
  return it->second;
}

bool SummaryGrammar::has(std::string_view nonterminal) const { return productions_.contains(nonterminal); }

SummaryText generate_summary(std::span<const AspectTuple> tuples, const SummaryGrammar& grammar,
                             const SummaryOptions& options) {
  if (options.k_aspects < 1) throw InvalidArgument("k_aspects must be at least 1");
  if (options.k_adjs < 1) throw InvalidArgument("k_adjs must be at least 1");
  if (tuples.empty()) return {std::string(kNoFeedbackSentence), {}, {}};

  std::vector<SelectedAspect> selected;
  for (const auto& r : rank_aspects(tuples)) {
    if (selected.size() == options.k_aspects) break;
    SelectedAspect a{r.aspect, r.asp_rev, {}};
    for (const auto& adj : rank_adjectives(tuples, r.aspect)) {
      if (a.adjectives.size() == options.k_adjs) break;
      a.adjectives.push_back(adj.adjective);
    }
    selected.push_back(std::move(a));
  }

  // Largest prefix of the ranking the grammar can realize.
  ConsumptionTable table(grammar.productions(), selected.size());
  GrammarSymbol start{GrammarSymbol::Kind::nonterminal, std::string(SummaryGrammar::kStart)};
  std::size_t n = selected.size();
  while (n > 0 && !table.can(start, n)) --n;
  if (n == 0) throw SchemaError("grammar cannot realize a summary with any aspects");
  selected.resize(n);

  Generator gen(grammar.productions(), std::move(selected), options.seed);
  return gen.run(n);
}

bool validate_summary(std::string_view text, std::span<const DerivationStep> derivation,
                      const SummaryGrammar& grammar) {
  if (derivation.empty()) return text == kNoFeedbackSentence;
  std::size_t next = 0;
  std::string rendered;
  bool ok = true;

  auto replay = [&](auto&& self, const std::string& expected) -> void {
    if (!ok) return;
    if (next >= derivation.size()) {
      ok = false;
      return;
    }
    const auto& step = derivation[next++];
    if (step.nonterminal != expected || !grammar.has(expected)) {
      ok = false;
      return;
    }
    const auto& alts = grammar.alternatives(expected);
    if (step.alternative >= alts.size()) {
      ok = false;
      return;
    }
    const auto& alt = alts[step.alternative];
    auto wanted = slot_names(alt);
    if (step.slots.size() != wanted.size() ||
        !std::all_of(wanted.begin(), wanted.end(), [&](const std::string& s) { return step.slots.contains(s); })) {
      ok = false;
      return;
    }
    for (const auto& s : alt) {
      if (!ok) return;
      if (s.kind == GrammarSymbol::Kind::terminal) {
        append_piece(rendered, fill(s.value, step.slots));
      } else {
        self(self, s.value);
      }
    }
  };
  replay(replay, std::string(SummaryGrammar::kStart));
  return ok && next == derivation.size() && finish(rendered) == text;
}

}  // namespace justify
