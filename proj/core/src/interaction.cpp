#include "justify/interaction.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <sstream>

#include "justify/csv.hpp"
#include "justify/errors.hpp"

namespace justify {
namespace {

using nlohmann::json;

Timestamp now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::vector<json> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception&) {
      // A torn final line from an interrupted append is dropped.
      if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError(path.string() + ":" + std::to_string(n) + ": malformed record");
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::bar_click: return "bar_click";
    case EventKind::fine_dim_click: return "fine_dim_click";
    case EventKind::view_more_click: return "view_more_click";
    case EventKind::thumb_click: return "thumb_click";
    case EventKind::aspect_click: return "aspect_click";
    case EventKind::adjective_click: return "adjective_click";
    case EventKind::review_view: return "review_view";
    case EventKind::summary_view: return "summary_view";
    case EventKind::item_open: return "item_open";
    case EventKind::item_close: return "item_close";
  }
  return "item_open";
}

EventKind parse_event_kind(std::string_view text) {
  for (EventKind k : kAllEventKinds) {
    if (to_string(k) == text) return k;
  }
  throw InvalidArgument("unknown event kind '" + std::string(text) + "'");
}

void validate(const RatingSubmission& rating) {
  if (rating.session_id.empty() || rating.item_id.empty()) {
    throw InvalidArgument("rating needs session_id and item_id");
  }
  if (rating.value.has_value() == rating.opt_out) {
    throw InvalidArgument("rating needs exactly one of value and opt_out");
  }
  if (rating.value && (*rating.value < 1 || *rating.value > 5)) {
    throw InvalidArgument("rating value must be in 1..5");
  }
}

std::size_t ModelMetrics::count(EventKind kind) const {
  auto it = counts.find(kind);
  return it == counts.end() ? 0 : it->second;
}

SessionMetrics reduce_metrics(std::string_view session_id, std::span<const InteractionEvent> events,
                              std::span<const RatingSubmission> ratings) {
  SessionMetrics m;
  m.session_id = std::string(session_id);
  for (Model model : kAllModels) {
    auto& mm = m.per_model[model];
    for (EventKind k : kAllEventKinds) mm.counts[k] = 0;
  }

  std::map<std::pair<std::string, Model>, Timestamp> open;
  std::map<Model, Timestamp> spent_ms;
  for (const auto& e : events) {
    if (e.session_id != session_id) continue;
    ++m.per_model[e.model].counts[e.kind];
    const auto key = std::pair{e.item_id, e.model};
    if (e.kind == EventKind::item_open) {
      open[key] = e.timestamp;
    } else if (e.kind == EventKind::item_close) {
      if (auto it = open.find(key); it != open.end()) {
        spent_ms[e.model] += e.timestamp - it->second;
        open.erase(it);
      }
    }
  }
  for (const auto& [model, ms] : spent_ms) m.per_model[model].time_spent_seconds = static_cast<double>(ms) / 1000.0;

  std::map<std::string, const RatingSubmission*> last;
  for (const auto& r : ratings) {
    if (r.session_id == session_id) last[r.item_id] = &r;
  }
  for (const auto& [item, rp] : last) {
    const auto& r = *rp;
    if (!r.model) continue;
    auto& mm = m.per_model[*r.model];
    if (r.opt_out) {
      ++mm.n_opt_outs;
    } else {
      ++mm.n_ratings;
    }
  }
  return m;
}

json to_json(const InteractionEvent& event) {
  return {{"session_id", event.session_id},
          {"item_id", event.item_id},
          {"model", to_string(event.model)},
          {"kind", to_string(event.kind)},
          {"detail", event.detail},
          {"timestamp", event.timestamp}};
}

InteractionEvent event_from_json(const json& j) {
  try {
    InteractionEvent e;
    e.session_id = j.at("session_id").get<std::string>();
    e.item_id = j.at("item_id").get<std::string>();
    e.model = parse_model(j.at("model").get<std::string>());
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    if (j.contains("detail") && !j["detail"].is_null()) {
      for (const auto& [k, v] : j["detail"].items()) e.detail[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    if (j.contains("timestamp")) e.timestamp = j["timestamp"].get<Timestamp>();
    return e;
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed event: ") + ex.what());
  }
}

json to_json(const RatingSubmission& rating) {
  json j = {{"session_id", rating.session_id},
            {"item_id", rating.item_id},
            {"opt_out", rating.opt_out},
            {"timestamp", rating.timestamp}};
  if (rating.value) j["value"] = *rating.value;
  if (rating.model) j["model"] = to_string(*rating.model);
  return j;
}

RatingSubmission rating_from_json(const json& j) {
  try {
    RatingSubmission r;
    r.session_id = j.at("session_id").get<std::string>();
    r.item_id = j.at("item_id").get<std::string>();
    if (j.contains("value") && !j["value"].is_null()) r.value = j["value"].get<int>();
    if (j.contains("opt_out")) r.opt_out = j["opt_out"].get<bool>();
    if (j.contains("model") && !j["model"].is_null()) r.model = parse_model(j["model"].get<std::string>());
    if (j.contains("timestamp")) r.timestamp = j["timestamp"].get<Timestamp>();
    return r;
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed rating: ") + ex.what());
  }
}

json to_json(const SessionMetrics& metrics) {
  json models = json::object();
  for (const auto& [model, m] : metrics.per_model) {
    json counts = json::object();
    for (const auto& [kind, n] : m.counts) counts[std::string(to_string(kind))] = n;
    models[std::string(to_string(model))] = {{"time_spent_seconds", m.time_spent_seconds},
                                             {"counts", std::move(counts)},
                                             {"n_ratings", m.n_ratings},
                                             {"n_opt_outs", m.n_opt_outs}};
  }
  return {{"session_id", metrics.session_id}, {"models", std::move(models)}};
}

std::string metrics_csv(std::span<const SessionMetrics> metrics) {
  std::ostringstream out;
  out << "session_id,model,time_spent_seconds";
  for (EventKind k : kAllEventKinds) out << ',' << to_string(k);
  out << ",n_ratings,n_opt_outs\n";
  for (const auto& s : metrics) {
    for (const auto& [model, m] : s.per_model) {
      out << csv::escape(s.session_id) << ',' << to_string(model) << ',' << m.time_spent_seconds;
      for (EventKind k : kAllEventKinds) out << ',' << m.count(k);
      out << ',' << m.n_ratings << ',' << m.n_opt_outs << '\n';
    }
  }
  return out.str();
}

InteractionStore::InteractionStore() = default;

InteractionStore::InteractionStore(const std::filesystem::path& data_dir) : data_dir_(data_dir) {
  std::filesystem::create_directories(data_dir);
  replay();
  events_out_.open(data_dir / "events.jsonl", std::ios::app);
  ratings_out_.open(data_dir / "ratings.jsonl", std::ios::app);
  sessions_out_.open(data_dir / "sessions.jsonl", std::ios::app);
  if (!events_out_ || !ratings_out_ || !sessions_out_) {
    throw IoError("cannot open interaction logs in " + data_dir.string());
  }
}

void InteractionStore::replay() {
  for (const auto& j : read_jsonl(*data_dir_ / "sessions.jsonl")) {
    auto id = j.at("session_id").get<std::string>();
    events_.try_emplace(id);
    ratings_.try_emplace(id);
    try {
      next_session_ = std::max<std::uint64_t>(next_session_, std::stoull(id) + 1);
    } catch (const std::exception&) {
    }
  }
  for (const auto& j : read_jsonl(*data_dir_ / "events.jsonl")) {
    auto e = event_from_json(j);
    events_[e.session_id].push_back(std::move(e));
  }
  for (const auto& j : read_jsonl(*data_dir_ / "ratings.jsonl")) {
    auto r = rating_from_json(j);
    current_[{r.session_id, r.item_id}] = r;
    ratings_[r.session_id].push_back(std::move(r));
  }
}

void InteractionStore::append(std::ofstream& out, const json& record) {
  if (!data_dir_) return;
  out << record.dump() << '\n';
  out.flush();
  if (!out) throw IoError("cannot append to interaction log");
}

std::string InteractionStore::create_session() {
  std::unique_lock lock(mutex_);
  std::string id = std::to_string(next_session_++);
  events_.try_emplace(id);
  ratings_.try_emplace(id);
  append(sessions_out_, {{"session_id", id}, {"created", now_ms()}});
  return id;
}

bool InteractionStore::has_session(std::string_view session_id) const {
  std::shared_lock lock(mutex_);
  return events_.find(session_id) != events_.end();
}

std::vector<std::string> InteractionStore::sessions() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : events_) out.push_back(id);
  return out;
}

void InteractionStore::submit_rating(RatingSubmission rating) {
  validate(rating);
  std::unique_lock lock(mutex_);
  auto it = ratings_.find(rating.session_id);
  if (it == ratings_.end()) throw NotFoundError("unknown session '" + rating.session_id + "'");
  if (rating.timestamp == 0) rating.timestamp = now_ms();
  append(ratings_out_, to_json(rating));
  current_[{rating.session_id, rating.item_id}] = rating;
  it->second.push_back(std::move(rating));
}

void InteractionStore::record_event(InteractionEvent event) {
  std::unique_lock lock(mutex_);
  auto it = events_.find(event.session_id);
  if (it == events_.end()) throw NotFoundError("unknown session '" + event.session_id + "'");
  const Timestamp last = it->second.empty() ? 0 : it->second.back().timestamp;
  if (event.timestamp == 0) event.timestamp = std::max(now_ms(), last);
  if (event.timestamp < last) throw InvalidArgument("event timestamp runs backwards within the session");
  append(events_out_, to_json(event));
  it->second.push_back(std::move(event));
}

std::optional<RatingSubmission> InteractionStore::rating(std::string_view session_id,
                                                         std::string_view item_id) const {
  std::shared_lock lock(mutex_);
  auto it = current_.find({std::string(session_id), std::string(item_id)});
  if (it == current_.end()) return std::nullopt;
  return it->second;
}

std::vector<InteractionEvent> InteractionStore::events(std::string_view session_id) const {
  std::shared_lock lock(mutex_);
  auto it = events_.find(session_id);
  if (it == events_.end()) throw NotFoundError("unknown session '" + std::string(session_id) + "'");
  return it->second;
}

std::vector<RatingSubmission> InteractionStore::rating_log(std::string_view session_id) const {
  std::shared_lock lock(mutex_);
  auto it = ratings_.find(session_id);
  if (it == ratings_.end()) throw NotFoundError("unknown session '" + std::string(session_id) + "'");
  return it->second;
}

SessionMetrics InteractionStore::session_metrics(std::string_view session_id) const {
  std::shared_lock lock(mutex_);
  auto e = events_.find(session_id);
  if (e == events_.end()) throw NotFoundError("unknown session '" + std::string(session_id) + "'");
  auto r = ratings_.find(session_id);
  return reduce_metrics(session_id, e->second, r->second);
}

}  // namespace justify
