#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "justify/justification.hpp"

namespace justify {

enum class EventKind {
  bar_click,
  fine_dim_click,
  view_more_click,
  thumb_click,
  aspect_click,
  adjective_click,
  review_view,
  summary_view,
  item_open,
  item_close,
};

inline constexpr EventKind kAllEventKinds[] = {
    EventKind::bar_click,       EventKind::fine_dim_click, EventKind::view_more_click,
    EventKind::thumb_click,     EventKind::aspect_click,   EventKind::adjective_click,
    EventKind::review_view,     EventKind::summary_view,   EventKind::item_open,
    EventKind::item_close};

std::string_view to_string(EventKind kind);
/// Throws InvalidArgument outside the closed set.
EventKind parse_event_kind(std::string_view text);

using Timestamp = std::int64_t;  // milliseconds since the epoch

struct InteractionEvent {
  std::string session_id;
  std::string item_id;
  Model model = Model::thumbs;
  EventKind kind = EventKind::item_open;
  std::map<std::string, std::string> detail;
  Timestamp timestamp = 0;

  bool operator==(const InteractionEvent&) const = default;
};

struct RatingSubmission {
  std::string session_id;
  std::string item_id;
  std::optional<int> value;  // 1..5
  bool opt_out = false;
  std::optional<Model> model;
  Timestamp timestamp = 0;

  bool operator==(const RatingSubmission&) const = default;
};

/// Throws InvalidArgument unless exactly one of value/opt_out is given and
/// value lies in 1..5.
void validate(const RatingSubmission& rating);

struct ModelMetrics {
  double time_spent_seconds = 0;
  std::map<EventKind, std::size_t> counts;
  std::size_t n_ratings = 0;
  std::size_t n_opt_outs = 0;

  std::size_t count(EventKind kind) const;
  bool operator==(const ModelMetrics&) const = default;
};

struct SessionMetrics {
  std::string session_id;
  std::map<Model, ModelMetrics> per_model;  // every model present

  const ModelMetrics& at(Model model) const { return per_model.at(model); }
  bool operator==(const SessionMetrics&) const = default;
};

/// Pure reduction. Time spent pairs each item_open with the next
/// item_close of the same (item, model); unmatched opens add nothing.
/// Only the last rating per item counts.
SessionMetrics reduce_metrics(std::string_view session_id,
                              std::span<const InteractionEvent> events,
                              std::span<const RatingSubmission> ratings);

nlohmann::json to_json(const InteractionEvent& event);
InteractionEvent event_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RatingSubmission& rating);
RatingSubmission rating_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SessionMetrics& metrics);

/// One CSV row per (session, model).
std::string metrics_csv(std::span<const SessionMetrics> metrics);

/// Append-only store of sessions, ratings and events. With a data
/// directory, every accepted record is appended to events.jsonl /
/// ratings.jsonl / sessions.jsonl and replayed on construction. Appends
/// are serialised; readers take a shared lock.
class InteractionStore {
 public:
  InteractionStore();
  explicit InteractionStore(const std::filesystem::path& data_dir);

  std::string create_session();
  bool has_session(std::string_view session_id) const;
  std::vector<std::string> sessions() const;

  /// Throws InvalidArgument for malformed submissions, NotFoundError for
  /// unknown sessions. A later rating for the same (session, item)
  /// replaces the stored value; the rating log keeps both.
  void submit_rating(RatingSubmission rating);

  /// Throws NotFoundError for unknown sessions and InvalidArgument when the
  /// timestamp runs backwards. A zero timestamp is stamped with the
  /// current time (never earlier than the session's last event).
  void record_event(InteractionEvent event);

  std::optional<RatingSubmission> rating(std::string_view session_id,
                                         std::string_view item_id) const;
  std::vector<InteractionEvent> events(std::string_view session_id) const;
  std::vector<RatingSubmission> rating_log(std::string_view session_id) const;

  /// Throws NotFoundError for unknown sessions.
  SessionMetrics session_metrics(std::string_view session_id) const;

 private:
  void replay();
  void append(std::ofstream& out, const nlohmann::json& record);

  mutable std::shared_mutex mutex_;
  std::optional<std::filesystem::path> data_dir_;
  std::ofstream events_out_;
  std::ofstream ratings_out_;
  std::ofstream sessions_out_;
  std::uint64_t next_session_ = 1;
  std::map<std::string, std::vector<InteractionEvent>, std::less<>> events_;
  std::map<std::string, std::vector<RatingSubmission>, std::less<>> ratings_;
  std::map<std::pair<std::string, std::string>, RatingSubmission> current_;
};

}  // namespace justify
