#pragma once

// Manual review of auto-labeled documents.
//
// The append-only JSON-lines event log is the source of truth: the in-memory
// state is whatever replaying the log yields. Submissions are serialized by
// one writer; readers work on an immutable snapshot that is swapped
// atomically after each accepted event.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dzhate/autolabel.hpp"
#include "dzhate/corpus.hpp"
#include "dzhate/error.hpp"
#include "dzhate/io.hpp"

namespace dzhate::annotation {

enum class ReviewState : std::uint8_t { pending, confirmed, corrected, skipped };
enum class Action { confirm, correct, skip };

inline constexpr std::string_view to_string(ReviewState s) {
  switch (s) {
    case ReviewState::pending: return "pending";
    case ReviewState::confirmed: return "confirmed";
    case ReviewState::corrected: return "corrected";
    case ReviewState::skipped: return "skipped";
  }
  return "pending";
}

inline constexpr std::string_view to_string(Action a) {
  switch (a) {
    case Action::confirm: return "confirm";
    case Action::correct: return "correct";
    case Action::skip: return "skip";
  }
  return "skip";
}

inline std::optional<Action> parse_action(std::string_view s) {
  if (s == "confirm") return Action::confirm;
  if (s == "correct") return Action::correct;
  if (s == "skip") return Action::skip;
  return std::nullopt;
}

struct Event {
  std::uint64_t seq = 0;
  std::string id;
  Action action = Action::skip;
  std::optional<Label> label;
  std::string annotator;
  std::int64_t ts_ms = 0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["seq"] = seq;
    j["id"] = id;
    j["action"] = to_string(action);
    j["label"] = label ? nlohmann::ordered_json(to_int(*label)) : nlohmann::ordered_json();
    j["annotator"] = annotator;
    j["ts_ms"] = ts_ms;
    return j;
  }

  static Event from_json(const nlohmann::json& j) {
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.id = j.at("id").get<std::string>();
    const auto a = parse_action(j.at("action").get<std::string>());
    if (!a) throw Error("unknown action in event");
    e.action = *a;
    if (j.contains("label") && !j["label"].is_null()) {
      const int v = j["label"].get<int>();
      if (v != 0 && v != 1) throw Error("invalid label in event");
      e.label = label_from_int(v);
    }
    e.annotator = j.value("annotator", "");
    e.ts_ms = j.value("ts_ms", std::int64_t{0});
    return e;
  }
};

struct Progress {
  std::size_t pending = 0;
  std::size_t confirmed = 0;
  std::size_t corrected = 0;
  std::size_t skipped = 0;

  std::size_t total() const { return pending + confirmed + corrected + skipped; }
  bool operator==(const Progress&) const = default;

  nlohmann::ordered_json to_json() const {
    return {{"pending", pending}, {"confirmed", confirmed}, {"corrected", corrected}, {"skipped", skipped}};
  }
};

enum class RejectReason { unknown_id, already_reviewed, inconsistent, invalid };

class Rejected : public Error {
 public:
  Rejected(RejectReason reason, const std::string& what) : Error(what), reason_(reason) {}
  RejectReason reason() const { return reason_; }

 private:
  RejectReason reason_;
};

// Derived review state; a value type so it can be replayed and compared.
class ReviewLog {
 public:
  explicit ReviewLog(const Corpus& corpus) : corpus_(&corpus) {
    states_.assign(corpus.size(), ReviewState::pending);
    final_.assign(corpus.size(), std::nullopt);
    progress_.pending = corpus.size();
    index_.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) index_.emplace(corpus[i].id, i);
  }

  // Throws Rejected without changing anything when the event is not allowed.
  void apply(const Event& e) {
    const auto it = index_.find(e.id);
    if (it == index_.end()) throw Rejected(RejectReason::unknown_id, "unknown id \"" + e.id + "\"");
    const std::size_t i = it->second;
    if (states_[i] != ReviewState::pending) throw Rejected(RejectReason::already_reviewed, "already reviewed");
    const Label auto_label = *(*corpus_)[i].label;
    ReviewState next = ReviewState::skipped;
    switch (e.action) {
      case Action::confirm:
        if (!e.label) throw Rejected(RejectReason::invalid, "confirm requires a label");
        if (*e.label != auto_label) {
          throw Rejected(RejectReason::inconsistent, "confirm label differs from the auto label");
        }
        next = ReviewState::confirmed;
        break;
      case Action::correct:
        if (!e.label) throw Rejected(RejectReason::invalid, "correct requires a label");
        if (*e.label == auto_label) {
          throw Rejected(RejectReason::inconsistent, "correct label equals the auto label");
        }
        next = ReviewState::corrected;
        break;
      case Action::skip:
        next = ReviewState::skipped;
        break;
    }
    states_[i] = next;
    if (next != ReviewState::skipped) final_[i] = *e.label;
    --progress_.pending;
    switch (next) {
      case ReviewState::confirmed: ++progress_.confirmed; break;
      case ReviewState::corrected: ++progress_.corrected; break;
      default: ++progress_.skipped; break;
    }
    while (first_pending_ < states_.size() && states_[first_pending_] != ReviewState::pending) ++first_pending_;
  }

  const Progress& progress() const { return progress_; }
  const std::vector<ReviewState>& states() const { return states_; }
  const std::vector<std::optional<Label>>& final_labels() const { return final_; }

  std::optional<std::size_t> next_pending() const {
    if (first_pending_ < states_.size()) return first_pending_;
    return std::nullopt;
  }

  std::optional<ReviewState> state_of(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return states_[it->second];
  }

  bool operator==(const ReviewLog& o) const {
    return states_ == o.states_ && final_ == o.final_ && progress_ == o.progress_;
  }

  // Confirmed and corrected documents in corpus order, relabeled as manual.
  Corpus validated() const {
    std::vector<Document> docs;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i] != ReviewState::confirmed && states_[i] != ReviewState::corrected) continue;
      Document d = (*corpus_)[i];
      d.set_label(*final_[i], LabelSource::manual);
      docs.push_back(std::move(d));
    }
    return Corpus(std::move(docs), corpus_->provenance() + "#validated");
  }

 private:
  const Corpus* corpus_;
  std::vector<ReviewState> states_;
  std::vector<std::optional<Label>> final_;
  Progress progress_;
  std::size_t first_pending_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

// Pure replay: the state a sequence of events leads to. Rejected events are
// skipped, matching what the live session does with them.
inline ReviewLog replay(const Corpus& corpus, const std::vector<Event>& events) {
  ReviewLog log(corpus);
  for (const auto& e : events) {
    try {
      log.apply(e);
    } catch (const Rejected&) {
    }
  }
  return log;
}

struct NextItem {
  std::string id;
  std::string clean_text;
  std::string raw_text;
  Label auto_label = Label::non_hateful;
  std::vector<autolabel::Span> highlights;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["clean_text"] = clean_text;
    j["raw_text"] = raw_text;
    j["auto_label"] = to_int(auto_label);
    nlohmann::ordered_json spans = nlohmann::ordered_json::array();
    for (const auto& [s, e] : highlights) spans.push_back({s, e});
    j["highlights"] = spans;
    return j;
  }
};

struct SessionOptions {
  std::filesystem::path output_path;  // validated CSV; the event log sits next to it
  std::string annotator_id = "annotator";
};

inline std::filesystem::path event_log_path(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".events.jsonl");
}

class Session {
 public:
  Session(Corpus corpus, autolabel::Lexicon lexicon, SessionOptions options)
      : corpus_(std::make_shared<const Corpus>(std::move(corpus))),
        lexicon_(std::move(lexicon)),
        options_(std::move(options)) {
    if (corpus_->empty()) throw Error("corpus is empty");
    std::string not_auto;
    for (const auto& d : *corpus_) {
      if (d.label_source != LabelSource::automatic || !d.label) not_auto += (not_auto.empty() ? "" : ",") + d.id;
    }
    if (!not_auto.empty()) throw Error("corpus has documents without auto labels: " + not_auto);
    log_path_ = event_log_path(options_.output_path);
    auto state = std::make_shared<ReviewLog>(*corpus_);
    load_events(*state);
    std::atomic_store(&snapshot_, std::shared_ptr<const ReviewLog>(std::move(state)));
  }

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const Corpus& corpus() const { return *corpus_; }
  const autolabel::Lexicon& lexicon() const { return lexicon_; }
  const std::filesystem::path& log_path() const { return log_path_; }

  std::shared_ptr<const ReviewLog> snapshot() const { return std::atomic_load(&snapshot_); }
  Progress progress() const { return snapshot()->progress(); }

  std::optional<NextItem> next() const {
    const auto snap = snapshot();
    const auto i = snap->next_pending();
    if (!i) return std::nullopt;
    const auto& d = (*corpus_)[*i];
    NextItem item{d.id, d.clean_text.value_or(""), d.raw_text, *d.label, {}};
    if (d.clean_text) item.highlights = autolabel::highlight_matches(*d.clean_text, lexicon_);
    return item;
  }

  // Records a decision; first write wins. Throws Rejected on contract errors.
  Progress submit(const std::string& id, std::optional<Label> label, Action action) {
    std::lock_guard lock(write_mutex_);
    auto next = std::make_shared<ReviewLog>(*snapshot());
    Event e;
    e.seq = next_seq_;
    e.id = id;
    e.action = action;
    e.label = action == Action::skip ? std::nullopt : label;
    e.annotator = options_.annotator_id;
    e.ts_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::system_clock::now().time_since_epoch())
                  .count();
    next->apply(e);
    append_event(e);
    ++next_seq_;
    const Progress p = next->progress();
    std::atomic_store(&snapshot_, std::shared_ptr<const ReviewLog>(std::move(next)));
    return p;
  }

  Corpus validated() const { return snapshot()->validated(); }

  // CSV of every confirmed/corrected document; also written to the output
  // path. Throws when nothing has been reviewed yet.
  std::string export_csv() const {
    const auto snap = snapshot();
    const Corpus v = snap->validated();
    if (v.empty()) throw Rejected(RejectReason::invalid, "nothing reviewed");
    std::string text = serialize_corpus(v, CorpusFormat::csv);
    std::lock_guard lock(write_mutex_);
    io::write_file(options_.output_path, text);
    return text;
  }

 private:
  void load_events(ReviewLog& state) {
    if (!std::filesystem::exists(log_path_)) return;
    const std::string text = io::read_file(log_path_);
    std::size_t good_bytes = 0;
    std::size_t offset = 0;
    io::for_each_line(text, [&](std::string_view line, std::size_t n, bool terminated) {
      const std::size_t line_bytes = line.size() + (terminated ? 1 : 0);
      offset += line_bytes;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
        if (terminated) good_bytes = offset;
        return;
      }
      Event e;
      try {
        e = Event::from_json(nlohmann::json::parse(line));
      } catch (const std::exception&) {
        if (!terminated) return;  // torn final write
        throw Error("corrupt event log at line " + std::to_string(n));
      }
      try {
        state.apply(e);
      } catch (const Rejected& r) {
        throw Error("event log line " + std::to_string(n) + " does not replay: " + r.what());
      }
      next_seq_ = std::max(next_seq_, e.seq + 1);
      good_bytes = offset;
    });
    if (good_bytes < text.size()) std::filesystem::resize_file(log_path_, good_bytes);
  }

  void append_event(const Event& e) {
    if (!log_.is_open()) {
      if (log_path_.has_parent_path()) std::filesystem::create_directories(log_path_.parent_path());
      log_.open(log_path_, std::ios::binary | std::ios::app);
      if (!log_) throw Error("cannot open event log " + log_path_.string());
    }
    log_ << e.to_json().dump() << '\n';
    log_.flush();
    if (!log_) throw Error("event log write failed");
  }

  std::shared_ptr<const Corpus> corpus_;
  autolabel::Lexicon lexicon_;
  SessionOptions options_;
  std::filesystem::path log_path_;
  std::shared_ptr<const ReviewLog> snapshot_;
  mutable std::mutex write_mutex_;
  std::ofstream log_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace dzhate::annotation
