#pragma once

#include <expat.h>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vw/error.hpp"
#include "vw/ingest.hpp"
#include "vw/timestamp.hpp"

namespace vw {

namespace xes_detail {

struct PendingEvent {
  std::optional<std::string> name;
  std::optional<Timestamp> time;
  std::string lifecycle;
  std::size_t line = 0;
};

class Builder {
 public:
  explicit Builder(EventLog& log) : log_(log) {}

  void attach(XML_Parser parser) { parser_ = parser; }

  void start_element(const XML_Char* name, const XML_Char** attrs) {
    std::string_view el(name);
    const std::size_t line = parser_ ? XML_GetCurrentLineNumber(parser_) : 0;
    ++depth_;
    if (depth_ == 1) {
      saw_log_ = el == "log";
      return;
    }
    if (!saw_log_) return;
    if (depth_ == 2 && el == "trace") {
      in_trace_ = true;
      trace_name_.reset();
      trace_events_.clear();
      return;
    }
    if (in_trace_ && depth_ == 3 && el == "event") {
      in_event_ = true;
      event_ = PendingEvent{};
      event_.line = line;
      return;
    }
    // Attribute elements are only meaningful as direct children of trace/event.
    const bool trace_attr = in_trace_ && !in_event_ && depth_ == 3;
    const bool event_attr = in_event_ && depth_ == 4;
    if (!trace_attr && !event_attr) return;

    std::string_view key, value;
    for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
      std::string_view a(attrs[i]);
      if (a == "key") key = attrs[i + 1];
      if (a == "value") value = attrs[i + 1];
    }
    if (trace_attr) {
      if (key == "concept:name") trace_name_ = std::string(value);
      return;
    }
    if (key == "concept:name") {
      event_.name = std::string(value);
    } else if (key == "time:timestamp") {
      event_.time = parse_timestamp(value);
      if (!event_.time)
        log_.meta.warn(line, "unparseable time:timestamp '" + std::string(value) + "'");
    } else if (key == "lifecycle:transition") {
      event_.lifecycle.assign(value);
      std::transform(event_.lifecycle.begin(), event_.lifecycle.end(), event_.lifecycle.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    }
  }

  void end_element(const XML_Char* name) {
    std::string_view el(name);
    if (in_event_ && depth_ == 3 && el == "event") {
      in_event_ = false;
      finish_event();
    } else if (in_trace_ && depth_ == 2 && el == "trace") {
      in_trace_ = false;
      finish_trace();
    }
    --depth_;
  }

  bool saw_log() const { return saw_log_; }

 private:
  struct TraceEvent {
    std::string label;
    Timestamp time;
    std::optional<Lifecycle> kind;  // nullopt: atomic
  };

  void finish_event() {
    if (!event_.name || !event_.time) {
      log_.meta.warn(event_.line, std::string("event without ") +
                                      (!event_.name ? "concept:name" : "time:timestamp") +
                                      " skipped");
      return;
    }
    std::optional<Lifecycle> kind;
    if (event_.lifecycle == "start") kind = Lifecycle::Start;
    if (event_.lifecycle == "complete") kind = Lifecycle::Complete;
    trace_events_.push_back({std::move(*event_.name), *event_.time, kind});
  }

  void finish_trace() {
    std::string case_id = trace_name_ ? *trace_name_ : "case_" + std::to_string(trace_index_);
    ++trace_index_;

    std::stable_sort(trace_events_.begin(), trace_events_.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });
    std::vector<LifecycleEvent> lifecycle;
    for (auto& e : trace_events_) {
      if (e.kind) {
        lifecycle.push_back({e.label, *e.kind, e.time});
      } else {
        log_.add({next_id_++, case_id, e.label, e.time, e.time});
      }
    }
    auto paired = pair_events(lifecycle, case_id, next_id_);
    next_id_ += paired.instances.size();
    for (auto& w : paired.warnings) log_.meta.warn(0, std::move(w));
    for (auto& a : paired.instances) log_.add(std::move(a));
  }

  EventLog& log_;
  XML_Parser parser_ = nullptr;
  int depth_ = 0;
  bool saw_log_ = false;
  bool in_trace_ = false;
  bool in_event_ = false;
  std::optional<std::string> trace_name_;
  std::vector<TraceEvent> trace_events_;
  PendingEvent event_;
  std::size_t trace_index_ = 0;
  InstanceId next_id_ = 0;
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

// Feeds chunks to expat; throws ParseError with position on malformed XML.
class XmlFeeder {
 public:
  explicit XmlFeeder(Builder& builder) : parser_(XML_ParserCreate(nullptr)) {
    if (!parser_) throw Error("cannot allocate XML parser");
    builder.attach(parser_.get());
    XML_SetUserData(parser_.get(), &builder);
    XML_SetElementHandler(
        parser_.get(),
        [](void* ud, const XML_Char* name, const XML_Char** attrs) {
          static_cast<Builder*>(ud)->start_element(name, attrs);
        },
        [](void* ud, const XML_Char* name) { static_cast<Builder*>(ud)->end_element(name); });
  }

  void feed(const char* data, std::size_t size, bool final) {
    if (XML_Parse(parser_.get(), data, static_cast<int>(size), final) == XML_STATUS_ERROR) {
      throw ParseError(std::string("malformed XML: ") +
                           XML_ErrorString(XML_GetErrorCode(parser_.get())),
                       XML_GetCurrentLineNumber(parser_.get()),
                       XML_GetCurrentColumnNumber(parser_.get()) + 1);
    }
  }

 private:
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser_;
};

class GzipInflater {
 public:
  GzipInflater() {
    std::memset(&zs_, 0, sizeof zs_);
    // 15 + 32: accept zlib or gzip headers.
    if (inflateInit2(&zs_, 15 + 32) != Z_OK) throw Error("cannot initialise zlib");
  }
  ~GzipInflater() { inflateEnd(&zs_); }
  GzipInflater(const GzipInflater&) = delete;
  GzipInflater& operator=(const GzipInflater&) = delete;

  template <class Sink>
  void inflate_chunk(const char* data, std::size_t size, Sink&& sink) {
    zs_.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data));
    zs_.avail_in = static_cast<uInt>(size);
    std::array<char, 1 << 16> out;
    // Keep going while input remains or the last call filled the buffer (zlib may hold more).
    bool filled = false;
    while ((zs_.avail_in > 0 || filled) && !done_) {
      zs_.next_out = reinterpret_cast<Bytef*>(out.data());
      zs_.avail_out = static_cast<uInt>(out.size());
      int rc = inflate(&zs_, Z_NO_FLUSH);
      if (rc == Z_BUF_ERROR) break;  // no progress possible until more input arrives
      if (rc != Z_OK && rc != Z_STREAM_END) throw ParseError("corrupt gzip stream");
      sink(out.data(), out.size() - zs_.avail_out);
      filled = zs_.avail_out == 0;
      if (rc == Z_STREAM_END) done_ = true;
    }
  }

  bool done() const { return done_; }

 private:
  z_stream zs_;
  bool done_ = false;
};

}  // namespace xes_detail

/// Reads an XES document (plain or gzip-compressed) into an event log.
/// start/complete lifecycle events are paired per case with pair_events;
/// events with any other or no lifecycle value become atomic instances.
inline EventLog parse_xes(std::istream& in) {
  EventLog log;
  log.meta.format = "xes";
  xes_detail::Builder builder(log);
  xes_detail::XmlFeeder feeder(builder);

  std::array<char, 1 << 16> buf;
  in.read(buf.data(), 2);
  std::size_t head = static_cast<std::size_t>(in.gcount());
  const bool gz = head == 2 && static_cast<unsigned char>(buf[0]) == 0x1f &&
                  static_cast<unsigned char>(buf[1]) == 0x8b;

  if (gz) {
    xes_detail::GzipInflater inflater;
    auto sink = [&](const char* d, std::size_t n) { feeder.feed(d, n, false); };
    inflater.inflate_chunk(buf.data(), head, sink);
    while (in) {
      in.read(buf.data(), buf.size());
      auto n = static_cast<std::size_t>(in.gcount());
      if (n == 0) break;
      inflater.inflate_chunk(buf.data(), n, sink);
    }
    if (!inflater.done()) throw ParseError("truncated gzip stream");
  } else {
    feeder.feed(buf.data(), head, false);
    while (in) {
      in.read(buf.data(), buf.size());
      auto n = static_cast<std::size_t>(in.gcount());
      if (n == 0) break;
      feeder.feed(buf.data(), n, false);
    }
  }
  feeder.feed(nullptr, 0, true);
  if (!builder.saw_log()) throw ParseError("not an XES document: root element is not <log>");
  return log;
}

}  // namespace vw
