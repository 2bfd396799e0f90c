#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "support/oracles.hpp"
#include "vw/ingest.hpp"
#include "vw/xes.hpp"

using namespace vw;
using vw::testing::data_path;

namespace {

constexpr std::int64_t kJul13 = 1'626'134'400;

Timestamp hm(int h, int m) { return Timestamp::from_seconds(kJul13 + h * 3600 + m * 60); }

EventLog read_file(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  EXPECT_TRUE(in) << name;
  return name.find(".xes") != std::string::npos ? parse_xes(in) : parse_csv(in);
}

using Row = std::tuple<std::string, std::string, std::int64_t, std::int64_t>;

std::multiset<Row> rows_of(const EventLog& log) {
  std::multiset<Row> out;
  for (const auto& a : log.instances()) out.emplace(a.case_id, a.label, a.start.micros, a.complete.micros);
  return out;
}

EventLog xes_from_string(const std::string& text) {
  std::istringstream in(text);
  return parse_xes(in);
}

std::string xes_event(const std::string& name, const std::string& lifecycle, const std::string& time) {
  std::string out = "<event><string key=\"concept:name\" value=\"" + name + "\"/>";
  if (!lifecycle.empty()) out += "<string key=\"lifecycle:transition\" value=\"" + lifecycle + "\"/>";
  if (!time.empty()) out += "<date key=\"time:timestamp\" value=\"" + time + "\"/>";
  return out + "</event>\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV

TEST(Csv, SingleRowWithEventIdColumn) {
  std::istringstream in(
      "event_id,case,label,start,complete\n"
      "1,1,activity A,07/13/2021 08:00,07/13/2021 09:30\n");
  EventLog log = parse_csv(in);
  ASSERT_EQ(log.size(), 1u);
  const auto& a = log.instances()[0];
  EXPECT_EQ(a.case_id, "1");
  EXPECT_EQ(a.label, "activity A");
  EXPECT_EQ(a.start, hm(8, 0));
  EXPECT_EQ(a.complete, hm(9, 30));
}

TEST(Csv, HeaderOnlyGivesEmptyLog) {
  std::istringstream in("case,label,start,complete\n");
  EXPECT_TRUE(parse_csv(in).empty());
}

TEST(Csv, RunningExampleFixtureHasEightPlusOneRows) {
  EventLog log = read_file("example_log.csv");
  ASSERT_EQ(log.size(), 9u);
  auto traces = group_by_case(log);
  ASSERT_EQ(traces.size(), 2u);
  EXPECT_EQ(traces[0].case_id, "1");
  EXPECT_EQ(traces[0].instances.size(), 8u);
  EXPECT_EQ(traces[1].case_id, "2");
  EXPECT_EQ(traces[1].instances.size(), 1u);
  EXPECT_TRUE(log.meta.diagnostics.empty());
}

TEST(Csv, CustomColumnMapping) {
  std::istringstream in(
      "Activity,Case ID,End,Begin\n"
      "A,c1,2021-07-13T09:30:00Z,2021-07-13T08:00:00Z\n");
  EventLog log = parse_csv(in, ColumnMap::from_list("Case ID,Activity,Begin,End"));
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.instances()[0].case_id, "c1");
  EXPECT_EQ(log.instances()[0].start, hm(8, 0));
}

TEST(Csv, MissingColumnIsParseError) {
  std::istringstream in("case,label,start\n1,A,2021-07-13T08:00:00Z\n");
  EXPECT_THROW(parse_csv(in), ParseError);
}

TEST(Csv, QuotedFieldsAndBom) {
  std::istringstream in(
      "\xEF\xBB\xBF" "case,label,start,complete\r\n"
      "\"1\",\"check, \"\"urgent\"\"\",2021-07-13T08:00:00Z,2021-07-13T09:00:00Z\r\n"
      "1,\"multi\nline\",2021-07-13T10:00:00Z,2021-07-13T11:00:00Z\r\n");
  EventLog log = parse_csv(in);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log.instances()[0].label, "check, \"urgent\"");
  EXPECT_EQ(log.instances()[1].label, "multi\nline");
}

TEST(Csv, BadRowsAreSkippedWithDiagnostics) {
  std::istringstream in(
      "case,label,start,complete\n"
      "1,A,2021-07-13T08:00:00Z,2021-07-13T09:00:00Z\n"
      "1,B,not a time,2021-07-13T09:00:00Z\n"
      "1,C\n"
      "1,D,2021-07-13T10:00:00Z,2021-07-13T09:00:00Z\n");
  EventLog log = parse_csv(in);
  ASSERT_EQ(log.size(), 1u);
  ASSERT_EQ(log.meta.diagnostics.size(), 3u);
  EXPECT_EQ(log.meta.diagnostics[0].line, 3u);
  EXPECT_EQ(log.meta.diagnostics[1].line, 4u);
  EXPECT_EQ(log.meta.diagnostics[2].line, 5u);
  EXPECT_EQ(log.meta.diagnostics[2].severity, Severity::Error);
}

TEST(Csv, WriteThenParseRoundTrips) {
  std::mt19937_64 rng(7);
  EventLog log;
  for (InstanceId i = 0; i < 200; ++i) {
    std::int64_t s = static_cast<std::int64_t>(rng() % 1'000'000'000'000ULL);
    std::int64_t d = static_cast<std::int64_t>(rng() % 10'000'000'000ULL);
    std::string label = std::string(1, char('A' + rng() % 5));
    if (rng() % 7 == 0) label += ", \"quoted\"";
    log.add({i, "c" + std::to_string(rng() % 10), label, Timestamp{s}, Timestamp{s + d}});
  }
  std::stringstream buf;
  write_csv(buf, log);
  EventLog back = parse_csv(buf);
  EXPECT_EQ(rows_of(back), rows_of(log));
}

TEST(EventLog, RejectsDuplicateIdsAndInvertedIntervals) {
  EventLog log;
  log.add({0, "1", "A", hm(8, 0), hm(9, 0)});
  EXPECT_THROW(log.add({0, "1", "B", hm(8, 0), hm(9, 0)}), InvalidArgument);
  EXPECT_THROW(log.add({1, "1", "B", hm(9, 0), hm(8, 0)}), InvalidArgument);
}

// ---------------------------------------------------------------------------
// grouping

TEST(GroupByCase, EmptyLogGivesNoTraces) { EXPECT_TRUE(group_by_case(EventLog{}).empty()); }

TEST(GroupByCase, KeepsFirstAppearanceOrderAndSortsInstances) {
  EventLog log;
  log.add({0, "b", "X", hm(10, 0), hm(11, 0)});
  log.add({1, "a", "Y", hm(9, 0), hm(9, 0)});
  log.add({2, "b", "Z", hm(8, 0), hm(12, 0)});
  auto traces = group_by_case(log);
  ASSERT_EQ(traces.size(), 2u);
  EXPECT_EQ(traces[0].case_id, "b");
  EXPECT_EQ(traces[0].instances[0].label, "Z");
  EXPECT_EQ(traces[0].instances[1].label, "X");
  EXPECT_EQ(traces[1].case_id, "a");
}

// ---------------------------------------------------------------------------
// lifecycle pairing

TEST(PairEvents, StartAndCompleteBecomeOneInstance) {
  std::vector<LifecycleEvent> ev{{"A", Lifecycle::Start, hm(8, 0)}, {"A", Lifecycle::Complete, hm(9, 30)}};
  auto r = pair_events(ev, "1");
  ASSERT_EQ(r.instances.size(), 1u);
  EXPECT_EQ(r.instances[0].start, hm(8, 0));
  EXPECT_EQ(r.instances[0].complete, hm(9, 30));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(PairEvents, UnmatchedStartIsAtomicWithWarning) {
  std::vector<LifecycleEvent> ev{{"A", Lifecycle::Start, hm(8, 0)}};
  auto r = pair_events(ev, "1");
  ASSERT_EQ(r.instances.size(), 1u);
  EXPECT_EQ(r.instances[0].start, r.instances[0].complete);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(PairEvents, UnmatchedCompleteIsAtomicWithWarning) {
  std::vector<LifecycleEvent> ev{{"A", Lifecycle::Complete, hm(8, 0)}, {"B", Lifecycle::Start, hm(9, 0)},
                                 {"B", Lifecycle::Complete, hm(10, 0)}};
  auto r = pair_events(ev, "1");
  ASSERT_EQ(r.instances.size(), 2u);
  EXPECT_EQ(r.instances[0].label, "A");
  EXPECT_EQ(r.instances[0].start, hm(8, 0));
  EXPECT_EQ(r.instances[0].complete, hm(8, 0));
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(PairEvents, InterleavedSameLabelMatchesFirstInFirstOut) {
  std::vector<LifecycleEvent> ev{{"A", Lifecycle::Start, Timestamp{1}}, {"A", Lifecycle::Start, Timestamp{2}},
                                 {"A", Lifecycle::Complete, Timestamp{3}},
                                 {"A", Lifecycle::Complete, Timestamp{4}}};
  auto r = pair_events(ev, "1", 10);
  ASSERT_EQ(r.instances.size(), 2u);
  EXPECT_EQ(r.instances[0].id, 10u);
  EXPECT_EQ(r.instances[0].start, Timestamp{1});
  EXPECT_EQ(r.instances[0].complete, Timestamp{3});
  EXPECT_EQ(r.instances[1].start, Timestamp{2});
  EXPECT_EQ(r.instances[1].complete, Timestamp{4});
}

// FIFO is compared with every feasible matching of one label's events: it must
// attain the smallest possible longest duration.
TEST(PairEvents, FifoMinimisesLongestDurationAgainstAllMatchings) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 500; ++round) {
    const int pairs = 1 + static_cast<int>(rng() % 3);
    // A random well-nested start/complete sequence (Dyck word) on distinct times.
    std::vector<LifecycleEvent> ev;
    int open = 0, starts = 0;
    for (int t = 1; starts < pairs || open > 0; ++t) {
      bool start = starts < pairs && (open == 0 || rng() % 2);
      ev.push_back({"A", start ? Lifecycle::Start : Lifecycle::Complete, Timestamp{t}});
      if (start) {
        ++open;
        ++starts;
      } else {
        --open;
      }
    }
    std::vector<std::int64_t> s, c;
    for (const auto& e : ev) (e.kind == Lifecycle::Start ? s : c).push_back(e.time.micros);

    std::vector<std::size_t> perm(c.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    do {
      std::int64_t worst = 0;
      bool feasible = true;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (c[perm[i]] < s[i]) feasible = false;
        worst = std::max(worst, c[perm[i]] - s[i]);
      }
      if (feasible) best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));

    auto r = pair_events(ev);
    ASSERT_TRUE(r.warnings.empty());
    std::int64_t fifo = 0;
    for (const auto& a : r.instances) {
      ASSERT_LE(a.start, a.complete);
      fifo = std::max(fifo, a.complete.micros - a.start.micros);
    }
    EXPECT_EQ(fifo, best) << "round " << round;
  }
}

// ---------------------------------------------------------------------------
// XES

TEST(Xes, FixtureMatchesCsvFixture) {
  EventLog xes = read_file("same_variant.xes");
  EventLog csv = read_file("same_variant.csv");
  EXPECT_EQ(xes.size(), 16u);
  EXPECT_EQ(rows_of(xes), rows_of(csv));
  EXPECT_TRUE(xes.meta.diagnostics.empty());
}

TEST(Xes, GzipFixtureMatchesPlain) {
  EXPECT_EQ(rows_of(read_file("same_variant.xes.gz")), rows_of(read_file("same_variant.xes")));
}

TEST(Xes, StartCompletePairBecomesOneInstance) {
  auto log = xes_from_string("<log><trace><string key=\"concept:name\" value=\"7\"/>" +
                             xes_event("A", "start", "2021-07-13T08:00:00Z") +
                             xes_event("A", "complete", "2021-07-13T09:30:00Z") + "</trace></log>");
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.instances()[0].case_id, "7");
  EXPECT_EQ(log.instances()[0].start, hm(8, 0));
  EXPECT_EQ(log.instances()[0].complete, hm(9, 30));
}

TEST(Xes, EventWithoutLifecycleIsAtomic) {
  auto log = xes_from_string("<log><trace>" + xes_event("A", "", "2021-07-13T08:00:00Z") + "</trace></log>");
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.instances()[0].start, hm(8, 0));
  EXPECT_EQ(log.instances()[0].complete, hm(8, 0));
  EXPECT_EQ(log.instances()[0].case_id, "case_0");
}

TEST(Xes, OtherLifecycleValuesAreAtomic) {
  auto log = xes_from_string("<log><trace>" + xes_event("A", "schedule", "2021-07-13T07:00:00Z") +
                             xes_event("A", "START", "2021-07-13T08:00:00Z") +
                             xes_event("A", "Complete", "2021-07-13T09:00:00Z") + "</trace></log>");
  ASSERT_EQ(log.size(), 2u);
  auto traces = group_by_case(log);
  EXPECT_EQ(traces[0].instances[0].start, hm(7, 0));
  EXPECT_EQ(traces[0].instances[0].complete, hm(7, 0));
  EXPECT_EQ(traces[0].instances[1].start, hm(8, 0));
  EXPECT_EQ(traces[0].instances[1].complete, hm(9, 0));
}

TEST(Xes, InterleavedSameLabelMatchesFirstInFirstOut) {
  auto log = xes_from_string("<log><trace>" + xes_event("A", "complete", "2021-07-13T11:00:00Z") +
                             xes_event("A", "start", "2021-07-13T09:00:00Z") +
                             xes_event("A", "complete", "2021-07-13T10:00:00Z") +
                             xes_event("A", "start", "2021-07-13T08:00:00Z") + "</trace></log>");
  ASSERT_EQ(log.size(), 2u);
  std::multiset<Row> expected{{"case_0", "A", hm(8, 0).micros, hm(10, 0).micros},
                              {"case_0", "A", hm(9, 0).micros, hm(11, 0).micros}};
  EXPECT_EQ(rows_of(log), expected);
}

TEST(Xes, EventsMissingNameOrTimeAreSkippedWithLine) {
  auto log = xes_from_string("<log>\n<trace>\n" + xes_event("A", "", "") +
                             "<event><date key=\"time:timestamp\" value=\"2021-07-13T08:00:00Z\"/></event>\n" +
                             xes_event("B", "", "2021-07-13T08:00:00Z") + "</trace>\n</log>");
  EXPECT_EQ(log.size(), 1u);
  ASSERT_EQ(log.meta.diagnostics.size(), 2u);
  EXPECT_EQ(log.meta.diagnostics[0].line, 3u);
  EXPECT_EQ(log.meta.diagnostics[1].line, 4u);
}

TEST(Xes, MalformedXmlReportsPosition) {
  try {
    xes_from_string("<log>\n<trace>\n  <event></trace>\n</log>");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 0u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Xes, TruncatedDocumentIsParseError) {
  EXPECT_THROW(xes_from_string("<log><trace>"), ParseError);
}

TEST(Xes, NonLogRootIsParseError) { EXPECT_THROW(xes_from_string("<html></html>"), ParseError); }

TEST(Xes, CorruptGzipIsParseError) {
  std::ifstream in(data_path("same_variant.xes.gz"), std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(parse_xes(truncated), ParseError);
}
