#include <gtest/gtest.h>

#include "support.hpp"

using namespace atomcheck;
using atomcheck::testing::rho;

TEST(MetaInfo, Rho4) {
  MetaInfo m = compute_metainfo(rho(4));
  EXPECT_EQ(m.events, 12u);
  EXPECT_EQ(m.threads, 3u);
  EXPECT_EQ(m.locks, 0u);
  EXPECT_EQ(m.variables, 3u);
  EXPECT_EQ(m.transactions, 3u);
  EXPECT_EQ(m.completed_transactions, 3u);
  EXPECT_EQ(m.count(OpKind::begin), 3u);
  EXPECT_EQ(m.count(OpKind::write), 3u);
}

TEST(MetaInfo, EmptyTraceIsAllZeros) {
  std::string text = render_metainfo(compute_metainfo(Trace{}));
  std::istringstream in(text);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    EXPECT_EQ(line.substr(line.find('=')), "=0") << line;
  }
  EXPECT_EQ(lines, 15u);
}

TEST(MetaInfo, PerKindCountsSumToTotal) {
  GeneratorConfig c;
  c.events = 1000;
  c.seed = 8;
  MetaInfo m = compute_metainfo(generate_trace(c));
  EXPECT_EQ(m.events, 1000u);
  EXPECT_LE(m.threads, 4u);
  std::size_t sum = 0;
  for (auto k : m.per_kind) sum += k;
  EXPECT_EQ(sum, m.events);
}

namespace {
const char* kTwoMethods =
    "m|begin(main)\n"
    "m|begin(put)\n"
    "m|w(x)\n"
    "m|end(put)\n"
    "m|begin(get)\n"
    "m|r(x)\n"
    "m|end\n"
    "m|end(main)\n";
}

TEST(Filter, EmptySpecMakesEverythingUnary) {
  Trace out = filter_trace(parse_trace(kTwoMethods), AtomicitySpec{});
  EXPECT_EQ(serialize_trace(out), "m|w(x)\nm|r(x)\n");
  for (const auto& t : transactions_of(out)) EXPECT_TRUE(t.unary);
}

TEST(Filter, FullSpecIsIdentity) {
  Trace in = parse_trace(kTwoMethods);
  Trace out = filter_trace(in, AtomicitySpec::parse("main\nput\nget\n"));
  EXPECT_EQ(out, in);
}

TEST(Filter, OneAtomicMethodSurvives) {
  Trace out = filter_trace(parse_trace(kTwoMethods), AtomicitySpec::parse("# comment\n  put \n"));
  EXPECT_EQ(serialize_trace(out), "m|begin(put)\nm|w(x)\nm|end(put)\nm|r(x)\n");
  EXPECT_TRUE(validate(out).empty());
}

TEST(Filter, InteriorStaysInsideSurvivingOuterBlock) {
  Trace out = filter_trace(parse_trace(kTwoMethods), AtomicitySpec::parse("main\n"));
  EXPECT_EQ(serialize_trace(out), "m|begin(main)\nm|w(x)\nm|r(x)\nm|end(main)\n");
}

TEST(Filter, UnlabeledBeginsAreListed) {
  try {
    filter_trace(parse_trace("a|begin\na|end\na|begin(m)\na|end\nb|begin\nb|end\n"), AtomicitySpec::parse("m"));
    FAIL();
  } catch (const FilterError& e) {
    EXPECT_EQ(e.offending(), (std::vector<std::size_t>{1, 5}));
    EXPECT_NE(std::string(e.what()).find("events 1, 5"), std::string::npos);
  }
}

TEST(Filter, MismatchedEndLabel) {
  EXPECT_THROW(filter_trace(parse_trace("a|begin(m)\na|end(n)\n"), AtomicitySpec::parse("m")), FilterError);
}

TEST(Filter, OutputAlwaysValidates) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    Trace t = atomcheck::testing::fuzz_trace(s);
    Trace labeled;
    std::vector<std::vector<std::string>> open(t.thread_count());
    Rng r(s);
    for (const Event& e : t.events) {
      std::string op = t.operand_name(e);
      if (e.kind == OpKind::begin) {
        op = r.chance(1, 2) ? "a" : "b";
        open[e.thread].push_back(op);
      } else if (e.kind == OpKind::end) {
        op = open[e.thread].back();
        open[e.thread].pop_back();
      }
      labeled.append(t.threads.name(e.thread), e.kind, op);
    }
    EXPECT_TRUE(validate(filter_trace(labeled, AtomicitySpec::parse("a"))).empty()) << "seed " << s;
  }
}

TEST(Analysis, AllEnginesAgreeOnGoldenTraces) {
  for (int i = 1; i <= 4; ++i) {
    bool expected = i != 1;
    for (EngineKind k : {EngineKind::aerodrome, EngineKind::aerodrome_opt, EngineKind::velodrome, EngineKind::oracle})
      EXPECT_EQ(analyze_trace(rho(i), k).verdict.violation(), expected) << "rho" << i << ' ' << engine_name(k);
  }
}

TEST(Analysis, ReportsEventsProcessed) {
  AnalysisReport r = analyze_trace(rho(2), EngineKind::aerodrome);
  EXPECT_EQ(r.events_processed, 6u);
  EXPECT_GT(r.counters.compares, 0u);
  EXPECT_EQ(analyze_trace(rho(1), EngineKind::aerodrome_opt).events_processed, 10u);
}

TEST(Analysis, OracleCap) {
  AnalysisOptions opt;
  opt.oracle_cap = 5;
  EXPECT_THROW(analyze_trace(rho(1), EngineKind::oracle, opt), OracleCapExceeded);
}

TEST(Analysis, MalformedInputIsRejected) {
  EXPECT_THROW(analyze_trace(parse_trace("a|rel(l)\n"), EngineKind::velodrome), MalformedTraceError);
}

TEST(Analysis, EngineNames) {
  EXPECT_EQ(parse_engine("aerodrome-opt"), EngineKind::aerodrome_opt);
  EXPECT_FALSE(parse_engine("fasttrack").has_value());
}

TEST(Bench, RowRendering) {
  BenchRow r{BenchFamily::linear, 100, EngineKind::aerodrome_opt, 1, 100, false, 0, {}};
  r.wall_ms = 1.5;
  r.counters = {10, 20};
  EXPECT_EQ(render_bench_row(r), "linear,100,aerodrome-opt,1,100,1.500,10,20");
  BenchRow s{BenchFamily::adversarial, 5000, EngineKind::oracle, 1, 20003, false, 0, {}};
  s.skipped = true;
  EXPECT_EQ(render_bench_row(s), "adversarial,5000,oracle,1,20003,skipped,,");
}

TEST(Bench, OracleSkippedAboveCap) {
  Trace t = make_adversarial_trace(3000);
  BenchRow r = bench_one(t, BenchFamily::adversarial, 3000, EngineKind::oracle, 0);
  EXPECT_TRUE(r.skipped);
}

TEST(Bench, InputsAreDeterministic) {
  EXPECT_EQ(make_linear_trace(2000, 4), make_linear_trace(2000, 4));
  EXPECT_EQ(make_adversarial_trace(10), make_adversarial_trace(10));
}

TEST(Bench, LinearFamilyIsSerializable) {
  Trace t = make_linear_trace(3000, 11);
  for (EngineKind k : {EngineKind::aerodrome, EngineKind::aerodrome_opt, EngineKind::velodrome, EngineKind::oracle})
    EXPECT_TRUE(analyze_trace(t, k).verdict.serializable()) << engine_name(k);
}

TEST(Bench, AdversarialFamilyIsSerializable) {
  Trace t = make_adversarial_trace(200);
  for (EngineKind k : {EngineKind::aerodrome, EngineKind::aerodrome_opt, EngineKind::velodrome, EngineKind::oracle})
    EXPECT_TRUE(analyze_trace(t, k).verdict.serializable()) << engine_name(k);
}
