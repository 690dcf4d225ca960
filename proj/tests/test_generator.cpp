#include <gtest/gtest.h>

#include "support.hpp"

using namespace atomcheck;

TEST(Generator, SingleThreadExample) {
  GeneratorConfig c;
  c.threads = 1;
  c.events = 4;
  c.vars = 1;
  c.locks = 0;
  c.seed = 7;
  Trace t = generate_trace(c);
  EXPECT_EQ(t.size(), 4u);
  EXPECT_EQ(t.thread_count(), 1u);
  EXPECT_TRUE(validate(t).empty());
}

TEST(Generator, Deterministic) {
  GeneratorConfig c;
  c.threads = 4;
  c.events = 500;
  c.seed = 12345;
  EXPECT_EQ(serialize_trace(generate_trace(c)), serialize_trace(generate_trace(c)));
  GeneratorConfig d = c;
  d.seed = 12346;
  EXPECT_NE(serialize_trace(generate_trace(c)), serialize_trace(generate_trace(d)));
}

// Pinned output guards the byte-identical contract across builds.
TEST(Generator, PinnedOutput) {
  GeneratorConfig c;
  c.threads = 2;
  c.events = 8;
  c.vars = 2;
  c.locks = 1;
  c.seed = 1;
  EXPECT_EQ(serialize_trace(generate_trace(c)),
            "T0|r(x0)\nT1|join(T0)\nT1|w(x0)\nT1|begin\nT1|w(x0)\nT1|r(x1)\nT1|w(x0)\nT1|end\n");
}

TEST(Generator, ThousandSeedsValidate) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    GeneratorConfig c;
    c.threads = 4;
    c.events = 40;
    c.vars = 3;
    c.locks = 2;
    c.seed = s;
    Trace t = generate_trace(c);
    ASSERT_TRUE(validate(t).empty()) << "seed " << s;
    EXPECT_EQ(t.size(), 40u);
    EXPECT_LE(t.thread_count(), 4u);
    EXPECT_LE(t.var_count(), 3u);
    EXPECT_LE(t.lock_count(), 2u);
  }
}

TEST(Generator, TracesAreComplete) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    Trace t = atomcheck::testing::fuzz_trace(s);
    for (const auto& tx : transactions_of(t)) EXPECT_FALSE(tx.active()) << "seed " << s;
  }
}

TEST(Generator, CoversEveryOperationKind) {
  std::array<std::size_t, 8> seen{};
  for (std::uint64_t s = 0; s < 200; ++s)
    for (const Event& e : atomcheck::testing::fuzz_trace(s).events) ++seen[static_cast<std::size_t>(e.kind)];
  for (std::size_t k = 0; k < seen.size(); ++k) EXPECT_GT(seen[k], 0u) << op_name(static_cast<OpKind>(k));
}

TEST(Generator, ZeroEvents) {
  GeneratorConfig c;
  c.events = 0;
  EXPECT_TRUE(generate_trace(c).empty());
}

TEST(Generator, RejectsInfeasibleConfigs) {
  GeneratorConfig c;
  c.threads = 0;
  EXPECT_THROW(generate_trace(c), std::invalid_argument);
  c = {};
  c.vars = 0;
  EXPECT_THROW(generate_trace(c), std::invalid_argument);
  c = {};
  c.txn_min = 5;
  c.txn_max = 2;
  EXPECT_THROW(generate_trace(c), std::invalid_argument);
}

TEST(Generator, BenchFamiliesAreWellFormed) {
  Trace lin = make_linear_trace(5000, 3);
  EXPECT_EQ(lin.size(), 5000u);
  EXPECT_TRUE(validate(lin).empty());
  Trace adv = make_adversarial_trace(50);
  EXPECT_EQ(adv.size(), 4u * 50 + 3);
  EXPECT_TRUE(validate(adv).empty());
}
