#include "plnash/config.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <string>
#include <vector>

namespace plnash {
namespace {

TEST(ConfigParseTest, KeyValueLinesWithCommentsAndBlanks) {
  const Config cfg = Config::parse(
      "# experiment settings\n"
      "\n"
      "problem = f4\n"
      "alpha = 0.05\r\n"
      "T = 100\n"
      "  gamma   =   0.5  \n");
  EXPECT_TRUE(cfg.has("problem"));
  EXPECT_FALSE(cfg.has("beta"));
  EXPECT_EQ(cfg.get_string("problem"), "f4");
  EXPECT_DOUBLE_EQ(cfg.get_double("alpha"), 0.05);
  EXPECT_EQ(cfg.get_int("T"), 100);
  EXPECT_DOUBLE_EQ(cfg.get_double("gamma"), 0.5);
  EXPECT_EQ(cfg.entries().size(), 4u);
}

TEST(ConfigParseTest, ValuesKeepEqualsAndHashCharacters) {
  // Only the first '=' splits, and '#' comments are whole lines.
  const Config cfg = Config::parse("expr = a=b\nnote = 5 # not a comment\n");
  EXPECT_EQ(cfg.get_string("expr"), "a=b");
  EXPECT_EQ(cfg.get_string("note"), "5 # not a comment");
  EXPECT_THROW(cfg.get_int("note"), ConfigError);
}

TEST(ConfigParseTest, ErrorsCarryLineNumbers) {
  try {
    Config::parse("a = 1\n\na = 2\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("duplicate key 'a'"), std::string::npos) << msg;
  }
  EXPECT_THROW(Config::parse("just-a-token\n"), ConfigError);
  EXPECT_THROW(Config::parse("= 5\n"), ConfigError);
}

TEST(ConfigGetTest, MissingKeysAndFallbacks) {
  const Config cfg = Config::parse("alpha = 0.1\n");
  EXPECT_THROW(cfg.get_string("beta"), ConfigError);
  EXPECT_THROW(cfg.get_double("beta"), ConfigError);
  EXPECT_THROW(cfg.get_int("T"), ConfigError);
  EXPECT_EQ(cfg.get_string("beta", "x"), "x");
  EXPECT_DOUBLE_EQ(cfg.get_double("beta", 0.25), 0.25);
  EXPECT_EQ(cfg.get_int("T", 7), 7);
  // A present but malformed value is an error even with a fallback.
  const Config bad = Config::parse("alpha = abc\n");
  EXPECT_THROW(bad.get_double("alpha", 0.5), ConfigError);
}

TEST(ConfigGetTest, RejectsMalformedNumbers) {
  const Config cfg = Config::parse(
      "a = 1.5x\n"
      "b = 2.5\n"
      "c = 99999999999999999999999\n"
      "d = 1e999999\n"
      "e = -3\n");
  EXPECT_THROW(cfg.get_double("a"), ConfigError);
  EXPECT_THROW(cfg.get_int("b"), ConfigError);
  EXPECT_THROW(cfg.get_int("c"), ConfigError);
  EXPECT_THROW(cfg.get_double("d"), ConfigError);
  EXPECT_EQ(cfg.get_int("e"), -3);
  EXPECT_DOUBLE_EQ(cfg.get_double("e"), -3.0);
}

TEST(ConfigListTest, TrimsTokensAndDropsEmpties) {
  const Config cfg = Config::parse("names =  a , b ,, c \nvals = 1, 2.5, -3\n");
  const std::vector<std::string> names = cfg.get_list("names");
  ASSERT_EQ(names.size(), 3u);
  EXPECT_EQ(names[0], "a");
  EXPECT_EQ(names[1], "b");
  EXPECT_EQ(names[2], "c");
  const std::vector<double> vals = cfg.get_double_list("vals");
  ASSERT_EQ(vals.size(), 3u);
  EXPECT_DOUBLE_EQ(vals[0], 1.0);
  EXPECT_DOUBLE_EQ(vals[1], 2.5);
  EXPECT_DOUBLE_EQ(vals[2], -3.0);
  const Config bad = Config::parse("vals = 1, zz\n");
  EXPECT_THROW(bad.get_double_list("vals"), ConfigError);
}

TEST(ConfigSeedsTest, RangesAndSingletons) {
  const Config cfg = Config::parse(
      "a = 1..20\n"
      "b = 1,2,5..8\n"
      "c = 9..9\n"
      "d = 0\n");
  const std::vector<std::uint64_t> a = cfg.get_seeds("a");
  ASSERT_EQ(a.size(), 20u);
  EXPECT_EQ(a.front(), 1u);
  EXPECT_EQ(a.back(), 20u);
  const std::vector<std::uint64_t> b = cfg.get_seeds("b");
  ASSERT_EQ(b.size(), 6u);
  EXPECT_EQ(b, (std::vector<std::uint64_t>{1, 2, 5, 6, 7, 8}));
  EXPECT_EQ(cfg.get_seeds("c"), (std::vector<std::uint64_t>{9}));
  EXPECT_EQ(cfg.get_seeds("d"), (std::vector<std::uint64_t>{0}));
}

TEST(ConfigSeedsTest, RejectsBadRanges) {
  const Config cfg = Config::parse(
      "desc = 5..3\n"
      "huge = 0..1000000\n"
      "neg = -4\n"
      "junk = a..b\n");
  EXPECT_THROW(cfg.get_seeds("desc"), ConfigError);
  EXPECT_THROW(cfg.get_seeds("huge"), ConfigError);
  EXPECT_THROW(cfg.get_seeds("neg"), ConfigError);
  EXPECT_THROW(cfg.get_seeds("junk"), ConfigError);
}

TEST(ConfigSerializeTest, SortedKeysAndParseIdentity) {
  Config cfg;
  cfg.set("zeta", "last");
  cfg.set("alpha", "  first  ");  // set trims
  cfg.set_int("mid", 42);
  const std::string text = cfg.serialize();
  EXPECT_EQ(text, "alpha = first\nmid = 42\nzeta = last\n");
  EXPECT_EQ(Config::parse(text), cfg);
  EXPECT_EQ(Config::parse(Config::parse(text).serialize()), cfg);
}

TEST(ConfigSerializeTest, DoublesRoundTripExactly) {
  Config cfg;
  cfg.set_double("a", 0.1);
  cfg.set_double("b", 1.0);
  cfg.set_double("c", -1.0 / 3.0);
  cfg.set_double("d", 1e300);
  const Config back = Config::parse(cfg.serialize());
  EXPECT_EQ(back.get_double("a"), 0.1);
  EXPECT_EQ(back.get_double("b"), 1.0);
  EXPECT_EQ(back.get_double("c"), -1.0 / 3.0);
  EXPECT_EQ(back.get_double("d"), 1e300);
}

TEST(FormatG17Test, ShortestExactDecimals) {
  EXPECT_EQ(format_g17(1.0), "1");
  EXPECT_EQ(format_g17(0.5), "0.5");
  EXPECT_EQ(format_g17(0.1), "0.10000000000000001");
  EXPECT_EQ(format_g17(-2.0), "-2");
}

TEST(ConfigFileTest, SaveAndLoadRoundTrip) {
  Config cfg;
  cfg.set("problem", "f6");
  cfg.set_double("alpha", 0.021875);
  cfg.set("seeds", "1..5");
  const std::string path = ::testing::TempDir() + "plnash_config_roundtrip.cfg";
  cfg.save(path);
  const Config back = Config::load(path);
  EXPECT_EQ(back, cfg);
  EXPECT_THROW(Config::load(::testing::TempDir() + "does_not_exist.cfg"), ConfigError);
}

}  // namespace
}  // namespace plnash
