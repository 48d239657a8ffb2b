#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "prime/config.hpp"

using namespace prime;

namespace {
EngineConfig parse(const std::string& s) {
  std::istringstream in(s);
  return parse_config(in, {}, "mem");
}
}  // namespace

TEST(Config, Defaults) {
  EngineConfig c;
  EXPECT_EQ(c.k, 20u);
  EXPECT_EQ(c.clusters, 5u);
  EXPECT_EQ(c.beam, 20u);
  EXPECT_EQ(c.top_k, 5u);
  EXPECT_DOUBLE_EQ(c.lambda, 0.8);
  EXPECT_DOUBLE_EQ(c.copy_logprob, std::log(0.01));
  EXPECT_EQ(c.session_timeout, std::chrono::minutes(30));
}

TEST(Config, ParsesKeys) {
  auto c = parse("# defaults\nk = 30\nclusters=4 # inline\nbeam = 8\nlambda = \"0.5\"\nsession_timeout = 5\n"
                 "copy_penalty = 0.001\ntop_k = 3\nmax_phrase_len = 2\n");
  EXPECT_EQ(c.k, 30u);
  EXPECT_EQ(c.clusters, 4u);
  EXPECT_EQ(c.beam, 8u);
  EXPECT_DOUBLE_EQ(c.lambda, 0.5);
  EXPECT_EQ(c.session_timeout, std::chrono::minutes(5));
  EXPECT_DOUBLE_EQ(c.copy_logprob, std::log(0.001));
  EXPECT_EQ(c.top_k, 3u);
  EXPECT_EQ(c.max_phrase_len, 2u);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("k\n"), ParseError);
  EXPECT_THROW(parse("colour = 3\n"), ParseError);
  EXPECT_THROW(parse("k = 0\n"), ParseError);
  EXPECT_THROW(parse("lambda = 1\n"), ParseError);
  EXPECT_THROW(parse("k = 3\nclusters = 4\n"), ParseError);
  EXPECT_THROW(parse("copy_penalty = 0\n"), ParseError);
  try {
    parse("k = 3\n\nbeam = x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Config, ShippedSampleParses) {
  auto c = load_config((std::filesystem::path(PRIME_DATA_DIR) / "prime.conf").string());
  EXPECT_GE(c.k, c.clusters);
}
