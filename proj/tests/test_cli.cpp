#include <gtest/gtest.h>

#include <cstdlib>

#include "support/golden.hpp"

namespace {

namespace fs = std::filesystem;
using lhott::testing::GoldenCase;

class Golden : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(Golden, MatchesTranscript) {
  const auto& c = GetParam();
  auto got = lhott::testing::transcript(LHOTT_CLI, LHOTT_SCRIPTS_DIR, c.args);
  auto path = fs::path(LHOTT_GOLDEN_DIR) / (c.name + ".out");
  // set LHOTT_REGENERATE_GOLDEN to rewrite expectations, then read the diff
  if (std::getenv("LHOTT_REGENERATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << got;
    GTEST_SKIP() << "wrote " << path;
  }
  ASSERT_TRUE(fs::exists(path)) << path;
  EXPECT_EQ(got, lhott::testing::read_file(path));
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden, ::testing::ValuesIn(lhott::testing::golden_cases(LHOTT_GOLDEN_DIR)),
                         [](const auto& info) { return info.param.name; });

}  // namespace
