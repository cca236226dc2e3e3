#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "sqlfill/fuzzy.hpp"

using namespace sqlfill::fuzzy;

namespace {

// Wagner-Fischer with insert/delete cost 1 and substitution cost 2.
std::size_t wagner_fischer(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2)});
  return d[a.size()][b.size()];
}

}  // namespace

TEST(Fuzzy, MatchesWagnerFischer) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(0, 12), ch(0, 3);
  for (int n = 0; n < 2000; ++n) {
    std::string a(len(rng), 'a'), b(len(rng), 'a');
    for (char& c : a) c = static_cast<char>('a' + ch(rng));
    for (char& c : b) c = static_cast<char>('a' + ch(rng));
    EXPECT_EQ(indel_distance(a, b), wagner_fischer(a, b)) << a << " / " << b;
  }
}

TEST(Fuzzy, RatioValues) {
  EXPECT_DOUBLE_EQ(ratio("", ""), 100.0);
  EXPECT_DOUBLE_EQ(ratio("abc", ""), 0.0);
  EXPECT_DOUBLE_EQ(ratio("spanish", "spanish"), 100.0);
  // kitten/sitting: indel 5 over 13 characters
  EXPECT_NEAR(ratio("kitten", "sitting"), 100.0 * 8.0 / 13.0, 1e-9);
  EXPECT_DOUBLE_EQ(ratio("ab", "ba"), ratio("ba", "ab"));
}

TEST(Fuzzy, WindowRatio) {
  const std::vector<std::string> q{"list", "of", "countries", "where", "spanish", "is", "spoken"};
  EXPECT_DOUBLE_EQ(best_window_ratio("Spanish", q), 100.0);
  EXPECT_LT(best_window_ratio("United States", {"cities", "in", "the", "usa"}), 85.0);
  EXPECT_DOUBLE_EQ(best_window_ratio("United States", {"in", "the", "united", "states"}), 100.0);
  EXPECT_DOUBLE_EQ(best_window_ratio("x", {}), 0.0);
}
