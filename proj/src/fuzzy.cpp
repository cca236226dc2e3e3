#include "sqlfill/fuzzy.hpp"

#include <algorithm>

#include "sqlfill/preprocess.hpp"

namespace sqlfill::fuzzy {

std::size_t indel_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // single-row LCS table over the shorter string
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (char ca : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = ca == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return a.size() + b.size() - 2 * row[b.size()];
}

double ratio(std::string_view a, std::string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 100.0;
  return 100.0 * static_cast<double>(total - indel_distance(a, b)) / static_cast<double>(total);
}

double best_window_ratio(std::string_view value, const std::vector<std::string>& question_tokens) {
  const auto words = tokenize(value);
  if (words.empty() || question_tokens.empty()) return 0.0;
  const std::string target = join_tokens(words, 0, words.size());
  const std::size_t lo = std::max<std::size_t>(1, words.size() - 1);
  const std::size_t hi = words.size() + 1;
  double best = 0.0;
  for (std::size_t len = lo; len <= hi; ++len) {
    if (len > question_tokens.size()) break;
    for (std::size_t start = 0; start + len <= question_tokens.size(); ++start)
      best = std::max(best, ratio(target, join_tokens(question_tokens, start, start + len)));
  }
  return best;
}

}  // namespace sqlfill::fuzzy
