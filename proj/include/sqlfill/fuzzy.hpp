#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sqlfill::fuzzy {

/// Insert/delete edit distance (Levenshtein with substitution cost 2), computed
/// through the longest common subsequence.
std::size_t indel_distance(std::string_view a, std::string_view b);

/// Normalized similarity in [0, 100]: 100 * (1 - indel / (|a| + |b|)). Two
/// empty strings score 100. Same scale as the FuzzyWuzzy / rapidfuzz `ratio`.
double ratio(std::string_view a, std::string_view b);

/// Best ratio between `value` and any window of consecutive question tokens
/// whose length is within one word of `value`'s word count. `value` is
/// tokenized the same way as questions before comparison.
double best_window_ratio(std::string_view value, const std::vector<std::string>& question_tokens);

}  // namespace sqlfill::fuzzy
