#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sqlfill::sql::detail {

enum class TokenKind { word, number, string, symbol, mask, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;    // words keep original case; strings are unquoted
  std::size_t offset = 0;
};

/// Splits Spider-dialect SQL into tokens. Raises ErrorKind::grammar on an
/// unterminated string or a character outside the dialect.
std::vector<Token> lex(std::string_view sql);

/// Case-insensitive keyword test on a word token.
bool is_keyword(const Token& tok, std::string_view upper);

}  // namespace sqlfill::sql::detail
