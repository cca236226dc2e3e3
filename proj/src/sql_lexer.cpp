#include "sql_lexer.hpp"

#include <cctype>

#include "sqlfill/errors.hpp"

namespace sqlfill::sql::detail {

namespace {

bool is_word_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

}  // namespace

std::vector<Token> lex(std::string_view sql) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = sql.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(sql[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (sql.substr(i, 6) == "<mask>") {
      out.push_back({TokenKind::mask, "<mask>", start});
      i += 6;
    } else if (is_word_start(c)) {
      while (i < n && is_word_char(static_cast<unsigned char>(sql[i]))) ++i;
      out.push_back({TokenKind::word, std::string(sql.substr(start, i - start)), start});
    } else if (c == '`') {
      const auto close = sql.find('`', i + 1);
      if (close == std::string_view::npos)
        throw Error(ErrorKind::grammar, "unterminated quoted identifier at offset " + std::to_string(start));
      out.push_back({TokenKind::word, std::string(sql.substr(i + 1, close - i - 1)), start});
      i = close + 1;
    } else if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
      if (i < n && sql[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
      }
      if (i < n && (sql[i] == 'e' || sql[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (sql[j] == '+' || sql[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
        }
      }
      out.push_back({TokenKind::number, std::string(sql.substr(start, i - start)), start});
    } else if (c == '\'' || c == '"') {
      const char quote = static_cast<char>(c);
      std::string text;
      ++i;
      bool closed = false;
      while (i < n) {
        if (sql[i] == quote) {
          if (i + 1 < n && sql[i + 1] == quote) {
            text.push_back(quote);
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        text.push_back(sql[i++]);
      }
      if (!closed) throw Error(ErrorKind::grammar, "unterminated string literal at offset " + std::to_string(start));
      out.push_back({TokenKind::string, std::move(text), start});
    } else {
      static constexpr std::string_view two[] = {"!=", "<>", ">=", "<="};
      bool matched = false;
      for (auto op : two) {
        if (sql.substr(i, 2) == op) {
          out.push_back({TokenKind::symbol, std::string(op), start});
          i += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("=<>+-*/(),.;").find(static_cast<char>(c)) == std::string_view::npos)
        throw Error(ErrorKind::grammar, std::string("unexpected character '") + static_cast<char>(c) +
                                            "' at offset " + std::to_string(start));
      out.push_back({TokenKind::symbol, std::string(1, static_cast<char>(c)), start});
      ++i;
    }
  }
  out.push_back({TokenKind::end, "", n});
  return out;
}

bool is_keyword(const Token& tok, std::string_view upper) {
  if (tok.kind != TokenKind::word || tok.text.size() != upper.size()) return false;
  for (std::size_t i = 0; i < upper.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(tok.text[i])) != upper[i]) return false;
  return true;
}

}  // namespace sqlfill::sql::detail
