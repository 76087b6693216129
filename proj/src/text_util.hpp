#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bvdyn::detail {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Splits text into lines of whitespace-separated tokens with 1-based
/// positions. `#` starts a comment; blank lines are dropped.
inline std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> out;
  std::size_t line = 1, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view body = text.substr(pos, end - pos);
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < body.size()) {
      while (i < body.size() && (body[i] == ' ' || body[i] == '\t' || body[i] == '\r')) ++i;
      if (i >= body.size()) break;
      std::size_t j = i;
      while (j < body.size() && body[j] != ' ' && body[j] != '\t' && body[j] != '\r') ++j;
      tokens.push_back(Token{std::string(body.substr(i, j - i)), line, i + 1});
      i = j;
    }
    if (!tokens.empty()) out.push_back(std::move(tokens));
    if (end == text.size()) break;
    pos = end + 1;
    ++line;
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.emplace_back(s.substr(pos));
      return out;
    }
    out.emplace_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace bvdyn::detail
