#include "catprompt/llm/tokenizer.hpp"

#include <cctype>

namespace catprompt::llm {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<std::string> Tokenizer::tokenize(std::string_view s) const {
  std::vector<std::string> tokens;
  if (scheme == TokenScheme::byte) {
    tokens.reserve(s.size());
    for (char c : s) tokens.emplace_back(1, c);
    return tokens;
  }

  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t start = i;
    while (i < s.size() && is_space(s[i])) ++i;
    if (i == s.size()) {
      if (tokens.empty()) {
        tokens.emplace_back(s.substr(start));
      } else {
        tokens.back().append(s.substr(start));
      }
      break;
    }
    while (i < s.size() && !is_space(s[i])) ++i;
    tokens.emplace_back(s.substr(start, i - start));
  }
  return tokens;
}

std::string Tokenizer::detokenize(const std::vector<std::string>& tokens) const {
  std::string out;
  for (const auto& t : tokens) out += t;
  return out;
}

std::size_t Tokenizer::count(std::string_view s) const {
  if (scheme == TokenScheme::byte) return s.size();
  return tokenize(s).size();
}

}  // namespace catprompt::llm
