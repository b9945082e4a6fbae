#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace catprompt::llm {

enum class TokenScheme { whitespace, byte };

/// Desk-scale tokenizer. Only counts matter for budgeting, but segmentation
/// is lossless: `detokenize(tokenize(s)) == s` for every input.
///
/// Under the whitespace scheme each token is a word together with the
/// whitespace that precedes it; trailing whitespace joins the last token.
/// A whitespace-only string is a single token.
struct Tokenizer {
  TokenScheme scheme = TokenScheme::whitespace;
  std::string bos = "<s>";
  std::string eos = "</s>";

  std::vector<std::string> tokenize(std::string_view s) const;
  std::string detokenize(const std::vector<std::string>& tokens) const;
  std::size_t count(std::string_view s) const;
};

}  // namespace catprompt::llm
