#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "catprompt/llm/backend.hpp"
#include "json.hpp"

namespace catprompt::llm {

inline constexpr const char* kDefaultRefusal = "As a LLM I cannot perform this task";

/// Prompts of the form `kRewriteRequest + s` are answered from the
/// paraphrase table (one rewrite per line) when `s` has an entry.
inline constexpr std::string_view kRewriteRequest = "List rewrites of the following text, one per line:\n";

/// One pattern/rewrite pair. The pattern is an ECMAScript regex searched in
/// the prompt. The rewrite expands `$0`..`$9` from the match (`$$` is a
/// literal dollar). With `lookup` set, the expanded rewrite is a key into that
/// table and the rule only matches when the key is present.
struct MockRule {
  std::string name;
  std::string pattern;
  std::string rewrite;
  std::optional<std::string> lookup;
};

/// Deterministic stand-in for a model. Rules are tried in order and the
/// first match wins; the refusal text is returned iff no rule matches. A
/// prompt that ends with the EOS token completes to the empty string.
class MockRuleSet {
 public:
  MockRuleSet() = default;

  static MockRuleSet from_json(const nlohmann::json& j);
  static MockRuleSet load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  MockRuleSet& add_rule(MockRule rule);
  MockRuleSet& add_table(const std::string& name, std::map<std::string, std::string> table);
  MockRuleSet& add_paraphrases(const std::string& s, std::vector<std::string> rewrites);
  MockRuleSet& set_refusal(std::string text);
  /// Appends another rule set's rules, tables and paraphrases after ours.
  MockRuleSet& extend(const MockRuleSet& other);

  const std::string& refusal() const noexcept { return refusal_; }
  const std::vector<MockRule>& rules() const noexcept { return rules_; }

  /// The rule-level answer; nullopt when no rule matches.
  std::optional<std::string> match(const std::string& prompt) const;
  std::string respond(const std::string& prompt, const std::string& eos) const;

  std::vector<std::string> paraphrases(const std::string& s) const;

 private:
  struct Compiled {
    MockRule rule;
    std::regex regex;
  };

  std::vector<Compiled> rules_compiled_;
  std::vector<MockRule> rules_;
  std::map<std::string, std::map<std::string, std::string>> tables_;
  std::map<std::string, std::vector<std::string>> paraphrases_;
  std::string refusal_ = kDefaultRefusal;
};

class MockBackend final : public Backend {
 public:
  MockBackend(MockRuleSet rules, BackendConfig config = {});

  const MockRuleSet& rules() const noexcept { return rules_; }
  std::string kind() const override { return "mock"; }

 protected:
  std::string do_complete(const CompletionRequest& request) override;

 private:
  MockRuleSet rules_;
};

}  // namespace catprompt::llm
