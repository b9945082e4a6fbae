#include "catprompt/llm/mock.hpp"

#include <fstream>

#include "catprompt/error.hpp"

namespace catprompt::llm {

namespace {

std::string expand(const std::string& rewrite, const std::smatch& m) {
  std::string out;
  for (std::size_t i = 0; i < rewrite.size(); ++i) {
    char c = rewrite[i];
    if (c == '$' && i + 1 < rewrite.size()) {
      char n = rewrite[i + 1];
      if (n == '$') {
        out.push_back('$');
        ++i;
        continue;
      }
      if (n >= '0' && n <= '9') {
        auto group = static_cast<std::size_t>(n - '0');
        if (group < m.size()) out += m[group].str();
        ++i;
        continue;
      }
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

MockRuleSet& MockRuleSet::add_rule(MockRule rule) {
  std::regex re;
  try {
    re = std::regex(rule.pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw Error(Errc::schema, "mock rule '" + rule.name + "' has a bad pattern: " + e.what());
  }
  rules_.push_back(rule);
  rules_compiled_.push_back({std::move(rule), std::move(re)});
  return *this;
}

MockRuleSet& MockRuleSet::add_table(const std::string& name,
                                    std::map<std::string, std::string> table) {
  tables_[name] = std::move(table);
  return *this;
}

MockRuleSet& MockRuleSet::add_paraphrases(const std::string& s, std::vector<std::string> rewrites) {
  paraphrases_[s] = std::move(rewrites);
  return *this;
}

MockRuleSet& MockRuleSet::set_refusal(std::string text) {
  refusal_ = std::move(text);
  return *this;
}

MockRuleSet& MockRuleSet::extend(const MockRuleSet& other) {
  for (const auto& r : other.rules_) add_rule(r);
  for (const auto& [name, table] : other.tables_) tables_[name].insert(table.begin(), table.end());
  for (const auto& [s, p] : other.paraphrases_) paraphrases_[s] = p;
  return *this;
}

std::optional<std::string> MockRuleSet::match(const std::string& prompt) const {
  for (const auto& c : rules_compiled_) {
    std::smatch m;
    if (!std::regex_search(prompt, m, c.regex)) continue;
    std::string value = expand(c.rule.rewrite, m);
    if (!c.rule.lookup) return value;
    auto table = tables_.find(*c.rule.lookup);
    if (table == tables_.end()) {
      throw Error(Errc::schema,
                  "mock rule '" + c.rule.name + "' refers to unknown table '" + *c.rule.lookup + "'");
    }
    auto hit = table->second.find(value);
    if (hit != table->second.end()) return hit->second;
  }
  return std::nullopt;
}

std::string MockRuleSet::respond(const std::string& prompt, const std::string& eos) const {
  if (!eos.empty() && prompt.ends_with(eos)) return {};
  if (prompt.starts_with(kRewriteRequest)) {
    auto it = paraphrases_.find(prompt.substr(kRewriteRequest.size()));
    if (it != paraphrases_.end()) {
      std::string out;
      for (const auto& p : it->second) {
        if (!out.empty()) out += '\n';
        out += p;
      }
      return out;
    }
  }
  return match(prompt).value_or(refusal_);
}

std::vector<std::string> MockRuleSet::paraphrases(const std::string& s) const {
  auto it = paraphrases_.find(s);
  return it == paraphrases_.end() ? std::vector<std::string>{} : it->second;
}

MockRuleSet MockRuleSet::from_json(const nlohmann::json& j) {
  try {
    MockRuleSet set;
    if (j.contains("refusal")) set.refusal_ = j.at("refusal").get<std::string>();
    // value() returns a temporary; items() must not outlive it.
    const nlohmann::json tables = j.value("tables", nlohmann::json::object());
    const nlohmann::json paraphrases = j.value("paraphrases", nlohmann::json::object());
    const nlohmann::json rules = j.value("rules", nlohmann::json::array());
    for (const auto& [name, table] : tables.items()) {
      set.add_table(name, table.get<std::map<std::string, std::string>>());
    }
    for (const auto& [s, p] : paraphrases.items()) {
      set.add_paraphrases(s, p.get<std::vector<std::string>>());
    }
    for (const auto& r : rules) {
      for (const auto& [key, _] : r.items()) {
        if (key != "name" && key != "pattern" && key != "rewrite" && key != "lookup") {
          throw Error(Errc::schema, "mock rule set: unknown rule key '" + key + "'");
        }
      }
      MockRule rule;
      rule.name = r.value("name", std::string());
      rule.pattern = r.at("pattern").get<std::string>();
      rule.rewrite = r.value("rewrite", std::string("$0"));
      if (r.contains("lookup")) rule.lookup = r.at("lookup").get<std::string>();
      set.add_rule(std::move(rule));
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema, std::string("mock rule set: ") + e.what());
  }
}

MockRuleSet MockRuleSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot read mock rules '" + path.string() + "'");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::schema, path.string() + ": " + e.what());
  }
}

nlohmann::json MockRuleSet::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["refusal"] = refusal_;
  j["tables"] = tables_;
  j["paraphrases"] = paraphrases_;
  j["rules"] = nlohmann::json::array();
  for (const auto& r : rules_) {
    nlohmann::json rj{{"name", r.name}, {"pattern", r.pattern}, {"rewrite", r.rewrite}};
    if (r.lookup) rj["lookup"] = *r.lookup;
    j["rules"].push_back(std::move(rj));
  }
  return j;
}

MockBackend::MockBackend(MockRuleSet rules, BackendConfig config)
    : Backend(std::move(config)), rules_(std::move(rules)) {}

std::string MockBackend::do_complete(const CompletionRequest& request) {
  const Tokenizer& tok = config().tokenizer;
  std::string out = rules_.respond(request.prompt, tok.eos);
  auto tokens = tok.tokenize(out);
  if (tokens.size() > request.max_output_tokens) {
    tokens.resize(request.max_output_tokens);
    out = tok.detokenize(tokens);
  }
  return out;
}

}  // namespace catprompt::llm
