#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catprompt/cat/presentation.hpp"
#include "catprompt/llm/backend.hpp"
#include "catprompt/llm/mock.hpp"
#include "catprompt/prompt/category.hpp"
#include "catprompt/prompt/rewrite.hpp"
#include "catprompt/prompt/task.hpp"
#include "json.hpp"

namespace catprompt::prompt {

// Fixture files are JSON documents with a "kind" field:
//
//   category / task:
//     name, description (task only), budget {k}, tokenizer ("whitespace" |
//     "byte"), max_output_tokens, seed, mock (inline rule set or a path),
//     objects [{label, witnesses, membership {kind, members, description}}],
//     arrows [{label, template, dom, cod}], relations [{lhs, rhs}],
//     functors [...], transformations [...] (endofunctors of this category)
//   duality:
//     source, target (inline task or path), reverse {desc: desc},
//     back {desc: desc} (optional), inversion_template (optional)
//   lemma1:
//     task1, task2 (inline task or path), rewrites (inline table or path)
//
// Relative paths resolve against the directory of the file that names them.

struct Fixture {
  std::string kind;
  nlohmann::json doc;
  std::filesystem::path base_dir;
};

/// Throws Error(Errc::io) or Error(Errc::schema).
Fixture load_fixture(const std::filesystem::path& path);

/// Resolves a value that is either inline JSON or a relative path to a file.
nlohmann::json resolve(const nlohmann::json& value, const std::filesystem::path& base_dir,
                       std::filesystem::path* resolved_dir = nullptr);

llm::BackendConfig backend_config_from_json(const nlohmann::json& doc);
llm::MockRuleSet mock_rules_from_fixture(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir);

/// The backend a fixture describes: a mock over its rule set.
llm::BackendPtr fixture_backend(const nlohmann::json& doc, const std::filesystem::path& base_dir);

CategoryOptions category_options_from_json(const nlohmann::json& doc);
std::vector<StrObject> objects_from_json(const nlohmann::json& doc);
std::vector<PromptArrow> arrows_from_json(const nlohmann::json& doc);
std::vector<RelationSpec> relations_from_json(const nlohmann::json& doc);

/// With `backend` null the fixture's own mock backend is used.
PromptCategoryPtr load_category(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                                llm::BackendPtr backend = nullptr);
TaskCategoryPtr load_task(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                          llm::BackendPtr backend = nullptr, const TaskOptions& options = {});

struct CategoryFixture {
  PromptCategoryPtr category;
  std::vector<cat::FunctorDef> functors;
  std::vector<cat::NatTransDef> transformations;
};

CategoryFixture load_category_fixture(const Fixture& fixture, llm::BackendPtr backend = nullptr);

struct DualityFixture {
  TaskCategoryPtr source;
  TaskCategoryPtr target;
  std::map<std::string, std::string> reverse;
  std::map<std::string, std::string> back;
  std::string inversion_template;
};

DualityFixture load_duality_fixture(const Fixture& fixture, llm::BackendPtr backend = nullptr);

struct Lemma1Fixture {
  TaskCategoryPtr task1;
  TaskCategoryPtr task2;
  RewriteTable rewrites;
};

Lemma1Fixture load_lemma1_fixture(const Fixture& fixture, llm::BackendPtr backend = nullptr);

}  // namespace catprompt::prompt
