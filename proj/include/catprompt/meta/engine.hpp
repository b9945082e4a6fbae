#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catprompt/llm/backend.hpp"
#include "catprompt/meta/template.hpp"
#include "catprompt/prompt/objects.hpp"
#include "catprompt/prompt/task.hpp"
#include "catprompt/text/template.hpp"
#include "json.hpp"

namespace catprompt::meta {

enum class CandidateKind { meta, baseline, task_description };

std::string_view to_string(CandidateKind kind) noexcept;
/// Throws Error(Errc::schema) on an unknown name.
CandidateKind candidate_kind_from_string(std::string_view name);

struct FixedCandidate {
  std::string prompt;
  CandidateKind kind = CandidateKind::baseline;
};

/// How a task plugs into the meta-prompt: the phrase for the task slot, the
/// layout that turns named fields into a context, and the hard-coded
/// candidates every entry carries.
struct TaskBinding {
  std::string name;
  std::string task_description;
  text::Template context_layout;
  std::vector<std::string> fields;
  std::vector<FixedCandidate> baselines;
  /// Optional. When set, the description and every baseline are checked to
  /// belong to it.
  prompt::TaskCategoryPtr task;

  /// Throws Error(Errc::missing_slot) for a missing field and
  /// Error(Errc::schema) for one the binding does not know.
  std::string render_context(const text::SlotValues& values) const;

  /// Passages with surrounding context; baselines "Make it more concise",
  /// "Make it longer", "Explain this to a 5 year old".
  static TaskBinding ideation();
  /// Left and right passages; the instruction and the empty string count as
  /// task descriptions, "Insert a passage connecting the two passages" as the
  /// baseline.
  static TaskBinding creativity();
  static TaskBinding builtin(std::string_view name);

  /// Throws Error(Errc::construction) unless the task's description matches
  /// and each baseline is one of its arrows (see command_arrow).
  TaskBinding with_task(prompt::TaskCategoryPtr t) const;
};

/// The prompt a command makes on a context: context (x) command.
std::string apply_command(std::string_view context, std::string_view command);

/// The same as an arrow: "{X}" tensored with the escaped command.
prompt::PromptArrow command_arrow(std::string label, std::string_view command, std::string dom,
                                  std::string cod);

struct GenerationOptions {
  std::size_t max_output_tokens = 512;
  std::int64_t seed = 0;
  std::vector<std::string> examples;
};

/// One application of the meta-prompt: the context it saw and the prompts it
/// proposed, all `expected_count` of them, in list order.
struct GeneratedPromptSet {
  std::string context;
  std::string meta_prompt;
  std::vector<std::string> prompts;
  std::string raw;
  bool extra_text = false;
  bool seed_recovered = false;

  nlohmann::json to_json() const;
};

/// Renders the context, fills the meta-prompt with the task description and
/// that context, makes one backend call, and parses the list. Nothing here
/// depends on which task the binding describes.
GeneratedPromptSet meta_prompt_morphism(const TaskBinding& binding, const text::SlotValues& values,
                                        const MetaPromptTemplate& t, llm::Backend& backend,
                                        const GenerationOptions& options = {});

struct ExecutionOptions {
  std::size_t max_output_tokens = 512;
  std::int64_t seed = 0;
  std::size_t jobs = 4;
};

struct ExecutionResult {
  std::string prompt;
  std::string rendered;
  std::optional<std::string> output;
  /// Over budget: not sent.
  bool skipped = false;
  std::string error;

  bool ok() const noexcept { return output.has_value(); }
};

/// One call per prompt on context (x) prompt, up to `jobs` at once. Results
/// follow input order. Over-budget prompts are skipped and other failures are
/// recorded on the item; neither stops the rest.
std::vector<ExecutionResult> execute_prompts(std::string_view context,
                                             const std::vector<std::string>& prompts,
                                             llm::Backend& backend,
                                             const ExecutionOptions& options = {});

std::vector<ExecutionResult> execute_prompt_set(const GeneratedPromptSet& set, llm::Backend& backend,
                                                const ExecutionOptions& options = {});

}  // namespace catprompt::meta
