#include "catprompt/meta/engine.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "catprompt/error.hpp"

namespace catprompt::meta {

std::string_view to_string(CandidateKind kind) noexcept {
  switch (kind) {
    case CandidateKind::meta: return "meta";
    case CandidateKind::baseline: return "baseline";
    case CandidateKind::task_description: return "task_description";
  }
  return "baseline";
}

CandidateKind candidate_kind_from_string(std::string_view name) {
  if (name == "meta") return CandidateKind::meta;
  if (name == "baseline") return CandidateKind::baseline;
  if (name == "task_description") return CandidateKind::task_description;
  throw Error(Errc::schema, "unknown candidate kind '" + std::string(name) + "'");
}

namespace {

// The task prompt figures minus their closing instruction are the context
// layouts.
text::Template layout_of(std::string_view stem) {
  const std::string& src = builtin_source(stem);
  return text::Template::parse(src.substr(0, src.rfind("\n\n")));
}

}  // namespace

std::string TaskBinding::render_context(const text::SlotValues& values) const {
  for (const auto& [k, _] : values) {
    if (std::find(fields.begin(), fields.end(), k) == fields.end()) {
      throw Error(Errc::schema, "binding '" + name + "' has no field '" + k + "'");
    }
  }
  return context_layout.render(values);
}

TaskBinding TaskBinding::ideation() {
  TaskBinding b;
  b.name = "ideation";
  b.task_description = "a more creative rewrite of the passage in the [Text]";
  b.context_layout = layout_of("ideation_prompt");
  b.fields = {"LEFT", "CONTENT", "RIGHT"};
  b.baselines = {{"Make it more concise", CandidateKind::baseline},
                 {"Make it longer", CandidateKind::baseline},
                 {"Explain this to a 5 year old", CandidateKind::baseline}};
  return b;
}

TaskBinding TaskBinding::creativity() {
  TaskBinding b;
  b.name = "creativity";
  b.task_description = "a linguistically natural transition between the left text and the right text";
  b.context_layout = layout_of("creativity_prompt");
  b.fields = {"LEFT", "RIGHT"};
  b.baselines = {{"Write a paragraph to connect the left text and right texts",
                  CandidateKind::task_description},
                 {"Insert a passage connecting the two passages", CandidateKind::baseline},
                 {"", CandidateKind::task_description}};
  return b;
}

TaskBinding TaskBinding::builtin(std::string_view name) {
  if (name == "ideation") return ideation();
  if (name == "creativity") return creativity();
  throw Error(Errc::config, "unknown task '" + std::string(name) + "' (ideation or creativity)");
}

TaskBinding TaskBinding::with_task(prompt::TaskCategoryPtr t) const {
  if (!t) throw Error(Errc::construction, "binding '" + name + "' needs a task category");
  if (t->description != task_description) {
    throw Error(Errc::construction, "task " + t->name + " is described as \"" + t->description +
                                        "\", binding '" + name + "' as \"" + task_description +
                                        "\"");
  }
  for (const auto& c : baselines) {
    std::string want = command_arrow("_", c.prompt, "_", "_").description.source();
    bool found = std::any_of(t->category->arrows().begin(), t->category->arrows().end(),
                             [&](const prompt::PromptArrow& a) { return a.description.source() == want; });
    if (!found) {
      throw Error(Errc::construction,
                  "baseline \"" + c.prompt + "\" is not an arrow of task " + t->name);
    }
  }
  TaskBinding b = *this;
  b.task = std::move(t);
  return b;
}

std::string apply_command(std::string_view context, std::string_view command) {
  return prompt::tensor_strings(context, command);
}

prompt::PromptArrow command_arrow(std::string label, std::string_view command, std::string dom,
                                  std::string cod) {
  return prompt::make_arrow(std::move(label), prompt::tensor_strings("{X}", text::escape(command)),
                            std::move(dom), std::move(cod));
}

nlohmann::json GeneratedPromptSet::to_json() const {
  return {{"context", context},     {"meta_prompt", meta_prompt},
          {"prompts", prompts},     {"raw", raw},
          {"extra_text", extra_text}, {"seed_recovered", seed_recovered}};
}

GeneratedPromptSet meta_prompt_morphism(const TaskBinding& binding, const text::SlotValues& values,
                                        const MetaPromptTemplate& t, llm::Backend& backend,
                                        const GenerationOptions& options) {
  GeneratedPromptSet out;
  out.context = binding.render_context(values);
  const auto& cfg = backend.config();
  out.meta_prompt = render_meta_prompt(t, binding.task_description, out.context, options.examples,
                                       cfg.budget, cfg.tokenizer, options.max_output_tokens);
  out.raw = backend.complete(
      llm::CompletionRequest{out.meta_prompt, options.max_output_tokens, options.seed});
  ParsedList parsed = parse_numbered_list(out.raw, t.expected_count, t.seed);
  out.prompts = std::move(parsed.items);
  out.extra_text = parsed.extra_text;
  out.seed_recovered = parsed.seed_recovered;
  return out;
}

std::vector<ExecutionResult> execute_prompts(std::string_view context,
                                             const std::vector<std::string>& prompts,
                                             llm::Backend& backend,
                                             const ExecutionOptions& options) {
  std::vector<ExecutionResult> results(prompts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < prompts.size();) {
      auto& r = results[i];
      r.prompt = prompts[i];
      r.rendered = apply_command(context, prompts[i]);
      llm::CompletionRequest req{r.rendered, options.max_output_tokens, options.seed};
      const auto& cfg = backend.config();
      if (auto d = llm::enforce_budget(req, cfg.budget, cfg.tokenizer); !d) {
        r.skipped = true;
        r.error = "over budget: " + std::to_string(d.prompt_tokens) + " + " +
                  std::to_string(d.max_output_tokens) + " > " + std::to_string(d.k);
        continue;
      }
      try {
        r.output = backend.complete(req);
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  std::size_t n = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(prompts.size(), 1));
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work);
  }
  return results;
}

std::vector<ExecutionResult> execute_prompt_set(const GeneratedPromptSet& set, llm::Backend& backend,
                                                const ExecutionOptions& options) {
  return execute_prompts(set.context, set.prompts, backend, options);
}

}  // namespace catprompt::meta
