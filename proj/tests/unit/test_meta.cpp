#include "catprompt/llm/mock.hpp"
#include "catprompt/meta/engine.hpp"
#include "catprompt/meta/template.hpp"
#include "catprompt/prompt/fixture.hpp"
#include "doctest.h"
#include "figures.hpp"
#include "helpers.hpp"

using namespace catprompt;
using namespace catprompt::meta;
using testing::error_of;
using namespace testing;

namespace {

const std::string kLeft = "The storm had passed by noon.";
const std::string kContent = "Mara walked down to the harbor to count the broken boats.";
const std::string kRight = "By evening the village was already rebuilding.";

std::shared_ptr<llm::MockBackend> pipeline_backend(std::size_t k = 4096) {
  llm::BackendConfig c;
  c.budget.k = k;
  return std::make_shared<llm::MockBackend>(llm::MockRuleSet::load(testing::data_dir() / "mock" / "pipeline.json"), c);
}

}  // namespace

TEST_CASE("shipped templates are the figures byte for byte") {
  CHECK(builtin_source("meta_prompt_short") == kFig1);
  CHECK(builtin_source("creativity_prompt") == kFig6);
  CHECK(builtin_source("ideation_prompt") == kFig7);
  CHECK(builtin_source("meta_prompt_full") == kFig8);
}

TEST_CASE("full meta-prompt with the ideation description and a context") {
  auto t = MetaPromptTemplate::builtin("full");
  CHECK(t.expected_count == 5);
  CHECK(t.marker == ListMarker::paren);
  CHECK(t.seed == "1)");
  CHECK_FALSE(t.examples_slot.has_value());

  auto binding = TaskBinding::ideation();
  auto context = binding.render_context({{"LEFT", kLeft}, {"CONTENT", kContent}, {"RIGHT", kRight}});
  std::string want = replace_all(replace_all(kFig8, "{CONTENT}", context), "{TASK}",
                                 "a more creative rewrite of the passage in the [Text]");
  CHECK(render_meta_prompt(t, binding.task_description, context) == want);
  CHECK(error_of([&] { render_meta_prompt(t, "x", "y", {"an example"}); }) == Errc::missing_slot);
}

TEST_CASE("short meta-prompt with examples") {
  auto t = MetaPromptTemplate::builtin("short");
  CHECK(t.marker == ListMarker::dot);
  CHECK(t.seed == "1. ");
  std::string want = replace_all(kFig1, "{CONTEXT GOES HERE}", "some context");
  want = replace_all(want, "{TASK DESCRIPTION \nGOES HERE}", "the story ends well");
  want = replace_all(want, "{EXAMPLES GO HERE}", "Talk more about birds.\n2. Add a closing sentence.");
  CHECK(render_meta_prompt(t, "the story ends well", "some context",
                           {"Talk more about birds.", "Add a closing sentence."}) == want);
}

TEST_CASE("short meta-prompt without examples drops that paragraph") {
  auto t = MetaPromptTemplate::builtin("short");
  std::string want =
      "# Input:\n"
      "ctx\n"
      "\n"
      "# System\n"
      "You are teacher talking to a student. Propose five \n"
      "user commands such that it rhymes.\n"
      "\n"
      "# Instructions\n"
      "- Write the commands in one sentence\n"
      "- The commands should be short and concise\n"
      "- Write five independent commands\n"
      "\n"
      "# Commands:\n"
      "1. ";
  CHECK(render_meta_prompt(t, "it rhymes", "ctx") == want);
}

TEST_CASE("context layouts follow the task prompts") {
  auto idea = TaskBinding::ideation();
  CHECK(idea.render_context({{"LEFT", "L"}, {"CONTENT", "C"}, {"RIGHT", "R"}}) ==
        "# Input text:\n[previous context]:\nL\n[Text]:\nC\n# [following context]:\nR");
  auto creat = TaskBinding::creativity();
  CHECK(creat.render_context({{"LEFT", "L"}, {"RIGHT", "R"}}) == "# Input text:\n[Left Text] \nL\n[Right Text]\nR");
  CHECK(creat.render_context({{"LEFT", "L"}, {"RIGHT", ""}}) == "# Input text:\n[Left Text] \nL\n[Right Text]\n");
  CHECK(error_of([&] { creat.render_context({{"LEFT", "L"}}); }) == Errc::missing_slot);
  CHECK(error_of([&] { creat.render_context({{"LEFT", "L"}, {"RIGHT", "R"}, {"CONTENT", "C"}}); }) ==
        Errc::schema);
}

TEST_CASE("task prompts render with slot values") {
  std::string want =
      "# Input text:\n[Left Text] \nOnce upon a time.\n[Right Text]\nThe end.\n\n"
      "Write a paragraph to connect the left text and right\ntext.";
  CHECK(text::Template::parse(builtin_source("creativity_prompt"))
            .render({{"LEFT", "Once upon a time."}, {"RIGHT", "The end."}}) == want);
  CHECK(text::Template::parse(builtin_source("ideation_prompt"))
            .render({{"LEFT", "a"}, {"CONTENT", "b"}, {"RIGHT", "c"}}) ==
        "# Input text:\n[previous context]:\na\n[Text]:\nb\n# [following context]:\nc\n\n"
        "Rewrite the passage in the [text] in a more creative\nway.");
}

TEST_CASE("different contexts give different meta-prompts") {
  auto t = MetaPromptTemplate::builtin("full");
  CHECK(render_meta_prompt(t, "task", "context one") != render_meta_prompt(t, "task", "context two"));
  CHECK(render_meta_prompt(t, "task one", "ctx") != render_meta_prompt(t, "task two", "ctx"));
}

TEST_CASE("budgeted rendering") {
  auto t = MetaPromptTemplate::builtin("full");
  llm::Tokenizer tok;
  auto plain = render_meta_prompt(t, "task", "ctx");
  std::size_t n = tok.count(plain);
  CHECK(render_meta_prompt(t, "task", "ctx", {}, llm::TokenBudget{n + 10}, tok, 10) == plain);
  CHECK(error_of([&] { render_meta_prompt(t, "task", "ctx", {}, llm::TokenBudget{n + 9}, tok, 10); }) ==
        Errc::budget_exceeded);
}

TEST_CASE("custom meta-prompt templates need every role") {
  auto t = MetaPromptTemplate::from_source("mine", "Context: {CONTEXT}\nGoal: {TASK}\n1.");
  CHECK(t.context_slot == "CONTEXT");
  CHECK(t.task_slot == "TASK");
  CHECK(t.marker == ListMarker::dot);
  CHECK(error_of([] { MetaPromptTemplate::from_source("m", "only {CONTEXT}"); }) == Errc::parse);
  CHECK(error_of([] { MetaPromptTemplate::from_source("m", "{CONTEXT} {TASK} {TASK}"); }) == Errc::parse);
  CHECK(error_of([] { MetaPromptTemplate::from_source("m", "{CONTEXT} {TASK}", 0); }) == Errc::parse);
  CHECK(error_of([] { MetaPromptTemplate::builtin("medium"); }) == Errc::not_found);
}

TEST_CASE("numbered list parsing") {
  auto p = parse_numbered_list(
      "1) Talk more about birds.\n2) Add a closing sentence.\n3) Name the river.\n4) Slow the ending.\n"
      "5) Open with the weather.",
      5);
  CHECK(p.items == std::vector<std::string>{"Talk more about birds.", "Add a closing sentence.",
                                            "Name the river.", "Slow the ending.", "Open with the weather."});
  CHECK_FALSE(p.extra_text);
  CHECK_FALSE(p.seed_recovered);
}

TEST_CASE("a completion that continues the seed recovers the first item") {
  auto p = parse_numbered_list(" Talk more about birds.\n2) b\n3) c\n4) d\n5) e", 5, "1)");
  CHECK(p.seed_recovered);
  CHECK(p.items.front() == "Talk more about birds.");
  CHECK(p.items.size() == 5);
}

TEST_CASE("list parsing edge cases") {
  SUBCASE("empty completion") {
    try {
      parse_numbered_list("", 5);
      FAIL("expected a parse error");
    } catch (const ListParseError& e) {
      CHECK(e.code() == Errc::parse);
      CHECK(e.partial().empty());
    }
  }
  SUBCASE("too few items keep the partial list") {
    try {
      parse_numbered_list("1. a\n2. b\n3. c", 5);
      FAIL("expected a parse error");
    } catch (const ListParseError& e) {
      CHECK(e.partial() == std::vector<std::string>{"a", "b", "c"});
    }
  }
  SUBCASE("preamble and trailing text are flagged") {
    auto p = parse_numbered_list("Sure! Here you go:\n1. a\n2. b\n\nHope this helps.", 2);
    CHECK(p.items == std::vector<std::string>{"a", "b"});
    CHECK(p.extra_text);
  }
  SUBCASE("items past the expected count are extra") {
    auto p = parse_numbered_list("1) a\n2) b\n3) c", 2);
    CHECK(p.items == std::vector<std::string>{"a", "b"});
    CHECK(p.extra_text);
  }
  SUBCASE("wrapped items are joined, including the last one") {
    auto p = parse_numbered_list("1) Add a connecting sentence\nto the end.\n2) Make the transition\nsmooth.", 2);
    CHECK(p.items == std::vector<std::string>{"Add a connecting sentence to the end.", "Make the transition smooth."});
    CHECK_FALSE(p.extra_text);
  }
  SUBCASE("refusal is not a list") {
    CHECK(error_of([] { parse_numbered_list(llm::kDefaultRefusal, 5); }) == Errc::parse);
  }
}

TEST_CASE("format and parse are inverse") {
  std::vector<std::string> items{"one", "two words", "three (with) 4. dots"};
  for (auto marker : {ListMarker::paren, ListMarker::dot}) {
    auto text = format_numbered_list(items, marker);
    CHECK(parse_numbered_list(text, items.size()).items == items);
  }
  CHECK(format_numbered_list({"a", "b"}) == "1) a\n2) b");
  CHECK(format_numbered_list({"a", "b"}, ListMarker::dot) == "1. a\n2. b");
}

TEST_CASE("meta-prompt morphism on the ideation task") {
  auto backend = pipeline_backend();
  auto t = MetaPromptTemplate::builtin("full");
  auto set = meta_prompt_morphism(TaskBinding::ideation(),
                                  {{"LEFT", kLeft}, {"CONTENT", kContent}, {"RIGHT", kRight}}, t, *backend);
  CHECK(set.prompts.size() == 5);
  CHECK(set.seed_recovered);
  CHECK(set.meta_prompt.ends_with("Begin response\n1)"));
  CHECK(set.meta_prompt.starts_with(set.context));
  // The mock quotes the [Text] sentence without its final period.
  CHECK(set.prompts[0] == "Talk more about the moment where \"Mara walked down to the harbor to count the broken boats\" happens.");
  for (const auto& p : set.prompts) CHECK_FALSE(p.empty());
}

TEST_CASE("the same morphism works unchanged for the creativity task and both templates") {
  auto backend = pipeline_backend();
  for (const char* name : {"full", "short"}) {
    auto t = MetaPromptTemplate::builtin(name);
    auto set = meta_prompt_morphism(TaskBinding::creativity(), {{"LEFT", kLeft}, {"RIGHT", kRight}}, t, *backend);
    CHECK(set.prompts.size() == 5);
    CHECK(set.prompts[0] == "Describe what happens right after \"The storm had passed by noon\".");
    auto idea = meta_prompt_morphism(TaskBinding::ideation(),
                                     {{"LEFT", kLeft}, {"CONTENT", kContent}, {"RIGHT", kRight}}, t, *backend);
    CHECK(idea.prompts.size() == 5);
  }
}

TEST_CASE("creativity with an empty right passage") {
  auto backend = pipeline_backend();
  auto set = meta_prompt_morphism(TaskBinding::creativity(), {{"LEFT", kLeft}, {"RIGHT", ""}},
                                  MetaPromptTemplate::builtin("full"), *backend);
  CHECK(set.context == "# Input text:\n[Left Text] \n" + kLeft + "\n[Right Text]\n");
  CHECK(set.prompts.size() == 5);
}

TEST_CASE("a refusal surfaces as a parse error") {
  llm::MockBackend silent(llm::MockRuleSet{});
  CHECK(error_of([&] {
          meta_prompt_morphism(TaskBinding::ideation(), {{"LEFT", "a"}, {"CONTENT", "b"}, {"RIGHT", "c"}},
                               MetaPromptTemplate::builtin("full"), silent);
        }) == Errc::parse);
}

TEST_CASE("commands apply to the context by tensor") {
  CHECK(apply_command("ctx", "Make it longer") == "ctx\nMake it longer");
  CHECK(apply_command("ctx", "") == "ctx");
  auto a = command_arrow("b1", "Use {braces}", "Passage", "Passage");
  CHECK(a.description.source() == "{X}\nUse {{braces}}");
  CHECK(a.render("ctx") == "ctx\nUse {braces}");
  CHECK(command_arrow("t2", "", "P", "P").description.source() == "{X}");
}

TEST_CASE("execution keeps order and skips over-budget prompts") {
  llm::MockRuleSet rules;
  rules.add_rule({"last line", R"(\n([^\n]*)$)", "did: $1", std::nullopt});
  llm::BackendConfig c;
  c.budget.k = 40;
  llm::MockBackend backend(rules, c);
  std::string huge;
  for (int i = 0; i < 60; ++i) huge += "word ";
  std::vector<std::string> prompts{"first", "second", huge, "fourth", "fifth"};
  ExecutionOptions o;
  o.max_output_tokens = 8;
  o.jobs = 3;
  auto results = execute_prompts("ctx", prompts, backend, o);
  REQUIRE(results.size() == 5);
  std::size_t ok = 0;
  for (const auto& r : results) ok += r.ok() ? 1 : 0;
  CHECK(ok == 4);
  CHECK(results[2].skipped);
  CHECK_FALSE(results[2].output.has_value());
  CHECK(results[0].output == std::optional<std::string>("did: first"));
  CHECK(results[4].output == std::optional<std::string>("did: fifth"));
  CHECK(results[1].rendered == "ctx\nsecond");
  CHECK(execute_prompts("ctx", {}, backend, o).empty());
}

TEST_CASE("other failures are recorded per item") {
  llm::MockBackend backend(llm::MockRuleSet{});
  // An empty command on an empty context is an empty prompt.
  auto results = execute_prompts("", {"", "x"}, backend);
  REQUIRE(results.size() == 2);
  CHECK_FALSE(results[0].ok());
  CHECK_FALSE(results[0].skipped);
  CHECK_FALSE(results[0].error.empty());
  CHECK(results[1].ok());
}

TEST_CASE("bindings can be checked against task categories") {
  auto idea = prompt::load_fixture(testing::fixture("idea.json"));
  auto task = prompt::load_task(idea.doc, idea.base_dir);
  auto bound = TaskBinding::ideation().with_task(task);
  CHECK(bound.task == task);
  CHECK(error_of([&] { TaskBinding::creativity().with_task(task); }) == Errc::construction);
  CHECK(error_of([&] { TaskBinding::ideation().with_task(nullptr); }) == Errc::construction);

  auto creat = prompt::load_fixture(testing::fixture("creat.json"));
  CHECK(TaskBinding::creativity().with_task(prompt::load_task(creat.doc, creat.base_dir)).task != nullptr);
}

TEST_CASE("candidate kinds have names") {
  CHECK(to_string(CandidateKind::task_description) == "task_description");
  CHECK(candidate_kind_from_string("meta") == CandidateKind::meta);
  CHECK(error_of([] { candidate_kind_from_string("other"); }) == Errc::schema);
}
