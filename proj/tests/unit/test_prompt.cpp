#include "catprompt/llm/mock.hpp"
#include "catprompt/prompt/category.hpp"
#include "catprompt/prompt/fixture.hpp"
#include "catprompt/prompt/objects.hpp"
#include "catprompt/prompt/rewrite.hpp"
#include "catprompt/prompt/task.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace catprompt;
using namespace catprompt::prompt;
using testing::error_of;

namespace {

const std::string kHarbor = "The harbor flooded at dawn and the fishermen dragged their boats up the shingle.";
const std::string kOrchard = "Mara inherited an orchard of leaning trees and spent the summer learning to graft.";
const std::string kHarborSummary = "A dawn flood drove the fishermen inland.";
const std::string kOrchardSummary = "Mara learned to tend an inherited orchard.";
const std::string kSummarize = "Summarize {X}";
const std::string kGist = "Give me the gist of {X}";
const std::string kExpand = "Write a passage using the following: {X}";

llm::BackendPtr text_backend(std::size_t k = 256) {
  llm::BackendConfig c;
  c.budget.k = k;
  return std::make_shared<llm::MockBackend>(llm::MockRuleSet::load(testing::fixture("mock_text.json")), c);
}

CategoryOptions small_output() {
  CategoryOptions o;
  o.max_output_tokens = 64;
  return o;
}

Membership listed() { return {Membership::Kind::allow_list, {}, ""}; }

std::vector<StrObject> summ_objects() {
  return {make_object("Passage", {kHarbor, kOrchard}, listed()),
          make_object("Summary", {kHarborSummary, kOrchardSummary}, listed())};
}

TaskCategoryPtr summ_task(llm::BackendPtr b = text_backend()) {
  TaskOptions o;
  o.category = small_output();
  return make_task_category("Summ", kSummarize, summ_objects(),
                            {make_arrow("summarize", kSummarize, "Passage", "Summary")}, {}, b, o);
}

TaskCategoryPtr expand_task(llm::BackendPtr b = text_backend()) {
  TaskOptions o;
  o.category = small_output();
  return make_task_category("Expand", kExpand, summ_objects(),
                            {make_arrow("expand", kExpand, "Summary", "Passage")}, {}, b, o);
}

RewriteTable summ_expand_rewrites() {
  RewriteTable t;
  t.add(kSummarize, {kGist, kExpand});
  t.add(kGist, {kSummarize, kExpand});
  t.add(kExpand, {kSummarize});
  return t;
}

}  // namespace

TEST_CASE("tensor is newline-joined concatenation with the empty string as unit") {
  CHECK(tensor_strings("a", "b") == "a\nb");
  CHECK(tensor_strings("", "b") == "b");
  CHECK(tensor_strings("a", "") == "a");
  CHECK(tensor_strings("", "") == "");
  CHECK(tensor_strings(tensor_strings("a", "b"), "c") == tensor_strings("a", tensor_strings("b", "c")));
}

TEST_CASE("budgeted tensor refuses oversized results") {
  llm::Tokenizer tok;
  CHECK(tensor_strings("a b", "c", llm::TokenBudget{3}, tok) == "a b\nc");
  CHECK(error_of([&] { tensor_strings("a b", "c d", llm::TokenBudget{3}, tok); }) == Errc::budget_exceeded);
}

TEST_CASE("objects deduplicate witnesses and admit them") {
  auto o = make_object("O", {"a", "b", "a"}, listed());
  CHECK(o.witnesses == std::vector<std::string>{"a", "b"});
  CHECK(o.membership.contains("a"));
  CHECK_FALSE(o.membership.contains("c"));

  Membership any;
  CHECK(any.contains("whatever"));
  Membership ex{Membership::Kind::exclude_list, {"bad"}, ""};
  CHECK(ex.contains("good"));
  CHECK_FALSE(ex.contains("bad"));
}

TEST_CASE("arrows need exactly one slot used once") {
  auto a = make_arrow("s", kSummarize, "Passage", "Summary");
  CHECK(a.slot == "X");
  CHECK(a.render("this") == "Summarize this");
  CHECK(a.render("{braces}") == "Summarize {braces}");
  CHECK(error_of([] { make_arrow("z", "no slot", "A", "B"); }) == Errc::construction);
  CHECK(error_of([] { make_arrow("two", "{X} and {Y}", "A", "B"); }) == Errc::construction);
  CHECK(error_of([] { make_arrow("twice", "{X} and {X}", "A", "B"); }) == Errc::construction);
}

TEST_CASE("arrow tensor acts slot-wise") {
  auto p = make_arrow("s", kSummarize, "Passage", "Summary");
  auto q = make_arrow("e", kExpand, "Summary", "Passage");
  auto t = tensor_arrows(p, q);
  CHECK(t.description.source() == "Summarize {L}\nWrite a passage using the following: {R}");
  CHECK(error_of([&] { tensor_arrows(p, q, llm::TokenBudget{4}, llm::Tokenizer{}); }) == Errc::budget_exceeded);
}

TEST_CASE("summarize example category") {
  auto cat = PromptCategory::make("Summ", summ_objects(),
                                  {make_arrow("summarize", kSummarize, "Passage", "Summary")}, {},
                                  text_backend(), small_output());
  CHECK(cat->apply(cat->arrow("summarize"), kHarbor) == kHarborSummary);
  CHECK(cat->apply(cat->arrow("summarize"), kOrchard) == kOrchardSummary);
  CHECK(cat->apply_identity(kHarbor) == kHarbor);
  CHECK(cat->all_witnesses().size() == 4);
  auto r = cat->check_laws();
  CHECK(r.passed());
  CHECK(r.failures() == 0);
}

TEST_CASE("an object with no arrows still satisfies the laws") {
  auto cat = PromptCategory::make("Bare", {make_object("A", {"x", "y z"})}, {}, {}, text_backend(),
                                  small_output());
  auto r = cat->check_laws();
  CHECK(r.passed());
  CHECK_FALSE(r.instances.empty());
}

TEST_CASE("construction enforces the token budget") {
  CHECK(error_of([] {
          PromptCategory::make("Tiny", {make_object("A", {"one two three four five"})}, {}, {}, text_backend(4));
        }) == Errc::construction);
  // Witness fits, but prompt plus output does not.
  CHECK(error_of([] {
          PromptCategory::make("Tight", {make_object("A", {"x"}), make_object("B", {"y"})},
                               {make_arrow("f", kSummarize, "A", "B")}, {}, text_backend(10));
        }) == Errc::construction);
  CHECK(error_of([] { PromptCategory::make("NoBackend", {}, {}, {}, nullptr); }) == Errc::construction);
}

TEST_CASE("task categories check that outputs land in the codomain") {
  auto t = summ_task();
  CHECK(t->name == "Summ");
  CHECK(t->description == kSummarize);
  CHECK(cat::check_functor_laws(t->inclusion, t->category->semantics()).passed());

  TaskOptions o;
  o.category = small_output();
  auto msg = testing::message_of([&] {
    make_task_category("Bad", kSummarize, summ_objects(),
                       {make_arrow("triple", "Multiply {X} by 3", "Passage", "Summary")}, {},
                       text_backend(), o);
  });
  CHECK(msg.find("triple") != std::string::npos);
  CHECK(msg.find(kHarbor) != std::string::npos);
  CHECK(error_of([&] {
          make_task_category("Bad", kSummarize, summ_objects(),
                             {make_arrow("triple", "Multiply {X} by 3", "Passage", "Summary")}, {},
                             text_backend(), o);
        }) == Errc::task_membership);
}

TEST_CASE("a task inside an ambient category must match it") {
  auto ambient = PromptCategory::make("Ambient", summ_objects(),
                                      {make_arrow("summarize", kSummarize, "Passage", "Summary")}, {},
                                      text_backend(), small_output());
  TaskOptions o;
  o.category = small_output();
  auto inside = make_task_category("Summ", kSummarize, summ_objects(),
                                   {make_arrow("summarize", kSummarize, "Passage", "Summary")}, {},
                                   text_backend(), o, ambient.get());
  CHECK(inside->inclusion.target.get() == &ambient->presentation());
  CHECK(cat::check_functor_laws(inside->inclusion, ambient->semantics()).passed());

  CHECK(error_of([&] {
          make_task_category("Other", kExpand, summ_objects(),
                             {make_arrow("expand", kExpand, "Summary", "Passage")}, {}, text_backend(), o,
                             ambient.get());
        }) == Errc::construction);
}

TEST_CASE("summarize and expand are dual") {
  auto s = summ_task();
  auto e = expand_task();
  auto d = build_duality_functor(*s, *e, {{kSummarize, kExpand}});
  CHECK(d.functor.variance == cat::Variance::contravariant);
  CHECK(d.functor.map_arrow("summarize").arrows == std::vector<std::string>{"expand"});
  CHECK(d.functor.object_map.at("Summary") == "Summary");
  CHECK(d.functor.object_map.at("Passage") == "Passage");
  CHECK(d.instructions.at("summarize") ==
        "instead of Summarize {X}, do Write a passage using the following: {X}");
  CHECK(cat::check_functor_laws(d.functor, e->category->semantics()).passed());

  auto back = build_duality_functor(*e, *s, {{kExpand, kSummarize}});
  CHECK(check_duality_roundtrip(d.functor, back.functor).passed());
}

TEST_CASE("a missing reverse is reported") {
  auto s = summ_task();
  auto e = expand_task();
  CHECK(error_of([&] { build_duality_functor(*s, *e, {}); }) == Errc::missing_dual);
  CHECK(error_of([&] { build_duality_functor(*s, *e, {{kSummarize, "Shorten {X}"}}); }) == Errc::missing_dual);
  CHECK(error_of([&] { build_duality_functor(*s, *e, {{kSummarize, kExpand}}, "only {F}"); }) ==
        Errc::construction);
}

TEST_CASE("a task maps trivially onto itself") {
  auto s = summ_task();
  auto d = build_duality_functor(*s, *s, {{kSummarize, kSummarize}}, kInversionTemplate, cat::Variance::covariant);
  CHECK(d.functor.map_arrow("summarize").arrows == std::vector<std::string>{"summarize"});
  CHECK(cat::check_functor_laws(d.functor, s->category->semantics()).passed());
  CHECK(check_duality_roundtrip(d.functor, d.functor).passed());
}

TEST_CASE("rewrite hom starts with the string itself") {
  RewriteTable t = summ_expand_rewrites();
  CHECK(rewrite_hom(t, "unlisted") == std::vector<std::string>{"unlisted"});
  CHECK(rewrite_hom(t, kSummarize) == std::vector<std::string>{kSummarize, kGist, kExpand});
  RewriteTable self;
  self.add("a", {"a", "b", "b"});
  CHECK(rewrite_hom(self, "a") == std::vector<std::string>{"a", "b"});
  RewriteProposer extra = [](const std::string&) { return std::vector<std::string>{"c", "a"}; };
  CHECK(rewrite_hom(self, "a", extra) == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("rewrite tables round trip through JSON") {
  auto t = summ_expand_rewrites();
  CHECK(RewriteTable::from_json(t.to_json()).entries == t.entries);
  CHECK(error_of([] { RewriteTable::from_json(nlohmann::json{{"rewrites", 3}}); }) == Errc::schema);
}

TEST_CASE("backend proposer reads the paraphrase lines") {
  auto p = backend_proposer(text_backend(), 64);
  auto got = p(kSummarize);
  CHECK(std::find(got.begin(), got.end(), kGist) != got.end());
  for (const auto& g : got) CHECK_FALSE(g.empty());
}

TEST_CASE("lemma: identity case needs no table") {
  auto s = summ_task();
  auto r = check_lemma1(*s, *s, {});
  CHECK(r.hypothesis_holds);
  CHECK(r.ok());
  CHECK(r.pairs_checked == 1);
  REQUIRE(r.functor.has_value());
  CHECK(r.functor->map_arrow("summarize").arrows == std::vector<std::string>{"summarize"});
}

TEST_CASE("lemma: summarize and expand are connected by rewrites") {
  auto t = summ_expand_rewrites();
  auto r = check_lemma1(*summ_task(), *expand_task(), t);
  CHECK(r.ok());
  // Every rewrite of one description against every rewrite of the other.
  CHECK(r.pairs_checked == rewrite_hom(t, kSummarize).size() * rewrite_hom(t, kExpand).size());
  REQUIRE(r.functor.has_value());
  CHECK(r.functor->map_arrow("summarize").arrows == std::vector<std::string>{"expand"});
  CHECK(r.laws.passed());
}

TEST_CASE("lemma: a missing rewrite yields the unconnected pair") {
  auto t = summ_expand_rewrites();
  t.entries.erase(kGist);
  auto r = check_lemma1(*summ_task(), *expand_task(), t);
  CHECK_FALSE(r.hypothesis_holds);
  CHECK_FALSE(r.ok());
  REQUIRE(r.counterexample.has_value());
  CHECK(r.counterexample->first == kGist);
  CHECK(r.counterexample->second == kExpand);
}

TEST_CASE("fixture files load") {
  auto f = load_fixture(testing::fixture("prompt_category.json"));
  CHECK(f.kind == "category");
  auto c = load_category_fixture(f);
  CHECK(c.category->arrows().size() == 5);
  CHECK(c.functors.size() == 2);
  CHECK(c.transformations.size() == 1);
  CHECK(c.category->check_laws().passed());

  auto l = load_lemma1_fixture(load_fixture(testing::fixture("summ_expand_lemma1.json")));
  CHECK(l.task1->name == "Summ");
  CHECK(l.task2->name == "Expand");
  CHECK(check_lemma1(*l.task1, *l.task2, l.rewrites).ok());
}

TEST_CASE("fixture loading errors") {
  auto dir = testing::scratch("fixtures");
  CHECK(error_of([&] { load_fixture(dir / "absent.json"); }) == Errc::io);
  testing::spit(dir / "broken.json", "{ not json");
  CHECK(error_of([&] { load_fixture(dir / "broken.json"); }) == Errc::schema);
  testing::spit(dir / "tok.json", R"({"kind": "category", "tokenizer": "letters"})");
  CHECK(error_of([&] { backend_config_from_json(load_fixture(dir / "tok.json").doc); }) == Errc::schema);
}
