#include "catprompt/prompt/category.hpp"

#include <algorithm>

#include "catprompt/error.hpp"

namespace catprompt::prompt {

BackendSemantics::BackendSemantics(llm::BackendPtr backend, CategoryOptions options,
                                   std::map<std::string, std::vector<std::string>> witnesses)
    : backend_(std::move(backend)), options_(options), witnesses_(std::move(witnesses)) {
  if (!backend_) throw Error(Errc::construction, "prompt semantics need a backend");
}

std::string BackendSemantics::complete(const std::string& prompt) const {
  return backend_->complete(llm::CompletionRequest{prompt, options_.max_output_tokens, options_.seed});
}

std::string BackendSemantics::apply(const cat::Arrow& arrow, const std::string& input) const {
  if (arrow.description.empty()) {
    throw Error(Errc::missing_semantics, "arrow '" + arrow.label + "' has no prompt template");
  }
  text::Template t = text::Template::parse(arrow.description);
  auto slots = t.slots();
  if (slots.size() != 1) {
    throw Error(Errc::missing_semantics, "arrow '" + arrow.label + "' template has " +
                                             std::to_string(slots.size()) + " slots");
  }
  return complete(t.render({{slots.front(), input}}));
}

std::vector<std::string> BackendSemantics::witnesses(const cat::ObjectId& object) const {
  auto it = witnesses_.find(object.label);
  return it == witnesses_.end() ? std::vector<std::string>{} : it->second;
}

std::shared_ptr<const PromptCategory> PromptCategory::make(std::string name,
                                                           std::vector<StrObject> objects,
                                                           std::vector<PromptArrow> arrows,
                                                           std::vector<RelationSpec> relations,
                                                           llm::BackendPtr backend,
                                                           CategoryOptions options) {
  if (!backend) throw Error(Errc::construction, "category '" + name + "' needs a backend");
  const auto& budget = backend->config().budget;
  const auto& tok = backend->config().tokenizer;

  auto pres = std::make_shared<cat::CategoryPresentation>(name);
  std::map<std::string, std::vector<std::string>> witnesses;
  for (auto& o : objects) {
    o = make_object(o.label, o.witnesses, o.membership);
    for (const auto& w : o.witnesses) {
      if (tok.count(w) > budget.k) {
        throw Error(Errc::construction, "witness of '" + o.label + "' has " +
                                            std::to_string(tok.count(w)) +
                                            " tokens, over k = " + std::to_string(budget.k));
      }
    }
    pres->add_object(cat::ObjectId{o.label});
    witnesses[o.label] = o.witnesses;
  }

  for (const auto& a : arrows) {
    pres->add_generator(
        cat::Arrow{a.label, cat::ObjectId{a.dom}, cat::ObjectId{a.cod}, a.description.source()});
    auto dom = std::find_if(objects.begin(), objects.end(),
                            [&](const StrObject& o) { return o.label == a.dom; });
    for (const auto& w : dom->witnesses) {
      llm::CompletionRequest req{a.render(w), options.max_output_tokens, options.seed};
      auto d = llm::enforce_budget(req, budget, tok);
      if (!d) {
        throw Error(Errc::construction, "arrow '" + a.label + "' rendered on a witness of '" +
                                            a.dom + "' needs " + std::to_string(d.prompt_tokens) +
                                            " + " + std::to_string(d.max_output_tokens) +
                                            " tokens, over k = " + std::to_string(d.k));
      }
    }
  }

  for (const auto& r : relations) {
    if (r.lhs.empty() && r.rhs.empty()) {
      throw Error(Errc::construction, "relation between two identities");
    }
    cat::Path lhs = r.lhs.empty() ? cat::Path{} : pres->path(r.lhs);
    cat::Path rhs = r.rhs.empty() ? cat::Path{} : pres->path(r.rhs);
    if (r.lhs.empty()) lhs = pres->identity(rhs.dom);
    if (r.rhs.empty()) rhs = pres->identity(lhs.dom);
    pres->add_relation(lhs, rhs);
  }

  std::shared_ptr<PromptCategory> cat(new PromptCategory());
  cat->presentation_ = std::move(pres);
  cat->semantics_ = std::make_shared<BackendSemantics>(std::move(backend), options, std::move(witnesses));
  cat->objects_ = std::move(objects);
  cat->arrows_ = std::move(arrows);
  cat->options_ = options;
  return cat;
}

const StrObject& PromptCategory::object(std::string_view label) const {
  for (const auto& o : objects_) {
    if (o.label == label) return o;
  }
  throw Error(Errc::not_found, "unknown object '" + std::string(label) + "' in " + name());
}

const PromptArrow& PromptCategory::arrow(std::string_view label) const {
  for (const auto& a : arrows_) {
    if (a.label == label) return a;
  }
  throw Error(Errc::not_found, "unknown arrow '" + std::string(label) + "' in " + name());
}

std::string PromptCategory::apply(const PromptArrow& a, const std::string& input) const {
  return complete(a.render(input));
}

std::string PromptCategory::apply_identity(const std::string& input) const {
  return complete(text::Template::parse(kIdentityTemplate).render({{"X", input}}));
}

cat::MonoidalStructure PromptCategory::monoidal() const {
  cat::MonoidalStructure m;
  m.tensor = [](const std::string& x, const std::string& y) { return tensor_strings(x, y); };
  m.unit = "";
  m.unit_object = cat::ObjectId{"I"};
  auto iso = [this](const std::string& s) { return apply_identity(s); };
  m.left_unitor = iso;
  m.right_unitor = iso;
  m.associator = iso;
  return m;
}

std::vector<std::string> PromptCategory::all_witnesses() const {
  std::vector<std::string> out;
  for (const auto& o : objects_) {
    for (const auto& w : o.witnesses) {
      if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    }
  }
  return out;
}

cat::LawReport PromptCategory::check_laws(const cat::LawOptions& options) const {
  cat::LawReport report = cat::check_category_laws(*presentation_, *semantics_, options);
  report.subject = "prompt category " + name();

  cat::LawReport evaluated;
  cat::LawRecorder rec(evaluated, options);
  for (const auto& o : objects_) {
    for (const auto& w : o.witnesses) rec.record("identity.evaluated", "Return@" + o.label, w, apply_identity(w), w);
  }
  for (const auto& a : arrows_) {
    for (const auto& w : object(a.dom).witnesses) {
      std::string direct = apply(a, w);
      rec.record("identity.evaluated.left", "Return;" + a.label, w, apply(a, apply_identity(w)), direct);
      rec.record("identity.evaluated.right", a.label + ";Return", w, apply_identity(direct), direct);
    }
  }
  const std::string& eos = backend()->config().tokenizer.eos;
  const text::Template terminal = text::Template::parse(tensor_strings("{X}", text::escape(eos)));
  for (const auto& w : all_witnesses()) {
    rec.record("terminal", "{X}*EOS", w, complete(terminal.render({{"X", w}})), "");
  }
  report.merge(evaluated);

  auto witnesses = all_witnesses();
  report.merge(cat::check_monoidal_laws(monoidal(), witnesses, options));
  return report;
}

}  // namespace catprompt::prompt
