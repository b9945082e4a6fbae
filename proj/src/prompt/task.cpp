#include "catprompt/prompt/task.hpp"

#include <algorithm>

#include "catprompt/error.hpp"

namespace catprompt::prompt {

namespace {

void require_member(const StrObject& cod, const std::string& arrow, const std::string& witness,
                    const std::string& output) {
  if (cod.membership.contains(output)) return;
  throw Error(Errc::task_membership, "arrow '" + arrow + "' takes witness \"" + witness +
                                         "\" to \"" + output + "\", which is not in '" + cod.label +
                                         "'");
}

cat::FunctorDef inclusion_into(const TaskCategory& task, const PromptCategory& ambient) {
  const auto& src = task.presentation();
  const auto& dst = ambient.presentation();
  cat::FunctorDef f;
  f.name = "T_" + task.name;
  f.source = task.category->presentation_ptr();
  f.target = ambient.presentation_ptr();
  for (const auto& o : src.objects()) {
    if (!dst.has_object(o)) {
      throw Error(Errc::construction,
                  "object '" + o.label + "' of " + task.name + " is missing from " + dst.name());
    }
    f.object_map[o.label] = o.label;
  }
  for (const auto& a : src.generators()) {
    if (!dst.has_generator(a.label)) {
      throw Error(Errc::construction,
                  "arrow '" + a.label + "' of " + task.name + " is missing from " + dst.name());
    }
    const auto& b = dst.generator(a.label);
    if (b.dom != a.dom || b.cod != a.cod || b.description != a.description) {
      throw Error(Errc::construction, "arrow '" + a.label + "' of " + task.name +
                                          " differs from its namesake in " + dst.name());
    }
    f.arrow_map[a.label] = {a.label};
  }
  f.validate();
  return f;
}

}  // namespace

TaskCategoryPtr make_task_category(std::string name, std::string description,
                                   std::vector<StrObject> objects, std::vector<PromptArrow> arrows,
                                   std::vector<RelationSpec> relations, llm::BackendPtr backend,
                                   const TaskOptions& options, const PromptCategory* ambient) {
  auto task = std::make_shared<TaskCategory>();
  task->name = name;
  task->description = std::move(description);
  task->category = PromptCategory::make(std::move(name), std::move(objects), std::move(arrows),
                                        std::move(relations), std::move(backend), options.category);
  const PromptCategory& c = *task->category;

  std::map<std::string, std::vector<std::pair<std::string, std::string>>> outputs;
  for (const auto& a : c.arrows()) {
    const auto& cod = c.object(a.cod);
    for (const auto& w : c.object(a.dom).witnesses) {
      std::string out = c.apply(a, w);
      require_member(cod, a.label, w, out);
      outputs[a.label].emplace_back(w, std::move(out));
    }
  }
  if (options.check_composites) {
    for (const auto& f : c.arrows()) {
      for (const auto& g : c.arrows()) {
        if (g.dom != f.cod) continue;
        const auto& cod = c.object(g.cod);
        for (const auto& [w, mid] : outputs[f.label]) {
          require_member(cod, f.label + ";" + g.label, w, c.apply(g, mid));
        }
      }
    }
  }

  if (ambient != nullptr) {
    task->inclusion = inclusion_into(*task, *ambient);
  } else {
    task->inclusion = cat::FunctorDef::identity(c.presentation_ptr(), "T_" + task->name);
  }
  return task;
}

DualityFunctor build_duality_functor(const TaskCategory& src, const TaskCategory& dst,
                                     const std::map<std::string, std::string>& reverse,
                                     std::string_view inversion_template, cat::Variance variance) {
  text::Template inv = text::Template::parse(inversion_template);
  auto slots = inv.slots();
  std::sort(slots.begin(), slots.end());
  if (slots != std::vector<std::string>{"F", "FSTAR"}) {
    throw Error(Errc::construction, "inversion template \"" + std::string(inversion_template) +
                                        "\" must have exactly the slots F and FSTAR");
  }

  const auto& s = src.presentation();
  const auto& d = dst.presentation();
  DualityFunctor out;
  auto& f = out.functor;
  f.name = "D_" + src.name + "_" + dst.name;
  f.source = src.category->presentation_ptr();
  f.target = dst.category->presentation_ptr();
  f.variance = variance;

  auto assign = [&](const cat::ObjectId& from, const cat::ObjectId& to, const std::string& why) {
    auto [it, fresh] = f.object_map.emplace(from.label, to.label);
    if (!fresh && it->second != to.label) {
      throw Error(Errc::ill_formed_functor, "object '" + from.label + "' is sent to both '" +
                                                it->second + "' and '" + to.label + "' (" + why +
                                                ")");
    }
  };

  for (const auto& a : s.generators()) {
    auto r = reverse.find(a.description);
    if (r == reverse.end()) {
      throw Error(Errc::missing_dual,
                  "arrow '" + a.label + "' (\"" + a.description + "\") has no reverse");
    }
    auto g = std::find_if(d.generators().begin(), d.generators().end(),
                          [&](const cat::Arrow& b) { return b.description == r->second; });
    if (g == d.generators().end()) {
      throw Error(Errc::missing_dual, "reverse \"" + r->second + "\" of arrow '" + a.label +
                                          "' is not an arrow of " + dst.name);
    }
    if (variance == cat::Variance::contravariant) {
      assign(a.cod, g->dom, a.label);
      assign(a.dom, g->cod, a.label);
    } else {
      assign(a.dom, g->dom, a.label);
      assign(a.cod, g->cod, a.label);
    }
    f.arrow_map[a.label] = {g->label};
    out.instructions[a.label] = inv.render({{"F", a.description}, {"FSTAR", g->description}});
  }
  // Objects no generator touches still need an image.
  for (const auto& o : s.objects()) {
    if (f.object_map.contains(o.label)) continue;
    if (d.has_object(o)) {
      f.object_map[o.label] = o.label;
    } else {
      throw Error(Errc::missing_dual, "object '" + o.label + "' has no counterpart in " + dst.name);
    }
  }
  f.validate();
  return out;
}

cat::LawReport check_duality_roundtrip(const cat::FunctorDef& f, const cat::FunctorDef& g,
                                       const cat::LawOptions& options) {
  cat::LawReport report;
  report.subject = g.name + " after " + f.name;
  cat::LawRecorder rec(report, options);
  for (const auto& o : f.source->objects()) {
    auto back = g.map_object(f.map_object(o));
    rec.record_structural("duality.roundtrip.object", o.label, back == o,
                          o.label + " comes back as " + back.label);
  }
  for (const auto& a : f.source->generators()) {
    auto back = g.map_path(f.map_arrow(a.label));
    bool ok = back.arrows.size() == 1 && back.arrows.front() == a.label;
    rec.record_structural("duality.roundtrip.arrow", a.label, ok,
                          a.label + " comes back as " + back.to_string());
  }
  return report;
}

}  // namespace catprompt::prompt
