#include "catprompt/prompt/fixture.hpp"

#include <fstream>

#include "catprompt/error.hpp"
#include "catprompt/llm/mock.hpp"

namespace catprompt::prompt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::schema, path.string() + ": " + e.what());
  }
}

template <typename F>
auto schema_guard(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(Errc::schema, what + ": " + e.what());
  }
}

Membership membership_from_json(const json& j) {
  Membership m;
  std::string kind = j.value("kind", std::string("allow_list"));
  if (kind == "any") {
    m.kind = Membership::Kind::any;
  } else if (kind == "allow_list") {
    m.kind = Membership::Kind::allow_list;
  } else if (kind == "exclude_list") {
    m.kind = Membership::Kind::exclude_list;
  } else {
    throw Error(Errc::schema, "unknown membership kind '" + kind + "'");
  }
  m.members = j.value("members", std::vector<std::string>{});
  m.description = j.value("description", std::string());
  return m;
}

}  // namespace

Fixture load_fixture(const fs::path& path) {
  Fixture f;
  f.doc = read_json(path);
  f.base_dir = path.parent_path();
  f.kind = schema_guard(path.string(), [&] { return f.doc.at("kind").get<std::string>(); });
  return f;
}

json resolve(const json& value, const fs::path& base_dir, fs::path* resolved_dir) {
  if (value.is_string()) {
    fs::path p = base_dir / value.get<std::string>();
    if (resolved_dir != nullptr) *resolved_dir = p.parent_path();
    return read_json(p);
  }
  if (resolved_dir != nullptr) *resolved_dir = base_dir;
  return value;
}

llm::BackendConfig backend_config_from_json(const json& doc) {
  return schema_guard("backend config", [&] {
    llm::BackendConfig c;
    if (doc.contains("budget")) c.budget.k = doc.at("budget").at("k").get<std::size_t>();
    std::string scheme = doc.value("tokenizer", std::string("whitespace"));
    if (scheme == "byte") {
      c.tokenizer.scheme = llm::TokenScheme::byte;
    } else if (scheme != "whitespace") {
      throw Error(Errc::schema, "unknown tokenizer scheme '" + scheme + "'");
    }
    c.model = doc.value("model", std::string("mock"));
    return c;
  });
}

llm::MockRuleSet mock_rules_from_fixture(const json& doc, const fs::path& base_dir) {
  if (!doc.contains("mock")) return {};
  const json& m = doc.at("mock");
  if (m.is_array()) {
    llm::MockRuleSet set;
    for (const auto& part : m) set.extend(llm::MockRuleSet::from_json(resolve(part, base_dir)));
    return set;
  }
  return llm::MockRuleSet::from_json(resolve(m, base_dir));
}

llm::BackendPtr fixture_backend(const json& doc, const fs::path& base_dir) {
  return std::make_shared<llm::MockBackend>(mock_rules_from_fixture(doc, base_dir),
                                            backend_config_from_json(doc));
}

CategoryOptions category_options_from_json(const json& doc) {
  return schema_guard("category options", [&] {
    CategoryOptions o;
    o.max_output_tokens = doc.value("max_output_tokens", o.max_output_tokens);
    o.seed = doc.value("seed", o.seed);
    return o;
  });
}

std::vector<StrObject> objects_from_json(const json& doc) {
  return schema_guard("objects", [&] {
    std::vector<StrObject> out;
    for (const auto& o : doc.value("objects", json::array())) {
      Membership m = o.contains("membership") ? membership_from_json(o.at("membership")) : Membership{};
      if (!o.contains("membership")) m.kind = Membership::Kind::allow_list;
      out.push_back(make_object(o.at("label").get<std::string>(),
                                o.value("witnesses", std::vector<std::string>{}), std::move(m)));
    }
    return out;
  });
}

std::vector<PromptArrow> arrows_from_json(const json& doc) {
  return schema_guard("arrows", [&] {
    std::vector<PromptArrow> out;
    for (const auto& a : doc.value("arrows", json::array())) {
      out.push_back(make_arrow(a.at("label").get<std::string>(), a.at("template").get<std::string>(),
                               a.at("dom").get<std::string>(), a.at("cod").get<std::string>()));
    }
    return out;
  });
}

std::vector<RelationSpec> relations_from_json(const json& doc) {
  return schema_guard("relations", [&] {
    std::vector<RelationSpec> out;
    for (const auto& r : doc.value("relations", json::array())) {
      out.push_back(RelationSpec{r.at("lhs").get<std::vector<std::string>>(),
                                 r.at("rhs").get<std::vector<std::string>>()});
    }
    return out;
  });
}

PromptCategoryPtr load_category(const json& doc, const fs::path& base_dir, llm::BackendPtr backend) {
  if (!backend) backend = fixture_backend(doc, base_dir);
  std::string name = schema_guard("category", [&] { return doc.at("name").get<std::string>(); });
  return PromptCategory::make(std::move(name), objects_from_json(doc), arrows_from_json(doc),
                              relations_from_json(doc), std::move(backend),
                              category_options_from_json(doc));
}

TaskCategoryPtr load_task(const json& doc, const fs::path& base_dir, llm::BackendPtr backend,
                          const TaskOptions& options) {
  if (!backend) backend = fixture_backend(doc, base_dir);
  auto [name, description] = schema_guard("task", [&] {
    return std::make_pair(doc.at("name").get<std::string>(), doc.at("description").get<std::string>());
  });
  TaskOptions o = options;
  o.category = category_options_from_json(doc);
  return make_task_category(std::move(name), std::move(description), objects_from_json(doc),
                            arrows_from_json(doc), relations_from_json(doc), std::move(backend), o);
}

CategoryFixture load_category_fixture(const Fixture& fixture, llm::BackendPtr backend) {
  CategoryFixture out;
  out.category = load_category(fixture.doc, fixture.base_dir, std::move(backend));
  auto pres = out.category->presentation_ptr();
  schema_guard("functors", [&] {
    std::map<std::string, cat::FunctorDef> by_name;
    for (const auto& f : fixture.doc.value("functors", json::array())) {
      auto def = cat::functor_from_json(f, pres, pres);
      by_name[def.name] = def;
      out.functors.push_back(std::move(def));
    }
    for (const auto& t : fixture.doc.value("transformations", json::array())) {
      auto lookup = [&](const std::string& key) {
        auto it = by_name.find(t.at(key).get<std::string>());
        if (it == by_name.end()) {
          throw Error(Errc::schema, "transformation refers to unknown functor '" +
                                        t.at(key).get<std::string>() + "'");
        }
        return it->second;
      };
      out.transformations.push_back(cat::transformation_from_json(t, lookup("from"), lookup("to")));
    }
    return 0;
  });
  return out;
}

namespace {

TaskCategoryPtr task_ref(const json& doc, const std::string& key, const fs::path& base_dir,
                         const llm::BackendPtr& backend) {
  if (!doc.contains(key)) throw Error(Errc::schema, "fixture needs '" + key + "'");
  fs::path dir;
  json task = resolve(doc.at(key), base_dir, &dir);
  return load_task(task, dir, backend);
}

}  // namespace

DualityFixture load_duality_fixture(const Fixture& fixture, llm::BackendPtr backend) {
  DualityFixture out;
  out.source = task_ref(fixture.doc, "source", fixture.base_dir, backend);
  out.target = task_ref(fixture.doc, "target", fixture.base_dir, backend);
  schema_guard("duality", [&] {
    out.reverse = fixture.doc.at("reverse").get<std::map<std::string, std::string>>();
    out.back = fixture.doc.value("back", std::map<std::string, std::string>{});
    out.inversion_template =
        fixture.doc.value("inversion_template", std::string(kInversionTemplate));
    return 0;
  });
  return out;
}

Lemma1Fixture load_lemma1_fixture(const Fixture& fixture, llm::BackendPtr backend) {
  Lemma1Fixture out;
  out.task1 = task_ref(fixture.doc, "task1", fixture.base_dir, backend);
  out.task2 = task_ref(fixture.doc, "task2", fixture.base_dir, backend);
  if (!fixture.doc.contains("rewrites")) throw Error(Errc::schema, "lemma1 fixture needs 'rewrites'");
  out.rewrites = RewriteTable::from_json(resolve(fixture.doc.at("rewrites"), fixture.base_dir));
  return out;
}

}  // namespace catprompt::prompt
