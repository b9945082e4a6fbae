#include "catprompt/cat/presentation.hpp"

#include <algorithm>

#include "catprompt/error.hpp"

namespace catprompt::cat {

std::string Path::to_string() const {
  if (arrows.empty()) return "1_" + dom.label;
  std::string out;
  for (const auto& a : arrows) {
    if (!out.empty()) out += ";";
    out += a;
  }
  return out;
}

Path compose(const Path& f, const Path& g) {
  if (f.cod != g.dom) {
    throw Error(Errc::composition_mismatch,
                "cannot compose " + f.to_string() + ": " + f.dom.label + "->" + f.cod.label +
                    " with " + g.to_string() + ": " + g.dom.label + "->" + g.cod.label);
  }
  Path out{f.dom, g.cod, f.arrows};
  out.arrows.insert(out.arrows.end(), g.arrows.begin(), g.arrows.end());
  return out;
}

void CategoryPresentation::add_object(const ObjectId& object) {
  if (object.label.empty()) throw Error(Errc::construction, "object label is empty");
  if (has_object(object)) {
    throw Error(Errc::duplicate, "duplicate object '" + object.label + "'");
  }
  objects_.push_back(object);
}

void CategoryPresentation::add_generator(const Arrow& arrow) {
  if (arrow.label.empty()) throw Error(Errc::construction, "arrow label is empty");
  if (has_generator(arrow.label)) {
    throw Error(Errc::duplicate, "duplicate arrow '" + arrow.label + "'");
  }
  for (const auto* end : {&arrow.dom, &arrow.cod}) {
    if (!has_object(*end)) {
      throw Error(Errc::not_found,
                  "arrow '" + arrow.label + "' refers to unknown object '" + end->label + "'");
    }
  }
  generator_index_.emplace(arrow.label, generators_.size());
  generators_.push_back(arrow);
}

void CategoryPresentation::check_path(const Path& p) const {
  if (!has_object(p.dom)) throw Error(Errc::not_found, "unknown object '" + p.dom.label + "'");
  ObjectId at = p.dom;
  for (const auto& label : p.arrows) {
    const Arrow& a = generator(label);
    if (a.dom != at) {
      throw Error(Errc::composition_mismatch, "path " + p.to_string() + " is not composable at '" +
                                                  label + "'");
    }
    at = a.cod;
  }
  if (at != p.cod) {
    throw Error(Errc::composition_mismatch, "path " + p.to_string() + " does not end at '" +
                                                p.cod.label + "'");
  }
}

void CategoryPresentation::add_relation(const Path& lhs, const Path& rhs) {
  check_path(lhs);
  check_path(rhs);
  if (lhs.dom != rhs.dom || lhs.cod != rhs.cod) {
    throw Error(Errc::composition_mismatch,
                "relation " + lhs.to_string() + " = " + rhs.to_string() +
                    " relates paths with different endpoints");
  }
  relations_.push_back({lhs, rhs});
}

bool CategoryPresentation::has_object(const ObjectId& object) const {
  return std::find(objects_.begin(), objects_.end(), object) != objects_.end();
}

bool CategoryPresentation::has_generator(std::string_view label) const {
  return generator_index_.find(label) != generator_index_.end();
}

const Arrow& CategoryPresentation::generator(std::string_view label) const {
  auto it = generator_index_.find(label);
  if (it == generator_index_.end()) {
    throw Error(Errc::not_found, "unknown arrow '" + std::string(label) + "'");
  }
  return generators_[it->second];
}

Path CategoryPresentation::identity(const ObjectId& object) const {
  if (!has_object(object)) throw Error(Errc::not_found, "unknown object '" + object.label + "'");
  return Path{object, object, {}};
}

Path CategoryPresentation::arrow(std::string_view label) const {
  const Arrow& a = generator(label);
  return Path{a.dom, a.cod, {a.label}};
}

Path CategoryPresentation::path(std::span<const std::string> labels, const ObjectId* anchor) const {
  if (labels.empty()) {
    if (anchor == nullptr) {
      throw Error(Errc::composition_mismatch, "empty path needs an anchor object");
    }
    return identity(*anchor);
  }
  Path out = arrow(labels.front());
  for (std::size_t i = 1; i < labels.size(); ++i) out = compose(out, arrow(labels[i]));
  if (anchor != nullptr && out.dom != *anchor) {
    throw Error(Errc::composition_mismatch,
                "path " + out.to_string() + " does not start at '" + anchor->label + "'");
  }
  return out;
}

std::vector<const Arrow*> CategoryPresentation::outgoing(const ObjectId& object) const {
  std::vector<const Arrow*> out;
  for (const auto& a : generators_) {
    if (a.dom == object) out.push_back(&a);
  }
  return out;
}

// --- functors ---------------------------------------------------------------

void FunctorDef::validate() const {
  auto fail = [&](const std::string& what) {
    throw Error(Errc::ill_formed_functor, "functor '" + name + "': " + what);
  };
  if (!source || !target) fail("source and target are required");
  for (const auto& obj : source->objects()) {
    auto it = object_map.find(obj.label);
    if (it == object_map.end()) fail("object '" + obj.label + "' is not mapped");
    if (!target->has_object(ObjectId{it->second})) {
      fail("object '" + obj.label + "' maps to unknown target object '" + it->second + "'");
    }
  }
  for (const auto& a : source->generators()) {
    auto it = arrow_map.find(a.label);
    if (it == arrow_map.end()) fail("arrow '" + a.label + "' is not mapped");
    ObjectId want_dom = map_object(variance == Variance::covariant ? a.dom : a.cod);
    ObjectId want_cod = map_object(variance == Variance::covariant ? a.cod : a.dom);
    Path image;
    try {
      image = target->path(it->second, &want_dom);
    } catch (const Error& e) {
      fail("arrow '" + a.label + "' maps to a bad path: " + e.what());
    }
    if (image.dom != want_dom || image.cod != want_cod) {
      fail("arrow '" + a.label + "' maps to " + image.to_string() + ": " + image.dom.label +
           "->" + image.cod.label + " but endpoints require " + want_dom.label + "->" +
           want_cod.label);
    }
  }
}

ObjectId FunctorDef::map_object(const ObjectId& object) const {
  auto it = object_map.find(object.label);
  if (it == object_map.end()) {
    throw Error(Errc::ill_formed_functor,
                "functor '" + name + "': object '" + object.label + "' is not mapped");
  }
  return ObjectId{it->second};
}

Path FunctorDef::map_arrow(std::string_view label) const {
  const Arrow& a = source->generator(label);
  auto it = arrow_map.find(std::string(label));
  if (it == arrow_map.end()) {
    throw Error(Errc::ill_formed_functor,
                "functor '" + name + "': arrow '" + std::string(label) + "' is not mapped");
  }
  ObjectId anchor = map_object(variance == Variance::covariant ? a.dom : a.cod);
  return target->path(it->second, &anchor);
}

Path FunctorDef::map_path(const Path& path) const {
  if (path.is_identity()) return target->identity(map_object(path.dom));
  if (variance == Variance::covariant) {
    Path out = map_arrow(path.arrows.front());
    for (std::size_t i = 1; i < path.arrows.size(); ++i) out = compose(out, map_arrow(path.arrows[i]));
    return out;
  }
  Path out = map_arrow(path.arrows.back());
  for (std::size_t i = path.arrows.size() - 1; i-- > 0;) out = compose(out, map_arrow(path.arrows[i]));
  return out;
}

FunctorDef FunctorDef::identity(PresentationPtr presentation, std::string name) {
  FunctorDef f;
  f.name = std::move(name);
  f.source = presentation;
  f.target = presentation;
  for (const auto& o : presentation->objects()) f.object_map[o.label] = o.label;
  for (const auto& a : presentation->generators()) f.arrow_map[a.label] = {a.label};
  return f;
}

// --- natural transformations -------------------------------------------------

void NatTransDef::validate() const {
  auto fail = [&](const std::string& what) {
    throw Error(Errc::ill_formed_transformation, "transformation '" + name + "': " + what);
  };
  from.validate();
  to.validate();
  auto same = [](const PresentationPtr& a, const PresentationPtr& b) {
    return a == b || (a && b && a->name() == b->name());
  };
  if (!same(from.source, to.source) || !same(from.target, to.target)) {
    fail("functors '" + from.name + "' and '" + to.name + "' do not share source and target");
  }
  if (from.variance != to.variance) fail("functors have different variance");
  for (const auto& obj : from.source->objects()) {
    auto it = components.find(obj.label);
    if (it == components.end()) {
      throw Error(Errc::incomplete_transformation,
                  "transformation '" + name + "': no component at '" + obj.label + "'");
    }
    ObjectId dom = from.map_object(obj);
    ObjectId cod = to.map_object(obj);
    Path p;
    try {
      p = from.target->path(it->second, &dom);
    } catch (const Error& e) {
      fail("component at '" + obj.label + "' is not a path: " + e.what());
    }
    if (p.dom != dom || p.cod != cod) {
      fail("component at '" + obj.label + "' is " + p.dom.label + "->" + p.cod.label +
           " but must be " + dom.label + "->" + cod.label);
    }
  }
}

Path NatTransDef::component(const ObjectId& object) const {
  auto it = components.find(object.label);
  if (it == components.end()) {
    throw Error(Errc::incomplete_transformation,
                "transformation '" + name + "': no component at '" + object.label + "'");
  }
  ObjectId dom = from.map_object(object);
  return from.target->path(it->second, &dom);
}

NatTransDef NatTransDef::identity(const FunctorDef& functor, std::string name) {
  NatTransDef t{std::move(name), functor, functor, {}};
  for (const auto& o : functor.source->objects()) t.components[o.label] = {};
  return t;
}

// --- JSON ----------------------------------------------------------------------

namespace {

std::vector<std::string> labels(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(Errc::schema, "expected an array of arrow labels");
  return j.get<std::vector<std::string>>();
}

}  // namespace

CategoryPresentation presentation_from_json(const nlohmann::json& j) {
  try {
    CategoryPresentation p(j.value("name", std::string("unnamed")));
    for (const auto& o : j.at("objects")) {
      p.add_object(ObjectId{o.is_string() ? o.get<std::string>() : o.at("label").get<std::string>()});
    }
    for (const auto& g : j.value("generators", nlohmann::json::array())) {
      p.add_generator(Arrow{g.at("label").get<std::string>(), ObjectId{g.at("dom").get<std::string>()},
                            ObjectId{g.at("cod").get<std::string>()},
                            g.value("template", std::string())});
    }
    for (const auto& r : j.value("relations", nlohmann::json::array())) {
      auto lhs_labels = labels(r.at("lhs"));
      auto rhs_labels = labels(r.at("rhs"));
      if (lhs_labels.empty() && rhs_labels.empty()) {
        throw Error(Errc::schema, "relation with two empty paths");
      }
      // An empty side is the identity at the other side's domain.
      Path lhs = lhs_labels.empty() ? Path{} : p.path(lhs_labels);
      Path rhs = rhs_labels.empty() ? Path{} : p.path(rhs_labels);
      if (lhs_labels.empty()) lhs = p.identity(rhs.dom);
      if (rhs_labels.empty()) rhs = p.identity(lhs.dom);
      p.add_relation(lhs, rhs);
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema, std::string("category presentation: ") + e.what());
  }
}

nlohmann::json to_json(const CategoryPresentation& presentation) {
  nlohmann::json j;
  j["name"] = presentation.name();
  j["objects"] = nlohmann::json::array();
  for (const auto& o : presentation.objects()) j["objects"].push_back(o.label);
  j["generators"] = nlohmann::json::array();
  for (const auto& a : presentation.generators()) {
    nlohmann::json g{{"label", a.label}, {"dom", a.dom.label}, {"cod", a.cod.label}};
    if (!a.description.empty()) g["template"] = a.description;
    j["generators"].push_back(std::move(g));
  }
  j["relations"] = nlohmann::json::array();
  for (const auto& r : presentation.relations()) {
    j["relations"].push_back({{"lhs", r.lhs.arrows}, {"rhs", r.rhs.arrows}});
  }
  return j;
}

FunctorDef functor_from_json(const nlohmann::json& j, PresentationPtr source,
                             PresentationPtr target) {
  try {
    FunctorDef f;
    f.name = j.value("name", std::string("F"));
    f.source = std::move(source);
    f.target = std::move(target);
    std::string variance = j.value("variance", std::string("covariant"));
    if (variance == "contravariant") {
      f.variance = Variance::contravariant;
    } else if (variance != "covariant") {
      throw Error(Errc::schema, "unknown variance '" + variance + "'");
    }
    f.object_map = j.at("objects").get<std::map<std::string, std::string>>();
    for (const auto& [k, v] : j.at("arrows").items()) {
      f.arrow_map[k] = v.is_string() ? std::vector<std::string>{v.get<std::string>()} : labels(v);
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema, std::string("functor: ") + e.what());
  }
}

nlohmann::json to_json(const FunctorDef& functor) {
  return {{"name", functor.name},
          {"source", functor.source ? functor.source->name() : ""},
          {"target", functor.target ? functor.target->name() : ""},
          {"variance", functor.variance == Variance::covariant ? "covariant" : "contravariant"},
          {"objects", functor.object_map},
          {"arrows", functor.arrow_map}};
}

NatTransDef transformation_from_json(const nlohmann::json& j, FunctorDef from, FunctorDef to) {
  try {
    NatTransDef t{j.value("name", std::string("alpha")), std::move(from), std::move(to), {}};
    for (const auto& [k, v] : j.at("components").items()) t.components[k] = labels(v);
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema, std::string("transformation: ") + e.what());
  }
}

}  // namespace catprompt::cat
