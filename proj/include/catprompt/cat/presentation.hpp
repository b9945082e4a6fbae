#pragma once

#include <compare>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace catprompt::cat {

struct ObjectId {
  std::string label;

  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;
};

/// A generating arrow. `description` is optional free text; in the prompt
/// category it is the template the arrow stands for.
struct Arrow {
  std::string label;
  ObjectId dom;
  ObjectId cod;
  std::string description;
};

/// A composite of generators in diagrammatic order: `arrows[0]` is applied
/// first. The empty path is the identity on `dom` (== `cod`).
struct Path {
  ObjectId dom;
  ObjectId cod;
  std::vector<std::string> arrows;

  bool is_identity() const noexcept { return arrows.empty(); }
  std::string to_string() const;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Diagrammatic composition: `f` then `g`. Identities are absorbed since they
/// are empty. Throws Error(Errc::composition_mismatch) when cod(f) != dom(g).
Path compose(const Path& f, const Path& g);

struct Relation {
  Path lhs;
  Path rhs;
};

/// A finitely presented category: objects, generating arrows, and equations
/// between paths. Identities exist implicitly for every object.
class CategoryPresentation {
 public:
  CategoryPresentation() = default;
  explicit CategoryPresentation(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  void add_object(const ObjectId& object);
  void add_generator(const Arrow& arrow);
  void add_relation(const Path& lhs, const Path& rhs);

  const std::vector<ObjectId>& objects() const noexcept { return objects_; }
  const std::vector<Arrow>& generators() const noexcept { return generators_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }

  bool has_object(const ObjectId& object) const;
  bool has_generator(std::string_view label) const;
  const Arrow& generator(std::string_view label) const;

  Path identity(const ObjectId& object) const;
  Path arrow(std::string_view label) const;

  /// Composite of the named generators. An empty label list needs `anchor`
  /// to know which identity is meant.
  Path path(std::span<const std::string> labels, const ObjectId* anchor = nullptr) const;

  /// All generators whose domain is `object`, in declaration order.
  std::vector<const Arrow*> outgoing(const ObjectId& object) const;

 private:
  void check_path(const Path& p) const;

  std::string name_;
  std::vector<ObjectId> objects_;
  std::vector<Arrow> generators_;
  std::vector<Relation> relations_;
  std::map<std::string, std::size_t, std::less<>> generator_index_;
};

using PresentationPtr = std::shared_ptr<const CategoryPresentation>;

enum class Variance { covariant, contravariant };

/// A functor between presentations, specified on generators. Each generator
/// maps to a path in the target; an empty path means an identity.
struct FunctorDef {
  std::string name;
  PresentationPtr source;
  PresentationPtr target;
  std::map<std::string, std::string> object_map;
  std::map<std::string, std::vector<std::string>> arrow_map;
  Variance variance = Variance::covariant;

  /// Throws Error(Errc::ill_formed_functor) naming the first offending entry.
  void validate() const;

  ObjectId map_object(const ObjectId& object) const;
  Path map_arrow(std::string_view label) const;
  Path map_path(const Path& path) const;

  static FunctorDef identity(PresentationPtr presentation, std::string name = "id");
};

/// Components are paths in the common target category, one per source object.
struct NatTransDef {
  std::string name;
  FunctorDef from;
  FunctorDef to;
  std::map<std::string, std::vector<std::string>> components;

  /// Throws Error(Errc::incomplete_transformation) for a missing component and
  /// Error(Errc::ill_formed_transformation) for mismatched functors or endpoints.
  void validate() const;

  Path component(const ObjectId& object) const;

  static NatTransDef identity(const FunctorDef& functor, std::string name = "id");
};

// Declarative (JSON) form. Objects are labels; generators are
// {label, dom, cod, template}; relations are {lhs: [labels], rhs: [labels]}.
CategoryPresentation presentation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CategoryPresentation& presentation);

// Functors: {name, variance?, objects: {src: dst}, arrows: {src: [dst path]}}.
FunctorDef functor_from_json(const nlohmann::json& j, PresentationPtr source,
                             PresentationPtr target);
nlohmann::json to_json(const FunctorDef& functor);

// Transformations: {name, from, to, components: {object: [path]}}; the two
// functors are resolved by the caller.
NatTransDef transformation_from_json(const nlohmann::json& j, FunctorDef from, FunctorDef to);

}  // namespace catprompt::cat
