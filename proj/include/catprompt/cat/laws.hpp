#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catprompt/cat/presentation.hpp"
#include "json.hpp"

namespace catprompt::cat {

/// Concrete meaning for the arrows of a presentation, plus the finite witness
/// sets that stand in for each object. Arrows are compared extensionally on
/// these witnesses.
class Semantics {
 public:
  virtual ~Semantics() = default;

  /// Throws Error(Errc::missing_semantics) when the arrow has no meaning.
  virtual std::string apply(const Arrow& arrow, const std::string& input) const = 0;
  virtual std::vector<std::string> witnesses(const ObjectId& object) const = 0;
};

/// Folds the path's generators over `input`, first arrow first.
std::string evaluate(const CategoryPresentation& presentation, const Path& path,
                     const std::string& input, const Semantics& semantics);

/// Semantics backed by plain callables keyed by arrow label.
class FunctionSemantics final : public Semantics {
 public:
  using Fn = std::function<std::string(const std::string&)>;

  FunctionSemantics& define(std::string arrow, Fn fn);
  FunctionSemantics& witness(std::string object, std::vector<std::string> values);

  std::string apply(const Arrow& arrow, const std::string& input) const override;
  std::vector<std::string> witnesses(const ObjectId& object) const override;

 private:
  std::map<std::string, Fn, std::less<>> arrows_;
  std::map<std::string, std::vector<std::string>, std::less<>> witnesses_;
};

struct LawInstance {
  std::string law;      // e.g. "associativity", "functor.relation"
  std::string subject;  // the arrows/objects involved
  bool passed = true;
  bool exact_equal = true;
  bool normalized_equal = true;
  std::optional<std::string> witness;
  std::string lhs;  // populated on failure
  std::string rhs;
};

struct LawReport {
  std::string subject;
  std::vector<LawInstance> instances;
  bool truncated = false;

  bool passed() const;
  std::size_t failures() const;
  const LawInstance* first_failure() const;
  void merge(const LawReport& other);
  nlohmann::json to_json() const;
};

struct LawOptions {
  /// Cap on generated law instances; iteration order is deterministic so the
  /// same prefix is always checked.
  std::size_t max_instances = 10000;
  /// Count whitespace-normalized agreement as a pass.
  bool accept_normalized = false;
};

/// Identity (left/right) on every generator, associativity on every
/// composable generator triple, and every declared relation, all evaluated on
/// the domain witnesses.
LawReport check_category_laws(const CategoryPresentation& presentation, const Semantics& semantics,
                              const LawOptions& options = {});

/// Validates the functor (throws Error(Errc::ill_formed_functor)), then checks
/// identity preservation, composition on every composable generator pair, and
/// preservation of every source relation, on target witnesses.
LawReport check_functor_laws(const FunctorDef& functor, const Semantics& target_semantics,
                             const LawOptions& options = {});

/// For every source generator f: X -> Y checks the naturality square
/// F(f) ; alpha_Y == alpha_X ; G(f) on witnesses of F(X).
LawReport check_naturality(const NatTransDef& alpha, const Semantics& target_semantics,
                           const LawOptions& options = {});

/// Records one comparison as a law instance. Exposed for the prompt-level
/// checks that live outside this module.
class LawRecorder {
 public:
  LawRecorder(LawReport& report, const LawOptions& options) : report_(report), options_(options) {}

  /// Returns false once the instance cap is reached.
  bool record(const std::string& law, const std::string& subject,
              const std::optional<std::string>& witness, const std::string& lhs,
              const std::string& rhs);
  bool record_structural(const std::string& law, const std::string& subject, bool ok,
                         const std::string& detail = {});
  bool full() const;

 private:
  LawReport& report_;
  const LawOptions& options_;
};

}  // namespace catprompt::cat
