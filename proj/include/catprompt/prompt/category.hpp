#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "catprompt/cat/laws.hpp"
#include "catprompt/cat/monoidal.hpp"
#include "catprompt/cat/presentation.hpp"
#include "catprompt/llm/backend.hpp"
#include "catprompt/prompt/objects.hpp"

namespace catprompt::prompt {

struct CategoryOptions {
  std::size_t max_output_tokens = 256;
  std::int64_t seed = 0;
};

/// A pair of generator label lists asserted to be equal composites. An empty
/// list is the identity at the other side's domain.
struct RelationSpec {
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;
};

/// Evaluates arrows by rendering their description and calling a backend.
class BackendSemantics final : public cat::Semantics {
 public:
  BackendSemantics(llm::BackendPtr backend, CategoryOptions options,
                   std::map<std::string, std::vector<std::string>> witnesses);

  std::string apply(const cat::Arrow& arrow, const std::string& input) const override;
  std::vector<std::string> witnesses(const cat::ObjectId& object) const override;

  std::string complete(const std::string& prompt) const;
  const llm::BackendPtr& backend() const noexcept { return backend_; }

 private:
  llm::BackendPtr backend_;
  CategoryOptions options_;
  std::map<std::string, std::vector<std::string>> witnesses_;
};

/// A finite piece of the prompt category: string objects, prompt arrows,
/// concatenation as tensor with the empty string as unit, and "Return {X}"
/// as the evaluated identity on every object. Immutable once built.
class PromptCategory {
 public:
  /// Throws Error(Errc::construction) if a witness exceeds the budget or an
  /// arrow's rendering on a domain witness cannot fit prompt plus output in k.
  static std::shared_ptr<const PromptCategory> make(std::string name,
                                                    std::vector<StrObject> objects,
                                                    std::vector<PromptArrow> arrows,
                                                    std::vector<RelationSpec> relations,
                                                    llm::BackendPtr backend,
                                                    CategoryOptions options = {});

  const std::string& name() const noexcept { return presentation_->name(); }
  const cat::CategoryPresentation& presentation() const noexcept { return *presentation_; }
  const cat::PresentationPtr& presentation_ptr() const noexcept { return presentation_; }
  const BackendSemantics& semantics() const noexcept { return *semantics_; }
  const llm::BackendPtr& backend() const noexcept { return semantics_->backend(); }
  const CategoryOptions& options() const noexcept { return options_; }

  const std::vector<StrObject>& objects() const noexcept { return objects_; }
  const std::vector<PromptArrow>& arrows() const noexcept { return arrows_; }
  const StrObject& object(std::string_view label) const;
  const PromptArrow& arrow(std::string_view label) const;

  std::string apply(const PromptArrow& arrow, const std::string& input) const;
  std::string complete(const std::string& prompt) const { return semantics_->complete(prompt); }

  /// The identity prompt on `object`, evaluated through the backend.
  std::string apply_identity(const std::string& input) const;

  /// Tensor = concatenation, unit = empty string; unitors and associator are
  /// realized by the identity prompt.
  cat::MonoidalStructure monoidal() const;

  /// All witnesses of all objects, deduplicated, in declaration order.
  std::vector<std::string> all_witnesses() const;

  /// Category laws, evaluated identity laws, monoidal laws, and the terminal
  /// map "{X} (x) EOS" landing on the empty string for every witness.
  cat::LawReport check_laws(const cat::LawOptions& options = {}) const;

 private:
  PromptCategory() = default;

  cat::PresentationPtr presentation_;
  std::shared_ptr<const BackendSemantics> semantics_;
  std::vector<StrObject> objects_;
  std::vector<PromptArrow> arrows_;
  CategoryOptions options_;
};

using PromptCategoryPtr = std::shared_ptr<const PromptCategory>;

}  // namespace catprompt::prompt
