#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catprompt/cat/laws.hpp"
#include "catprompt/cat/presentation.hpp"
#include "catprompt/prompt/category.hpp"

namespace catprompt::prompt {

/// A task-category: a subcategory of the prompt category described by a
/// natural-language string, together with its inclusion functor.
struct TaskCategory {
  std::string name;
  std::string description;
  PromptCategoryPtr category;
  cat::FunctorDef inclusion;

  const cat::CategoryPresentation& presentation() const { return category->presentation(); }
};

using TaskCategoryPtr = std::shared_ptr<const TaskCategory>;

struct TaskOptions {
  CategoryOptions category;
  /// Check composable generator pairs as well as single generators when
  /// validating that outputs land in the codomain.
  bool check_composites = true;
};

/// Builds the task category and validates it.
///
/// Structure: arrows and identities live in the presentation, so closure
/// under composition holds by construction. With `ambient` given, every
/// object and arrow must appear there verbatim (same label, endpoints and
/// description) and the inclusion targets it; otherwise the inclusion targets
/// the task's own presentation.
///
/// Correct execution: every arrow evaluated on every domain witness, and every
/// composable pair on the first arrow's witnesses, must land in the codomain's
/// membership. Violations throw Error(Errc::task_membership) naming the arrow
/// and the witness.
TaskCategoryPtr make_task_category(std::string name, std::string description,
                                   std::vector<StrObject> objects, std::vector<PromptArrow> arrows,
                                   std::vector<RelationSpec> relations, llm::BackendPtr backend,
                                   const TaskOptions& options = {},
                                   const PromptCategory* ambient = nullptr);

/// Inversion instruction: "instead of {F}, do {FSTAR}".
inline constexpr std::string_view kInversionTemplate = "instead of {F}, do {FSTAR}";

struct DualityFunctor {
  cat::FunctorDef functor;
  /// Source arrow label -> rendered inversion instruction.
  std::map<std::string, std::string> instructions;
};

/// Maps every generator f: X -> Y of `src` to its reverse f*: F(Y) -> F(X)
/// in `dst`. `reverse` is keyed by source arrow description and names the
/// target description; a missing entry or an unknown target description
/// throws Error(Errc::missing_dual). Inconsistent object assignments throw
/// Error(Errc::ill_formed_functor). `inversion_template` must have exactly the
/// slots F and FSTAR. With `variance` covariant the reverse is expected to
/// keep direction, which is how a task maps trivially onto itself.
DualityFunctor build_duality_functor(const TaskCategory& src, const TaskCategory& dst,
                                     const std::map<std::string, std::string>& reverse,
                                     std::string_view inversion_template = kInversionTemplate,
                                     cat::Variance variance = cat::Variance::contravariant);

/// Checks that G after F sends every generator of the source back to itself
/// and every object back to itself.
cat::LawReport check_duality_roundtrip(const cat::FunctorDef& f, const cat::FunctorDef& g,
                                       const cat::LawOptions& options = {});

}  // namespace catprompt::prompt
