#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catprompt/cat/laws.hpp"
#include "catprompt/cat/presentation.hpp"
#include "catprompt/llm/backend.hpp"
#include "catprompt/prompt/task.hpp"
#include "json.hpp"

namespace catprompt::prompt {

/// Admissible rewrites (paraphrases, inversions, translations) per string.
/// Every string is also a rewrite of itself, listed or not.
struct RewriteTable {
  std::map<std::string, std::vector<std::string>> entries;

  RewriteTable& add(const std::string& s, std::vector<std::string> rewrites);

  /// {"rewrites": {s: [r, ...]}}
  static RewriteTable from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Extra rewrites for a string, e.g. asked of a backend.
using RewriteProposer = std::function<std::vector<std::string>(const std::string&)>;

/// `s` first, then its table entries and any proposals, deduplicated in order.
std::vector<std::string> rewrite_hom(const RewriteTable& table, const std::string& s,
                                     const RewriteProposer& proposer = {});

/// Asks `backend` for rewrites of `s`, one per line; blank lines are dropped.
RewriteProposer backend_proposer(llm::BackendPtr backend, std::size_t max_output_tokens = 256);

struct Lemma1Options {
  /// Off by default: the search stays inside the table and is deterministic.
  RewriteProposer proposer;
  cat::LawOptions laws;
};

struct Lemma1Result {
  /// Every (f1, f2) pair of description rewrites has a connecting g.
  bool hypothesis_holds = false;
  /// The first pair (rewrite of the first description, rewrite of the
  /// second) with no connecting rewrite.
  std::optional<std::pair<std::string, std::string>> counterexample;
  std::size_t pairs_checked = 0;

  /// Present when the hypothesis holds and an endpoint-consistent functor
  /// could be assembled from the rewrites of the arrow descriptions.
  std::optional<cat::FunctorDef> functor;
  cat::LawReport laws;
  std::string detail;

  bool ok() const { return hypothesis_holds && functor.has_value() && laws.passed(); }
  nlohmann::json to_json() const;
};

/// Checks the rewrite hypothesis between the descriptions of two tasks and,
/// when it holds, builds a functor t1 -> t2 by sending each arrow of t1 to an
/// arrow of t2 whose description is one of its rewrites (searching for an
/// assignment that keeps endpoints consistent), then validates the functor
/// on t2's witnesses.
Lemma1Result check_lemma1(const TaskCategory& t1, const TaskCategory& t2, const RewriteTable& rw,
                          const Lemma1Options& options = {});

}  // namespace catprompt::prompt
