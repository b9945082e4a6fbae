#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "catprompt/harness/corpus.hpp"
#include "catprompt/llm/backend.hpp"
#include "catprompt/meta/engine.hpp"
#include "catprompt/meta/template.hpp"
#include "json.hpp"

namespace catprompt::harness {

inline constexpr int kSchemaVersion = 1;

struct Candidate {
  /// Stable across entries: m1.. for meta, b1.. for baselines, t1.. for task
  /// descriptions, in canonical order.
  std::string id;
  meta::CandidateKind kind = meta::CandidateKind::baseline;
  std::string prompt;
  std::string output;
  /// Empty unless the output could not be produced.
  std::string error;
};

struct AnnotationItem {
  std::string item_id;
  std::string context;
  /// Presentation order: a permutation of the canonical order drawn from
  /// `shuffle_seed`.
  std::vector<Candidate> candidates;
  std::uint64_t shuffle_seed = 0;
  /// Every prompt the meta-prompt proposed, before selection.
  std::vector<std::string> generated;

  const Candidate* candidate(std::string_view id) const;
  nlohmann::json to_json() const;
  static AnnotationItem from_json(const nlohmann::json& j);
};

struct PackFailure {
  std::string item_id;
  std::string error;
};

struct AnnotationPack {
  std::string task;
  std::string template_name;
  std::vector<AnnotationItem> items;
  std::vector<PackFailure> failures;

  const AnnotationItem* item(std::string_view id) const;

  /// One JSON object per entry, each carrying schema_version, task and
  /// template.
  std::string to_jsonl() const;
  static AnnotationPack from_jsonl(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static AnnotationPack load(const std::filesystem::path& path);
};

struct PackOptions {
  std::uint64_t shuffle_seed = 0;
  /// Meta-generated prompts kept per entry, first in list order.
  std::size_t meta_count = 3;
  meta::GenerationOptions generation;
  meta::ExecutionOptions execution;
};

/// Per entry: run the meta-prompt on the item's context, keep the first
/// `meta_count` prompts, add the binding's fixed candidates, execute all of
/// them on the context and shuffle. An entry whose generation fails is
/// recorded in `failures` and left out; the rest of the pack is still built.
AnnotationPack build_annotation_pack(const std::vector<CorpusItem>& items,
                                     const meta::TaskBinding& binding,
                                     const meta::MetaPromptTemplate& t, llm::Backend& backend,
                                     const PackOptions& options = {});

}  // namespace catprompt::harness
