#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catprompt/harness/pack.hpp"
#include "catprompt/harness/rankings.hpp"
#include "catprompt/harness/stats.hpp"
#include "json.hpp"

namespace catprompt::harness {

enum class Pairing {
  /// One (meta mean rank, baseline mean rank) pair per record; annotators
  /// count as independent observations.
  per_record,
  /// Per entry, each candidate's median rank over annotators first, then one
  /// pair per entry.
  per_item_median,
};

std::string_view to_string(Pairing p) noexcept;
Pairing pairing_from_string(std::string_view name);

struct AnalyzeOptions {
  std::size_t k = 3;
  /// Exact for up to 20 pairs even with ties: uniform preference yields
  /// all-equal differences, which only the exact path handles faithfully.
  WilcoxonMode mode = WilcoxonMode::exact_small;
  Pairing pairing = Pairing::per_record;
};

struct TargetReport {
  Target target = Target::prompts;
  std::size_t records = 0;
  RankMatrix matrix;
  std::map<std::string, double> mean_ranks;
  std::map<std::string, double> share_slots;  // by group name
  std::map<std::string, double> share_any;
  std::vector<std::pair<double, double>> pairs;  // (meta, baseline) mean ranks
  std::optional<WilcoxonResult> wilcoxon;
  std::string wilcoxon_error;

  nlohmann::json to_json() const;
};

struct AnalysisReport {
  std::string task;
  AnalyzeOptions options;
  std::vector<TargetReport> targets;

  nlohmann::json to_json() const;
  /// report.json plus rank_matrix_<target>.csv for each target.
  void write_bundle(const std::filesystem::path& dir) const;
  /// Human-readable top-k shares and p-values, one line per target.
  std::string summary() const;
};

/// Rank matrices, mean ranks, top-k shares (both definitions, both groups)
/// and a Wilcoxon test of meta against baseline mean ranks, for prompts and
/// outputs separately. Validates records against the pack first. Throws
/// Error(Errc::degenerate_input) on an empty record list.
AnalysisReport analyze(const std::vector<RankingRecord>& records, const AnnotationPack& pack,
                       const AnalyzeOptions& options = {});

}  // namespace catprompt::harness
