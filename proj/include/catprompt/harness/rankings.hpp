#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "catprompt/harness/pack.hpp"
#include "json.hpp"

namespace catprompt::harness {

enum class Target { prompts, outputs };

std::string_view to_string(Target t) noexcept;
/// Accepts "prompts"/"outputs" and the singular forms. Throws
/// Error(Errc::schema) otherwise.
Target target_from_string(std::string_view name);

/// One annotator's strict ranking of one entry's candidates; ranking[0] is
/// the most suitable.
struct RankingRecord {
  std::string item_id;
  std::string annotator_id;
  Target target = Target::prompts;
  std::vector<std::string> ranking;

  /// 1-based rank of a candidate, 0 when absent.
  std::size_t rank_of(std::string_view candidate) const;
};

// Ranking files:
//
//   CSV with header  item_id,annotator_id,target,rank_1,...,rank_n
//     where rank_i holds the candidate id placed i-th.
//   JSON lines       {"item_id", "annotator_id", "target", "ranking": [ids]}
//     or             {"item_id", "annotator_id", "target", "ranks": {id: rank}}
//
// Row numbers in errors are 1-based file lines.

/// Structural checks only: required fields, no repeated candidate (a tie),
/// ranks forming 1..n, and no repeated (item, annotator, target). Throws
/// Error(Errc::schema), Error(Errc::duplicate) or Error(Errc::io).
std::vector<RankingRecord> parse_rankings(const std::filesystem::path& path);
std::vector<RankingRecord> parse_rankings_csv(std::string_view text);
std::vector<RankingRecord> parse_rankings_jsonl(std::string_view text);

/// Checks every record against the pack: the entry exists, every id is one
/// of its candidates (else Error(Errc::reference)), and every candidate is
/// ranked (else Error(Errc::schema) naming the missing ids).
void validate_rankings(const std::vector<RankingRecord>& records, const AnnotationPack& pack);

std::vector<RankingRecord> ingest_rankings(const std::filesystem::path& path,
                                           const AnnotationPack& pack);

std::string rankings_to_csv(const std::vector<RankingRecord>& records);

}  // namespace catprompt::harness
