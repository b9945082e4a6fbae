#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "catprompt/harness/pack.hpp"
#include "catprompt/harness/rankings.hpp"
#include "json.hpp"

namespace catprompt::harness {

enum class WilcoxonMode {
  /// Exact when n <= 20 and there are no ties, normal approximation otherwise.
  automatic,
  exact,
  normal,
  /// Exact when n <= 20, ties or not.
  exact_small,
};

struct WilcoxonResult {
  std::size_t n = 0;  // after dropping zeros
  std::size_t zeros_dropped = 0;
  bool ties = false;
  double w_plus = 0;
  double w_minus = 0;
  double w = 0;  // min(W+, W-)
  double p = 1;  // two-sided
  std::string method;  // "exact" or "normal"

  nlohmann::json to_json() const;
};

/// Average ranks of |d| over the nonzero differences, in input order.
std::vector<double> signed_rank_magnitudes(std::span<const double> nonzero);

/// d = a - b per pair; zero differences are dropped, ties get average ranks.
/// Exact p = min(1, 2 P(W+ <= W)) from the null distribution of W+ (each
/// sign equally likely), which also holds with tied ranks. The normal
/// approximation uses the tie-corrected variance and a 0.5 continuity
/// correction. Throws Error(Errc::degenerate_input) when every difference is
/// zero or the input is empty.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    WilcoxonMode mode = WilcoxonMode::automatic);
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    WilcoxonMode mode = WilcoxonMode::automatic);

/// Candidate id -> kind for each entry of a pack.
using KindIndex = std::map<std::string, std::map<std::string, meta::CandidateKind>>;
KindIndex kind_index(const AnnotationPack& pack);

/// Rows are candidate ids, columns ranks 1..n; cells count how often the
/// candidate got that rank over the records of `target`.
struct RankMatrix {
  std::vector<std::string> candidates;
  std::vector<std::vector<std::size_t>> counts;
  std::size_t records = 0;

  std::vector<std::vector<double>> frequencies() const;  // each row sums to 1
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Candidate rows in canonical order (meta, baseline, task description, each
/// numbered).
RankMatrix rank_matrix(const std::vector<RankingRecord>& records, Target target);

enum class Group { meta, baseline };
std::string_view to_string(Group g) noexcept;

enum class ShareDefinition {
  /// Share of all top-k positions, over all records, held by the group.
  slots,
  /// Share of records with at least one group candidate in the top k.
  any,
};

/// The baseline group is every candidate that is not meta-generated. Throws
/// Error(Errc::config) when k is 0 or exceeds a record's candidate count and
/// Error(Errc::degenerate_input) when no record has the target.
double topk_share(const std::vector<RankingRecord>& records, const KindIndex& kinds, Target target,
                  Group group, std::size_t k, ShareDefinition definition = ShareDefinition::slots);

/// Mean rank per candidate id over the records of `target`.
std::map<std::string, double> mean_ranks(const std::vector<RankingRecord>& records, Target target);

}  // namespace catprompt::harness
