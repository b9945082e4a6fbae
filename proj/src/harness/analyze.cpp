#include "catprompt/harness/analyze.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "catprompt/error.hpp"

namespace catprompt::harness {

using nlohmann::json;

std::string_view to_string(Pairing p) noexcept {
  return p == Pairing::per_record ? "per_record" : "per_item_median";
}

Pairing pairing_from_string(std::string_view name) {
  if (name == "per_record") return Pairing::per_record;
  if (name == "per_item_median") return Pairing::per_item_median;
  throw Error(Errc::config, "unknown pairing '" + std::string(name) + "'");
}

json TargetReport::to_json() const {
  json pj = json::array();
  for (const auto& [a, b] : pairs) pj.push_back({a, b});
  json j{{"target", to_string(target)},
         {"records", records},
         {"rank_matrix", matrix.to_json()},
         {"mean_ranks", mean_ranks},
         {"topk_share", {{"slots", share_slots}, {"any", share_any}}},
         {"pairs", std::move(pj)}};
  j["wilcoxon"] = wilcoxon ? wilcoxon->to_json() : json(nullptr);
  if (!wilcoxon_error.empty()) j["wilcoxon_error"] = wilcoxon_error;
  return j;
}

json AnalysisReport::to_json() const {
  json t = json::array();
  for (const auto& r : targets) t.push_back(r.to_json());
  return {{"schema_version", kSchemaVersion},
          {"task", task},
          {"options",
           {{"k", options.k},
            {"pairing", to_string(options.pairing)},
            {"wilcoxon_mode", options.mode == WilcoxonMode::exact_small ? "exact_small"
                              : options.mode == WilcoxonMode::exact     ? "exact"
                              : options.mode == WilcoxonMode::normal    ? "normal"
                                                                        : "automatic"}}},
          {"targets", std::move(t)}};
}

void AnalysisReport::write_bundle(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(Errc::io, "cannot write " + (dir / name).string());
    out << content;
  };
  write("report.json", to_json().dump(2) + "\n");
  for (const auto& t : targets) {
    write("rank_matrix_" + std::string(to_string(t.target)) + ".csv", t.matrix.to_csv());
  }
}

std::string AnalysisReport::summary() const {
  std::string out;
  char buf[256];
  for (const auto& t : targets) {
    std::snprintf(buf, sizeof buf, "%s %s: records=%zu top-%zu share meta=%.4f baseline=%.4f", task.c_str(),
                  std::string(to_string(t.target)).c_str(), t.records, options.k,
                  t.share_slots.at("meta"), t.share_slots.at("baseline"));
    out += buf;
    if (t.wilcoxon) {
      std::snprintf(buf, sizeof buf, " wilcoxon n=%zu W=%g p=%.6g (%s)", t.wilcoxon->n, t.wilcoxon->w,
                    t.wilcoxon->p, t.wilcoxon->method.c_str());
      out += buf;
    } else {
      out += " wilcoxon unavailable: " + t.wilcoxon_error;
    }
    out += '\n';
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Mean rank of meta candidates and of all the others, given a rank per id.
std::pair<double, double> group_means(const std::map<std::string, double>& ranks,
                                      const std::map<std::string, meta::CandidateKind>& kinds,
                                      const std::string& item) {
  double ms = 0, bs = 0;
  std::size_t mn = 0, bn = 0;
  for (const auto& [id, rank] : ranks) {
    if (kinds.at(id) == meta::CandidateKind::meta) {
      ms += rank;
      ++mn;
    } else {
      bs += rank;
      ++bn;
    }
  }
  if (mn == 0 || bn == 0) {
    throw Error(Errc::degenerate_input, "item '" + item + "' lacks meta or baseline candidates");
  }
  return {ms / static_cast<double>(mn), bs / static_cast<double>(bn)};
}

}  // namespace

AnalysisReport analyze(const std::vector<RankingRecord>& records, const AnnotationPack& pack,
                       const AnalyzeOptions& options) {
  if (records.empty()) throw Error(Errc::degenerate_input, "no ranking records to analyze");
  validate_rankings(records, pack);
  const KindIndex kinds = kind_index(pack);

  AnalysisReport report;
  report.task = pack.task;
  report.options = options;
  for (Target target : {Target::prompts, Target::outputs}) {
    TargetReport t;
    t.target = target;
    std::vector<const RankingRecord*> mine;
    for (const auto& r : records) {
      if (r.target == target) mine.push_back(&r);
    }
    if (mine.empty()) continue;
    t.records = mine.size();
    t.matrix = rank_matrix(records, target);
    t.mean_ranks = mean_ranks(records, target);
    for (Group g : {Group::meta, Group::baseline}) {
      std::string name(to_string(g));
      t.share_slots[name] = topk_share(records, kinds, target, g, options.k, ShareDefinition::slots);
      t.share_any[name] = topk_share(records, kinds, target, g, options.k, ShareDefinition::any);
    }

    if (options.pairing == Pairing::per_record) {
      for (const auto* r : mine) {
        std::map<std::string, double> ranks;
        for (std::size_t i = 0; i < r->ranking.size(); ++i) ranks[r->ranking[i]] = double(i + 1);
        t.pairs.push_back(group_means(ranks, kinds.at(r->item_id), r->item_id));
      }
    } else {
      // Entries in pack order so the pairs are reproducible.
      for (const auto& item : pack.items) {
        std::map<std::string, std::vector<double>> per_candidate;
        for (const auto* r : mine) {
          if (r->item_id != item.item_id) continue;
          for (std::size_t i = 0; i < r->ranking.size(); ++i) {
            per_candidate[r->ranking[i]].push_back(double(i + 1));
          }
        }
        if (per_candidate.empty()) continue;
        std::map<std::string, double> ranks;
        for (auto& [id, v] : per_candidate) ranks[id] = median(std::move(v));
        t.pairs.push_back(group_means(ranks, kinds.at(item.item_id), item.item_id));
      }
    }
    try {
      t.wilcoxon = wilcoxon_signed_rank(std::span<const std::pair<double, double>>(t.pairs), options.mode);
    } catch (const Error& e) {
      if (e.code() != Errc::degenerate_input) throw;
      t.wilcoxon_error = e.what();
    }
    report.targets.push_back(std::move(t));
  }
  return report;
}

}  // namespace catprompt::harness
