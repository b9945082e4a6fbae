#include "catprompt/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "catprompt/error.hpp"
#include "catprompt/harness/csv.hpp"

namespace catprompt::harness {

using nlohmann::json;

json WilcoxonResult::to_json() const {
  return {{"n", n},       {"zeros_dropped", zeros_dropped}, {"ties", ties}, {"w_plus", w_plus},
          {"w_minus", w_minus}, {"w", w}, {"p", p}, {"method", method}};
}

std::vector<double> signed_rank_magnitudes(std::span<const double> nonzero) {
  const std::size_t n = nonzero.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(nonzero[a]) < std::fabs(nonzero[b]);
  });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(nonzero[order[j + 1]]) == std::fabs(nonzero[order[i]])) ++j;
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

// P(W+ <= w) under the null, by counting sign assignments over doubled ranks
// so that average ranks stay integral.
double exact_lower_tail(const std::vector<double>& ranks, double w) {
  std::vector<long> r2(ranks.size());
  long total = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    r2[i] = std::lround(2.0 * ranks[i]);
    total += r2[i];
  }
  std::vector<double> dist(static_cast<std::size_t>(total) + 1, 0.0);
  dist[0] = 1.0;
  long reach = 0;
  for (long r : r2) {
    for (long s = reach; s >= 0; --s) {
      if (dist[s] != 0.0) dist[s + r] += dist[s];
    }
    reach += r;
  }
  const long w2 = std::lround(2.0 * w);
  double count = 0;
  for (long s = 0; s <= std::min(w2, total); ++s) count += dist[s];
  return std::ldexp(count, -static_cast<int>(ranks.size()));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences, WilcoxonMode mode) {
  WilcoxonResult res;
  std::vector<double> d;
  for (double x : differences) {
    if (x == 0.0) {
      ++res.zeros_dropped;
    } else {
      d.push_back(x);
    }
  }
  if (d.empty()) {
    throw Error(Errc::degenerate_input, "Wilcoxon test needs at least one nonzero difference, got " +
                                            std::to_string(differences.size()) + " zero(s)");
  }
  res.n = d.size();
  auto ranks = signed_rank_magnitudes(d);
  for (std::size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? res.w_plus : res.w_minus) += ranks[i];
  res.w = std::min(res.w_plus, res.w_minus);

  // Tie groups of |d|, for the tie flag and the variance correction.
  std::vector<double> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    double t = static_cast<double>(j - i);
    if (t > 1) res.ties = true;
    tie_term += t * t * t - t;
    i = j;
  }

  bool exact = false;
  switch (mode) {
    case WilcoxonMode::automatic: exact = res.n <= 20 && !res.ties; break;
    case WilcoxonMode::exact: exact = true; break;
    case WilcoxonMode::normal: exact = false; break;
    case WilcoxonMode::exact_small: exact = res.n <= 20; break;
  }

  if (exact) {
    res.method = "exact";
    res.p = std::min(1.0, 2.0 * exact_lower_tail(ranks, res.w));
  } else {
    res.method = "normal";
    const double n = static_cast<double>(res.n);
    const double mean = n * (n + 1) / 4.0;
    const double var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0;
    if (var <= 0) {
      res.p = 1.0;
    } else {
      double z = std::max(0.0, std::fabs(res.w_plus - mean) - 0.5) / std::sqrt(var);
      res.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
  }
  return res;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    WilcoxonMode mode) {
  std::vector<double> d;
  d.reserve(pairs.size());
  for (const auto& [a, b] : pairs) d.push_back(a - b);
  return wilcoxon_signed_rank(std::span<const double>(d), mode);
}

KindIndex kind_index(const AnnotationPack& pack) {
  KindIndex out;
  for (const auto& item : pack.items) {
    auto& m = out[item.item_id];
    for (const auto& c : item.candidates) m[c.id] = c.kind;
  }
  return out;
}

namespace {

// m1 < m2 < ... < b1 < ... < t1 < ...; anything else after, by name.
bool canonical_less(const std::string& a, const std::string& b) {
  auto key = [](const std::string& s) {
    static const std::string order = "mbt";
    std::size_t group = order.size();
    long num = 0;
    if (s.size() > 1 && order.find(s[0]) != std::string::npos &&
        std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      group = order.find(s[0]);
      num = std::stol(s.substr(1));
    }
    return std::make_tuple(group, num, s);
  };
  return key(a) < key(b);
}

}  // namespace

std::vector<std::vector<double>> RankMatrix::frequencies() const {
  std::vector<std::vector<double>> out;
  for (const auto& row : counts) {
    double total = std::accumulate(row.begin(), row.end(), 0.0);
    std::vector<double> f(row.size(), 0.0);
    if (total > 0) {
      for (std::size_t i = 0; i < row.size(); ++i) f[i] = static_cast<double>(row[i]) / total;
    }
    out.push_back(std::move(f));
  }
  return out;
}

json RankMatrix::to_json() const {
  return {{"candidates", candidates}, {"counts", counts}, {"frequencies", frequencies()},
          {"records", records}};
}

std::string RankMatrix::to_csv() const {
  std::size_t width = counts.empty() ? 0 : counts.front().size();
  std::vector<std::string> header{"candidate"};
  for (std::size_t r = 1; r <= width; ++r) header.push_back("rank_" + std::to_string(r));
  std::string out = csv::row(header);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<std::string> f{candidates[i]};
    for (auto c : counts[i]) f.push_back(std::to_string(c));
    out += csv::row(f);
  }
  return out;
}

RankMatrix rank_matrix(const std::vector<RankingRecord>& records, Target target) {
  RankMatrix m;
  std::size_t width = 0;
  std::vector<std::string> ids;
  for (const auto& r : records) {
    if (r.target != target) continue;
    ++m.records;
    width = std::max(width, r.ranking.size());
    for (const auto& id : r.ranking) {
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
  }
  std::sort(ids.begin(), ids.end(), canonical_less);
  m.candidates = ids;
  m.counts.assign(ids.size(), std::vector<std::size_t>(width, 0));
  for (const auto& r : records) {
    if (r.target != target) continue;
    for (std::size_t pos = 0; pos < r.ranking.size(); ++pos) {
      auto row = std::find(ids.begin(), ids.end(), r.ranking[pos]) - ids.begin();
      ++m.counts[row][pos];
    }
  }
  return m;
}

std::string_view to_string(Group g) noexcept { return g == Group::meta ? "meta" : "baseline"; }

double topk_share(const std::vector<RankingRecord>& records, const KindIndex& kinds, Target target,
                  Group group, std::size_t k, ShareDefinition definition) {
  if (k == 0) throw Error(Errc::config, "top-k share needs k >= 1");
  std::size_t hits = 0, total = 0;
  for (const auto& r : records) {
    if (r.target != target) continue;
    if (k > r.ranking.size()) {
      throw Error(Errc::config, "k = " + std::to_string(k) + " exceeds the " +
                                    std::to_string(r.ranking.size()) + " candidates of item '" +
                                    r.item_id + "'");
    }
    auto item = kinds.find(r.item_id);
    if (item == kinds.end()) throw Error(Errc::reference, "no kinds for item '" + r.item_id + "'");
    std::size_t in_group = 0;
    for (std::size_t i = 0; i < k; ++i) {
      auto kind = item->second.find(r.ranking[i]);
      if (kind == item->second.end()) {
        throw Error(Errc::reference, "item '" + r.item_id + "' has no candidate '" + r.ranking[i] + "'");
      }
      bool is_meta = kind->second == meta::CandidateKind::meta;
      if (is_meta == (group == Group::meta)) ++in_group;
    }
    if (definition == ShareDefinition::slots) {
      hits += in_group;
      total += k;
    } else {
      hits += in_group > 0 ? 1 : 0;
      total += 1;
    }
  }
  if (total == 0) {
    throw Error(Errc::degenerate_input, "no " + std::string(to_string(target)) + " records");
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::map<std::string, double> mean_ranks(const std::vector<RankingRecord>& records, Target target) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& r : records) {
    if (r.target != target) continue;
    for (std::size_t i = 0; i < r.ranking.size(); ++i) {
      auto& [sum, n] = acc[r.ranking[i]];
      sum += static_cast<double>(i + 1);
      ++n;
    }
  }
  std::map<std::string, double> out;
  for (const auto& [id, sn] : acc) out[id] = sn.first / static_cast<double>(sn.second);
  return out;
}

}  // namespace catprompt::harness
