#include "catprompt/harness/rankings.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "catprompt/error.hpp"
#include "catprompt/harness/csv.hpp"

namespace catprompt::harness {

std::string_view to_string(Target t) noexcept { return t == Target::prompts ? "prompts" : "outputs"; }

Target target_from_string(std::string_view name) {
  if (name == "prompts" || name == "prompt") return Target::prompts;
  if (name == "outputs" || name == "output") return Target::outputs;
  throw Error(Errc::schema, "unknown ranking target '" + std::string(name) + "'");
}

std::size_t RankingRecord::rank_of(std::string_view candidate) const {
  auto it = std::find(ranking.begin(), ranking.end(), candidate);
  return it == ranking.end() ? 0 : static_cast<std::size_t>(it - ranking.begin()) + 1;
}

namespace {

std::string at_row(std::size_t row) { return "row " + std::to_string(row) + ": "; }

void check_record(const RankingRecord& r, std::size_t row) {
  if (r.item_id.empty()) throw Error(Errc::schema, at_row(row) + "empty item_id");
  if (r.annotator_id.empty()) throw Error(Errc::schema, at_row(row) + "empty annotator_id");
  if (r.ranking.empty()) throw Error(Errc::schema, at_row(row) + "empty ranking");
  std::set<std::string> seen;
  for (const auto& id : r.ranking) {
    if (id.empty()) throw Error(Errc::schema, at_row(row) + "empty candidate id in ranking");
    if (!seen.insert(id).second) {
      throw Error(Errc::schema, at_row(row) + "candidate '" + id +
                                    "' is ranked twice; rankings must be strict, without ties");
    }
  }
}

class Collector {
 public:
  void add(RankingRecord r, std::size_t row) {
    check_record(r, row);
    auto key = std::make_tuple(r.item_id, r.annotator_id, r.target);
    auto [it, fresh] = rows_.emplace(key, row);
    if (!fresh) {
      throw Error(Errc::duplicate, at_row(row) + "item '" + r.item_id + "', annotator '" +
                                       r.annotator_id + "', target '" +
                                       std::string(to_string(r.target)) + "' already given at row " +
                                       std::to_string(it->second));
    }
    records_.push_back(std::move(r));
  }
  std::vector<RankingRecord> take() { return std::move(records_); }

 private:
  std::map<std::tuple<std::string, std::string, Target>, std::size_t> rows_;
  std::vector<RankingRecord> records_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<RankingRecord> parse_rankings_csv(std::string_view text) {
  auto rows = csv::parse(text);
  std::size_t h = 0;
  while (h < rows.size() && rows[h].empty()) ++h;
  if (h == rows.size()) return {};
  const auto& header = rows[h];
  if (header.size() < 4 || header[0] != "item_id" || header[1] != "annotator_id" ||
      header[2] != "target") {
    throw Error(Errc::schema, at_row(h + 1) + "header must be item_id,annotator_id,target,rank_1,...");
  }
  for (std::size_t i = 3; i < header.size(); ++i) {
    if (header[i] != "rank_" + std::to_string(i - 2)) {
      throw Error(Errc::schema, at_row(h + 1) + "column " + std::to_string(i + 1) + " should be rank_" +
                                    std::to_string(i - 2) + ", found '" + header[i] + "'");
    }
  }
  Collector out;
  for (std::size_t r = h + 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.empty()) continue;
    if (f.size() != header.size()) {
      throw Error(Errc::schema, at_row(r + 1) + "expected " + std::to_string(header.size()) +
                                    " fields, found " + std::to_string(f.size()));
    }
    RankingRecord rec{f[0], f[1], Target::prompts, {}};
    try {
      rec.target = target_from_string(f[2]);
    } catch (const Error& e) {
      throw Error(Errc::schema, at_row(r + 1) + e.what());
    }
    for (std::size_t i = 3; i < f.size(); ++i) {
      if (!f[i].empty()) rec.ranking.push_back(f[i]);
    }
    out.add(std::move(rec), r + 1);
  }
  return out.take();
}

std::vector<RankingRecord> parse_rankings_jsonl(std::string_view text) {
  Collector out;
  std::istringstream in{std::string(text)};
  std::size_t row = 0;
  for (std::string line; std::getline(in, line);) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    RankingRecord rec;
    try {
      auto j = nlohmann::json::parse(line);
      rec.item_id = j.at("item_id").get<std::string>();
      rec.annotator_id = j.at("annotator_id").get<std::string>();
      rec.target = target_from_string(j.at("target").get<std::string>());
      if (j.contains("ranking")) {
        rec.ranking = j.at("ranking").get<std::vector<std::string>>();
      } else {
        auto ranks = j.at("ranks").get<std::map<std::string, int>>();
        std::map<int, std::string> by_rank;
        for (const auto& [id, rank] : ranks) {
          auto [it, fresh] = by_rank.emplace(rank, id);
          if (!fresh) {
            throw Error(Errc::schema, at_row(row) + "candidates '" + it->second + "' and '" + id +
                                          "' share rank " + std::to_string(rank) +
                                          "; rankings must be strict, without ties");
          }
        }
        int expect = 1;
        for (const auto& [rank, id] : by_rank) {
          if (rank != expect++) {
            throw Error(Errc::schema, at_row(row) + "ranks must run 1.." + std::to_string(by_rank.size()) +
                                          ", found " + std::to_string(rank));
          }
          rec.ranking.push_back(id);
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::schema, at_row(row) + e.what());
    }
    out.add(std::move(rec), row);
  }
  return out.take();
}

std::vector<RankingRecord> parse_rankings(const std::filesystem::path& path) {
  std::string text = read_file(path);
  auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".ndjson") return parse_rankings_jsonl(text);
  if (ext == ".csv") return parse_rankings_csv(text);
  throw Error(Errc::schema, "ranking file " + path.string() + " must end in .csv or .jsonl");
}

void validate_rankings(const std::vector<RankingRecord>& records, const AnnotationPack& pack) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string where = "record " + std::to_string(i + 1) + " (item '" + r.item_id +
                              "', annotator '" + r.annotator_id + "'): ";
    const AnnotationItem* item = pack.item(r.item_id);
    if (item == nullptr) throw Error(Errc::reference, where + "no such entry in the pack");
    for (const auto& id : r.ranking) {
      if (item->candidate(id) == nullptr) {
        throw Error(Errc::reference, where + "unknown candidate '" + id + "'");
      }
    }
    std::string missing;
    for (const auto& c : item->candidates) {
      if (r.rank_of(c.id) == 0) missing += (missing.empty() ? "" : ", ") + c.id;
    }
    if (!missing.empty()) {
      throw Error(Errc::schema, where + "incomplete ranking, missing " + missing);
    }
  }
}

std::vector<RankingRecord> ingest_rankings(const std::filesystem::path& path,
                                           const AnnotationPack& pack) {
  auto records = parse_rankings(path);
  validate_rankings(records, pack);
  return records;
}

std::string rankings_to_csv(const std::vector<RankingRecord>& records) {
  std::size_t n = 0;
  for (const auto& r : records) n = std::max(n, r.ranking.size());
  std::vector<std::string> header{"item_id", "annotator_id", "target"};
  for (std::size_t i = 1; i <= n; ++i) header.push_back("rank_" + std::to_string(i));
  std::string out = csv::row(header);
  for (const auto& r : records) {
    std::vector<std::string> f{r.item_id, r.annotator_id, std::string(to_string(r.target))};
    f.insert(f.end(), r.ranking.begin(), r.ranking.end());
    f.resize(header.size());
    out += csv::row(f);
  }
  return out;
}

}  // namespace catprompt::harness
