#include "doctest.h"

#include <cstdlib>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "catprompt/harness/pack.hpp"
#include "catprompt/harness/rankings.hpp"
#include "commands.hpp"
#include "helpers.hpp"
#include "json.hpp"
#include "packs.hpp"

namespace fs = std::filesystem;
namespace cli = catprompt::cli;
namespace harness = catprompt::harness;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the installed binary with `args`; `env` is prepended verbatim.
Run run_cli(const std::vector<std::string>& args, const fs::path& dir, const std::string& env = "") {
  std::string cmd = env + " " + quote(CATPROMPT_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " >" + quote((dir / "stdout.txt").string()) + " 2>" + quote((dir / "stderr.txt").string());
  int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), testing::slurp(dir / "stdout.txt"), testing::slurp(dir / "stderr.txt")};
}

// Every entry ranked meta first, in pack order, for both targets.
void write_meta_first_rankings(const fs::path& pack_path, const fs::path& out) {
  auto pack = harness::AnnotationPack::load(pack_path);
  std::vector<harness::RankingRecord> records;
  for (const auto& item : pack.items) {
    std::vector<std::string> meta, rest;
    for (const auto& c : item.candidates) (c.kind == catprompt::meta::CandidateKind::meta ? meta : rest).push_back(c.id);
    meta.insert(meta.end(), rest.begin(), rest.end());
    for (auto t : {harness::Target::prompts, harness::Target::outputs}) records.push_back({item.item_id, "a1", t, meta});
  }
  testing::spit(out, harness::rankings_to_csv(records));
}

}  // namespace

TEST_CASE("laws exit codes follow the check outcome") {
  auto dir = testing::scratch("laws");
  auto good = run_cli({"laws", testing::fixture("prompt_category.json").string(), "--out", dir.string()}, dir);
  CHECK(good.code == 0);
  CHECK(good.out.find("FAIL") == std::string::npos);
  CHECK(fs::exists(dir / "laws_prompt_category.json"));

  auto bad = run_cli({"laws", testing::fixture("three_category_broken.json").string(), "--out", dir.string()}, dir);
  CHECK(bad.code == 1);
  CHECK(bad.out.find("counterexample") != std::string::npos);
  auto doc = nlohmann::json::parse(testing::slurp(dir / "laws_three_category_broken.json"));
  CHECK(doc.at("passed") == false);

  auto lemma = run_cli({"laws", testing::fixture("summ_expand_lemma1_missing.json").string(), "--out", dir.string()}, dir);
  CHECK(lemma.code == 1);

  CHECK(run_cli({"laws", (dir / "absent.json").string()}, dir).code == 2);
  testing::spit(dir / "odd.json", R"({"kind": "sheaf"})");
  CHECK(run_cli({"laws", (dir / "odd.json").string(), "--out", dir.string()}, dir).code == 2);
}

TEST_CASE("live backend without endpoint is refused before any request") {
  auto dir = testing::scratch("live");
  auto r = run_cli({"metagen", "--backend", "live", "--out", (dir / "o").string()}, dir,
                   "env -u LLM_ENDPOINT -u LLM_API_KEY");
  CHECK(r.code == 2);
  CHECK(r.err.find("LLM_ENDPOINT") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "o" / "pack.jsonl"));
}

TEST_CASE("replay against an empty cache exits 3 and lists the misses") {
  auto dir = testing::scratch("miss");
  fs::create_directories(dir / "cache");
  auto r = run_cli({"metagen", "--backend", "replay", "--cache", (dir / "cache").string(), "-n", "2", "--out",
                    (dir / "o").string()},
                   dir);
  CHECK(r.code == 3);
  CHECK(r.err.find("missing") != std::string::npos);
}

TEST_CASE("record fills a cache that replay then serves") {
  auto dir = testing::scratch("record");
  auto cache = (dir / "cache").string();
  auto rec = run_cli({"record", "--inner", "mock", "--cache", cache, "-n", "2", "--out", (dir / "a").string()}, dir);
  REQUIRE(rec.code == 0);
  auto rep = run_cli({"metagen", "--backend", "replay", "--cache", cache, "-n", "2", "--out", (dir / "b").string()}, dir);
  CHECK(rep.code == 0);
  CHECK(testing::slurp(dir / "a" / "pack.jsonl") == testing::slurp(dir / "b" / "pack.jsonl"));
}

TEST_CASE("config errors exit 2") {
  auto dir = testing::scratch("config");
  testing::spit(dir / "unknown.json", R"({"task": "ideation", "temperature": 0.7})");
  auto r = run_cli({"metagen", "--config", (dir / "unknown.json").string(), "--out", (dir / "o").string()}, dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("temperature") != std::string::npos);

  testing::spit(dir / "type.json", R"({"sample_n": "eight"})");
  CHECK(run_cli({"metagen", "--config", (dir / "type.json").string()}, dir).code == 2);
  CHECK(run_cli({"metagen", "--task", "poetry", "--out", (dir / "o").string()}, dir).code == 2);
  CHECK(run_cli({"metagen", "--jobs", "0", "--out", (dir / "o").string()}, dir).code == 2);
  CHECK(run_cli({"frobnicate"}, dir).code == 2);
}

TEST_CASE("analyze rejects rankings that do not match the pack") {
  auto dir = testing::scratch("mismatch");
  auto pack_path = testing::data_dir() / "preference" / "pack.jsonl";
  testing::spit(dir / "r.csv", "item_id,annotator_id,target,rank_1,rank_2,rank_3,rank_4,rank_5,rank_6\n"
                               "zz99,a1,prompts,m1,m2,m3,b1,b2,b3\n");
  auto r = run_cli({"analyze", pack_path.string(), (dir / "r.csv").string(), "--out", (dir / "o").string()}, dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("zz99") != std::string::npos);

  testing::spit(dir / "ghost.csv", "item_id,annotator_id,target,rank_1,rank_2,rank_3,rank_4,rank_5,rank_6\n"
                                   "e01,a1,prompts,m1,m2,m3,b1,b2,b9\n");
  CHECK(run_cli({"analyze", pack_path.string(), (dir / "ghost.csv").string(), "--out", (dir / "o").string()}, dir)
            .code == 2);
}

TEST_CASE("analyze prints the preference result") {
  auto dir = testing::scratch("analyze");
  auto pref = testing::data_dir() / "preference";
  auto r = run_cli({"analyze", (pref / "pack.jsonl").string(), (pref / "rankings_preferred.csv").string(), "--out",
                    (dir / "o").string()},
                   dir);
  REQUIRE(r.code == 0);
  auto report = nlohmann::json::parse(testing::slurp(dir / "o" / "report.json"));
  for (const auto& t : report.at("targets")) {
    CHECK(t.at("wilcoxon").at("p").get<double>() == doctest::Approx(2.0 / (1 << 20)).epsilon(1e-12));
    CHECK(t.at("wilcoxon").at("method") == "exact");
  }
  CHECK(fs::exists(dir / "o" / "rank_matrix_prompts.csv"));
  CHECK(fs::exists(dir / "o" / "rank_matrix_outputs.csv"));
}

TEST_CASE("pack writes a sheet and a blank rankings file") {
  auto dir = testing::scratch("pack");
  auto pack_path = testing::data_dir() / "preference" / "pack.jsonl";
  auto r = run_cli({"pack", pack_path.string(), "--annotators", "2", "--out", dir.string()}, dir);
  REQUIRE(r.code == 0);
  auto pack = harness::AnnotationPack::load(pack_path);
  auto csv = testing::slurp(dir / "rankings.csv");
  // Header plus one row per entry, annotator and target.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == long(1 + pack.items.size() * 2 * 2));
  CHECK(testing::slurp(dir / "sheet.txt").find("=== " + pack.items.front().item_id) != std::string::npos);
}

TEST_CASE("metagen then analyze is byte-identical across runs") {
  auto dir = testing::scratch("determinism");
  cli::RunConfig config;
  config.sample_n = 4;
  config.resolve_defaults(testing::data_dir());
  std::ostringstream sink;
  cli::Streams io{sink, sink};

  auto once = [&](const std::string& name) {
    auto base = dir / name;
    config.out = (base / "gen").string();
    REQUIRE(cli::cmd_metagen(config, io) == 0);
    write_meta_first_rankings(base / "gen" / "pack.jsonl", base / "rankings.csv");
    config.out = (base / "report").string();
    REQUIRE(cli::cmd_analyze(config, base / "gen" / "pack.jsonl", base / "rankings.csv", io) == 0);
    return base;
  };
  auto a = once("a");
  auto b = once("b");
  for (const char* f : {"gen/pack.jsonl", "gen/failures.jsonl", "report/report.json",
                        "report/rank_matrix_prompts.csv", "report/rank_matrix_outputs.csv"}) {
    CAPTURE(f);
    CHECK(testing::slurp(a / f) == testing::slurp(b / f));
  }
}

TEST_CASE("exit_code_for maps library errors") {
  using catprompt::Errc;
  using catprompt::Error;
  CHECK(cli::exit_code_for(Error(Errc::cache_miss, "x")) == 3);
  CHECK(cli::exit_code_for(Error(Errc::task_membership, "x")) == 1);
  CHECK(cli::exit_code_for(Error(Errc::schema, "x")) == 2);
  CHECK(cli::exit_code_for(std::runtime_error("x")) == 2);
}
