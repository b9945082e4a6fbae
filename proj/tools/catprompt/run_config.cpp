#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "catprompt/error.hpp"
#include "catprompt/llm/live.hpp"
#include "catprompt/llm/mock.hpp"
#include "json.hpp"

namespace catprompt::cli {

namespace fs = std::filesystem;

namespace {

template <typename T>
void take(const nlohmann::json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config, std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

void RunConfig::merge_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::config, path.string() + ": " + e.what());
  }
  static const std::set<std::string> known{
      "backend", "inner",      "task", "template", "corpus", "sample_n", "seed_sample",
      "seed_shuffle", "budget_k", "max_output_tokens", "meta_count", "jobs", "out",
      "cache_dir", "mock_rules", "model", "k", "pairing"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw Error(Errc::config, "unknown config key '" + key + "'");
  }
  take(j, "backend", backend);
  take(j, "inner", inner);
  take(j, "task", task);
  take(j, "template", template_name);
  take(j, "corpus", corpus);
  take(j, "sample_n", sample_n);
  take(j, "seed_sample", seed_sample);
  take(j, "seed_shuffle", seed_shuffle);
  take(j, "budget_k", budget_k);
  take(j, "max_output_tokens", max_output_tokens);
  take(j, "meta_count", meta_count);
  take(j, "jobs", jobs);
  take(j, "out", out);
  take(j, "cache_dir", cache_dir);
  take(j, "mock_rules", mock_rules);
  take(j, "model", model);
  take(j, "k", k);
  take(j, "pairing", pairing);
}

void RunConfig::resolve_defaults(const fs::path& data_dir) {
  if (corpus.empty()) corpus = (data_dir / "corpus" / "synthetic.jsonl").string();
  if (cache_dir.empty()) cache_dir = (data_dir / "replay" / task).string();
  if (mock_rules.empty()) mock_rules = (data_dir / "mock" / "pipeline.json").string();
}

void RunConfig::validate() const {
  auto one_of = [](const std::string& v, std::initializer_list<const char*> allowed, const char* what) {
    for (const char* a : allowed) {
      if (v == a) return;
    }
    throw Error(Errc::config, std::string("invalid ") + what + " '" + v + "'");
  };
  one_of(backend, {"mock", "replay", "live"}, "backend");
  one_of(inner, {"mock", "live"}, "inner backend");
  one_of(task, {"ideation", "creativity"}, "task");
  one_of(pairing, {"per_record", "per_item_median"}, "pairing");
  if (jobs == 0) throw Error(Errc::config, "jobs must be at least 1");
  if (meta_count == 0) throw Error(Errc::config, "meta_count must be at least 1");
  if (backend == "live" || inner == "live") (void)llm::live_config_from_env();
}

fs::path default_data_dir() {
  if (const char* env = std::getenv("CATPROMPT_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return CATPROMPT_DATA_DIR;
}

BackendHandle make_backend(const RunConfig& config, bool record) {
  llm::BackendConfig bc;
  bc.budget.k = config.budget_k;
  bc.model = config.model;

  auto direct = [&](const std::string& kind) -> llm::BackendPtr {
    if (kind == "live") {
      llm::LiveConfig live = llm::live_config_from_env();
      live.max_in_flight = config.jobs;
      return std::make_shared<llm::LiveBackend>(live, bc);
    }
    return std::make_shared<llm::MockBackend>(llm::MockRuleSet::load(config.mock_rules), bc);
  };

  BackendHandle h;
  if (record) {
    h.replay = std::make_shared<llm::ReplayBackend>(config.cache_dir, llm::ReplayMode::record,
                                                    direct(config.inner), bc);
    h.backend = h.replay;
  } else if (config.backend == "replay") {
    h.replay = std::make_shared<llm::ReplayBackend>(config.cache_dir, llm::ReplayMode::strict,
                                                    nullptr, bc);
    h.backend = h.replay;
  } else {
    h.backend = direct(config.backend);
  }
  return h;
}

}  // namespace catprompt::cli
