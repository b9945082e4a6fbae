#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "catprompt/llm/backend.hpp"
#include "catprompt/llm/replay.hpp"

namespace catprompt::cli {

/// Everything a pipeline command needs. Loaded from a JSON file (same key
/// names), then overridden by flags. Secrets come only from the environment.
struct RunConfig {
  std::string backend = "mock";  // mock | replay | live
  std::string inner = "mock";    // what `record` forwards misses to: mock | live
  std::string task = "ideation";
  std::string template_name = "full";
  std::string corpus;
  std::size_t sample_n = 8;
  std::uint64_t seed_sample = 1;
  std::uint64_t seed_shuffle = 1;
  std::size_t budget_k = 4096;
  std::size_t max_output_tokens = 512;
  std::size_t meta_count = 3;
  std::size_t jobs = 4;
  std::string out = "out";
  std::string cache_dir;
  std::string mock_rules;
  std::string model = "mock";
  // analyze
  std::size_t k = 3;
  std::string pairing = "per_record";

  /// Throws Error(Errc::config) on unknown keys or wrong types.
  void merge_json_file(const std::filesystem::path& path);

  /// Fills defaults that depend on the data directory and the task.
  void resolve_defaults(const std::filesystem::path& data_dir);

  /// Checks enums and, for the live backend, that the environment is set,
  /// before anything is sent.
  void validate() const;
};

struct BackendHandle {
  llm::BackendPtr backend;
  /// Set for replay and record, to report misses.
  std::shared_ptr<llm::ReplayBackend> replay;
};

/// replay = strict cache; record = cache in front of `inner`.
BackendHandle make_backend(const RunConfig& config, bool record = false);

std::filesystem::path default_data_dir();

}  // namespace catprompt::cli
