#pragma once

#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "catprompt/llm/backend.hpp"

namespace catprompt::llm {

/// Hex SHA-256 over the canonical JSON of (prompt, max output, seed, model).
std::string request_hash(const CompletionRequest& request, const std::string& model);

enum class ReplayMode {
  strict,  // cache only; a miss throws Error(Errc::cache_miss)
  record,  // serve hits, forward misses to the inner backend and store them
};

/// Record/replay cache: one JSON file per request hash in `directory`.
class ReplayBackend final : public Backend {
 public:
  /// `inner` may be null in strict mode. The cache key uses `config.model`.
  ReplayBackend(std::filesystem::path directory, ReplayMode mode, BackendPtr inner,
                BackendConfig config);

  std::string kind() const override { return mode_ == ReplayMode::strict ? "replay" : "record"; }

  /// Hashes that missed in strict mode, sorted.
  std::vector<std::string> misses() const;
  const std::filesystem::path& directory() const noexcept { return directory_; }

 protected:
  std::string do_complete(const CompletionRequest& request) override;

 private:
  std::filesystem::path directory_;
  ReplayMode mode_;
  BackendPtr inner_;
  mutable std::mutex mutex_;
  std::set<std::string> misses_;
};

}  // namespace catprompt::llm
