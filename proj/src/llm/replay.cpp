#include "catprompt/llm/replay.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>

#include "catprompt/error.hpp"
#include "json.hpp"

namespace catprompt::llm {

namespace {

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::io, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

nlohmann::json request_json(const CompletionRequest& request, const std::string& model) {
  // nlohmann::json objects are key-sorted, which makes the dump canonical.
  return {{"prompt", request.prompt},
          {"max_output_tokens", request.max_output_tokens},
          {"seed", request.seed},
          {"model", model}};
}

}  // namespace

std::string request_hash(const CompletionRequest& request, const std::string& model) {
  return sha256_hex(request_json(request, model).dump());
}

ReplayBackend::ReplayBackend(std::filesystem::path directory, ReplayMode mode, BackendPtr inner,
                             BackendConfig config)
    : Backend(std::move(config)),
      directory_(std::move(directory)),
      mode_(mode),
      inner_(std::move(inner)) {
  if (mode_ == ReplayMode::record) {
    if (!inner_) throw Error(Errc::config, "record mode needs a backend to forward to");
    std::filesystem::create_directories(directory_);
  }
}

std::vector<std::string> ReplayBackend::misses() const {
  std::lock_guard lock(mutex_);
  return {misses_.begin(), misses_.end()};
}

std::string ReplayBackend::do_complete(const CompletionRequest& request) {
  const std::string hash = request_hash(request, config().model);
  const auto file = directory_ / (hash + ".json");

  {
    std::ifstream in(file);
    if (in) {
      try {
        auto j = nlohmann::json::parse(in);
        return j.at("response").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::schema, "corrupt cache entry " + file.string() + ": " + e.what());
      }
    }
  }

  if (mode_ == ReplayMode::strict) {
    std::lock_guard lock(mutex_);
    misses_.insert(hash);
    throw Error(Errc::cache_miss, "cache miss " + hash);
  }

  std::string response = inner_->complete(request);
  nlohmann::json entry{{"schema_version", 1},
                       {"hash", hash},
                       {"request", request_json(request, config().model)},
                       {"response", response}};
  std::lock_guard lock(mutex_);
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write cache entry " + tmp.string());
    out << entry.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, file);
  return response;
}

}  // namespace catprompt::llm
