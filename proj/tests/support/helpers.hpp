#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catprompt/error.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return CATPROMPT_DATA_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return data_dir() / "fixtures" / name; }

/// A fresh, empty directory under the test build tree.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::path(CATPROMPT_TEST_TMP) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

/// Runs `f` and returns the error code it throws; fails the test if it
/// returns normally or throws something else.
template <typename F>
catprompt::Errc error_of(F&& f) {
  try {
    f();
  } catch (const catprompt::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a catprompt::Error");
}

template <typename F>
std::string message_of(F&& f) {
  try {
    f();
  } catch (const catprompt::Error& e) {
    return e.what();
  }
  throw std::runtime_error("expected a catprompt::Error");
}

/// Random printable text, optionally with newlines and braces.
inline std::string random_text(std::mt19937_64& rng, std::size_t max_len, const std::string& alphabet) {
  std::size_t len = rng() % (max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
  return s;
}

inline const std::string kWordAlphabet = "abcdefghij klmnop";
inline const std::string kWideAlphabet = "abcXYZ 019.,;!?\n\t{}()[]$\\\"'";

}  // namespace testing
