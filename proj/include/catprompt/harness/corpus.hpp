#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace catprompt::harness {

enum class TaskKind { ideation, creativity };

std::string_view to_string(TaskKind kind) noexcept;
/// Throws Error(Errc::config) for anything but "ideation" or "creativity".
TaskKind task_kind_from_string(std::string_view name);

struct Document {
  std::string id;
  std::string source;
  std::string text;
};

/// A sampled context: LEFT/RIGHT for creativity, LEFT/CONTENT/RIGHT for
/// ideation.
struct CorpusItem {
  std::string id;
  std::string source;
  std::map<std::string, std::string> fields;

  nlohmann::json to_json() const;
  static CorpusItem from_json(const nlohmann::json& j);
};

/// Reads documents from a JSON-lines file ({"id", "text", "source"?} per
/// line), a directory of .txt files (one document each), or a plain text file
/// (documents separated by blank lines). Throws Error(Errc::io) or
/// Error(Errc::schema).
std::vector<Document> read_documents(const std::filesystem::path& path);

/// Sentence split on ., ! or ? (optionally followed by closing quotes or
/// brackets) and whitespace. Sentences keep their punctuation.
std::vector<std::string> split_sentences(std::string_view text);

/// Creativity: LEFT is the first b sentences and RIGHT the rest for a seeded
/// b in [1, s-1]. Ideation: CONTENT is one seeded sentence with at least one
/// sentence on each side. Throws Error(Errc::too_short) when the document has
/// fewer sentences than that needs.
CorpusItem split_document(const Document& doc, TaskKind kind, std::mt19937_64& rng);

/// Samples `n` documents with `seed` and splits each. Throws Error(Errc::config)
/// when `n` exceeds the corpus, naming the available count.
std::vector<CorpusItem> ingest_corpus(const std::filesystem::path& path, TaskKind kind,
                                      std::size_t n, std::uint64_t seed);

std::vector<CorpusItem> sample_corpus(const std::vector<Document>& docs, TaskKind kind,
                                      std::size_t n, std::uint64_t seed);

}  // namespace catprompt::harness
