#include "catprompt/harness/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "catprompt/error.hpp"
#include "catprompt/harness/rng.hpp"

namespace catprompt::harness {

namespace fs = std::filesystem;

std::string_view to_string(TaskKind kind) noexcept {
  return kind == TaskKind::ideation ? "ideation" : "creativity";
}

TaskKind task_kind_from_string(std::string_view name) {
  if (name == "ideation") return TaskKind::ideation;
  if (name == "creativity") return TaskKind::creativity;
  throw Error(Errc::config, "unknown task '" + std::string(name) + "' (ideation or creativity)");
}

nlohmann::json CorpusItem::to_json() const {
  return {{"id", id}, {"source", source}, {"fields", fields}};
}

CorpusItem CorpusItem::from_json(const nlohmann::json& j) {
  try {
    return CorpusItem{j.at("id").get<std::string>(), j.value("source", std::string()),
                      j.at("fields").get<std::map<std::string, std::string>>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema, std::string("corpus item: ") + e.what());
  }
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(ws) - b + 1));
}

std::string join(const std::vector<std::string>& v, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (!out.empty()) out += ' ';
    out += v[i];
  }
  return out;
}

}  // namespace

std::vector<Document> read_documents(const fs::path& path) {
  std::vector<Document> docs;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      docs.push_back({f.stem().string(), path.filename().string(), trim(read_file(f))});
    }
    return docs;
  }

  const std::string content = read_file(path);
  const std::string stem = path.stem().string();
  std::istringstream in(content);
  auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".ndjson") {
    std::size_t row = 0;
    for (std::string line; std::getline(in, line);) {
      ++row;
      if (blank(line)) continue;
      try {
        auto j = nlohmann::json::parse(line);
        docs.push_back({j.at("id").get<std::string>(), j.value("source", stem),
                        j.at("text").get<std::string>()});
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::schema, path.string() + ":" + std::to_string(row) + ": " + e.what());
      }
    }
    return docs;
  }

  std::string para;
  auto flush = [&] {
    if (!para.empty()) docs.push_back({stem + "-" + std::to_string(docs.size() + 1), stem, para});
    para.clear();
  };
  for (std::string line; std::getline(in, line);) {
    if (blank(line)) {
      flush();
    } else {
      if (!para.empty()) para += ' ';
      para += trim(line);
    }
  }
  flush();
  return docs;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < text.size() && std::string_view("\"')]").find(text[j]) != std::string_view::npos) ++j;
    if (j == text.size() || is_space(text[j])) {
      std::string s = trim(text.substr(start, j - start));
      if (!s.empty()) out.push_back(std::move(s));
      start = j;
      i = j - 1;
    }
  }
  std::string tail = trim(text.substr(std::min(start, text.size())));
  if (!tail.empty()) out.push_back(std::move(tail));
  return out;
}

CorpusItem split_document(const Document& doc, TaskKind kind, std::mt19937_64& rng) {
  auto s = split_sentences(doc.text);
  CorpusItem item{doc.id, doc.source, {}};
  if (kind == TaskKind::creativity) {
    if (s.size() < 2) {
      throw Error(Errc::too_short, "document '" + doc.id + "' has " + std::to_string(s.size()) +
                                       " sentence(s); creativity needs 2 to split");
    }
    std::size_t b = 1 + uniform_below(rng, s.size() - 1);
    item.fields["LEFT"] = join(s, 0, b);
    item.fields["RIGHT"] = join(s, b, s.size());
  } else {
    if (s.size() < 3) {
      throw Error(Errc::too_short, "document '" + doc.id + "' has " + std::to_string(s.size()) +
                                       " sentence(s); ideation needs 3");
    }
    std::size_t c = 1 + uniform_below(rng, s.size() - 2);
    item.fields["LEFT"] = join(s, 0, c);
    item.fields["CONTENT"] = s[c];
    item.fields["RIGHT"] = join(s, c + 1, s.size());
  }
  return item;
}

std::vector<CorpusItem> sample_corpus(const std::vector<Document>& docs, TaskKind kind,
                                      std::size_t n, std::uint64_t seed) {
  if (n > docs.size()) {
    throw Error(Errc::config, "asked for " + std::to_string(n) + " items but the corpus has only " +
                                  std::to_string(docs.size()));
  }
  std::mt19937_64 rng(seed);
  std::vector<CorpusItem> out;
  for (std::size_t i : sample_indices(docs.size(), n, rng)) {
    out.push_back(split_document(docs[i], kind, rng));
  }
  return out;
}

std::vector<CorpusItem> ingest_corpus(const fs::path& path, TaskKind kind, std::size_t n,
                                      std::uint64_t seed) {
  return sample_corpus(read_documents(path), kind, n, seed);
}

}  // namespace catprompt::harness
