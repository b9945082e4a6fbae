#include "catprompt/harness/pack.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "catprompt/error.hpp"
#include "catprompt/harness/rng.hpp"

namespace catprompt::harness {

using nlohmann::json;

const Candidate* AnnotationItem::candidate(std::string_view id) const {
  for (const auto& c : candidates) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

json AnnotationItem::to_json() const {
  json cands = json::array();
  for (const auto& c : candidates) {
    json cj{{"id", c.id}, {"kind", meta::to_string(c.kind)}, {"prompt", c.prompt}, {"output", c.output}};
    if (!c.error.empty()) cj["error"] = c.error;
    cands.push_back(std::move(cj));
  }
  return {{"item_id", item_id},
          {"context", context},
          {"shuffle_seed", shuffle_seed},
          {"generated", generated},
          {"candidates", std::move(cands)}};
}

AnnotationItem AnnotationItem::from_json(const json& j) {
  AnnotationItem item;
  item.item_id = j.at("item_id").get<std::string>();
  item.context = j.at("context").get<std::string>();
  item.shuffle_seed = j.value("shuffle_seed", std::uint64_t{0});
  item.generated = j.value("generated", std::vector<std::string>{});
  for (const auto& c : j.at("candidates")) {
    item.candidates.push_back(Candidate{c.at("id").get<std::string>(),
                                        meta::candidate_kind_from_string(c.at("kind").get<std::string>()),
                                        c.at("prompt").get<std::string>(),
                                        c.value("output", std::string()),
                                        c.value("error", std::string())});
  }
  return item;
}

const AnnotationItem* AnnotationPack::item(std::string_view id) const {
  for (const auto& i : items) {
    if (i.item_id == id) return &i;
  }
  return nullptr;
}

std::string AnnotationPack::to_jsonl() const {
  std::string out;
  for (const auto& i : items) {
    json j{{"schema_version", kSchemaVersion}, {"task", task}, {"template", template_name}};
    j.update(i.to_json());
    out += j.dump();
    out += '\n';
  }
  return out;
}

AnnotationPack AnnotationPack::from_jsonl(std::string_view text) {
  AnnotationPack pack;
  std::istringstream in{std::string(text)};
  std::size_t row = 0;
  for (std::string line; std::getline(in, line);) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = json::parse(line);
      int v = j.at("schema_version").get<int>();
      if (v != kSchemaVersion) {
        throw Error(Errc::schema, "pack line " + std::to_string(row) + ": schema_version " +
                                      std::to_string(v) + " is not supported");
      }
      auto task = j.value("task", std::string());
      if (pack.items.empty()) {
        pack.task = task;
        pack.template_name = j.value("template", std::string());
      } else if (task != pack.task) {
        throw Error(Errc::schema, "pack line " + std::to_string(row) + " is for task '" + task +
                                      "', earlier lines for '" + pack.task + "'");
      }
      auto item = AnnotationItem::from_json(j);
      if (pack.item(item.item_id) != nullptr) {
        throw Error(Errc::duplicate, "pack line " + std::to_string(row) + ": item '" +
                                         item.item_id + "' appears twice");
      }
      pack.items.push_back(std::move(item));
    } catch (const json::exception& e) {
      throw Error(Errc::schema, "pack line " + std::to_string(row) + ": " + e.what());
    }
  }
  return pack;
}

void AnnotationPack::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << to_jsonl();
}

AnnotationPack AnnotationPack::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_jsonl(buf.str());
}

AnnotationPack build_annotation_pack(const std::vector<CorpusItem>& items,
                                     const meta::TaskBinding& binding,
                                     const meta::MetaPromptTemplate& t, llm::Backend& backend,
                                     const PackOptions& options) {
  AnnotationPack pack;
  pack.task = binding.name;
  pack.template_name = t.name;
  std::mt19937_64 seeds(options.shuffle_seed);

  for (const auto& item : items) {
    // Drawn for every entry, failed or not, so one failure does not reshuffle
    // the entries after it.
    const std::uint64_t item_seed = seeds();
    meta::GeneratedPromptSet gen;
    try {
      text::SlotValues values(item.fields.begin(), item.fields.end());
      gen = meta::meta_prompt_morphism(binding, values, t, backend, options.generation);
    } catch (const std::exception& e) {
      pack.failures.push_back({item.id, e.what()});
      continue;
    }

    AnnotationItem entry;
    entry.item_id = item.id;
    entry.context = gen.context;
    entry.shuffle_seed = item_seed;
    entry.generated = gen.prompts;

    std::vector<Candidate> canon;
    for (std::size_t i = 0; i < options.meta_count && i < gen.prompts.size(); ++i) {
      canon.push_back({"m" + std::to_string(i + 1), meta::CandidateKind::meta, gen.prompts[i], {}, {}});
    }
    std::size_t nb = 0, nt = 0;
    for (const auto& b : binding.baselines) {
      std::string id = b.kind == meta::CandidateKind::task_description ? "t" + std::to_string(++nt)
                                                                       : "b" + std::to_string(++nb);
      canon.push_back({std::move(id), b.kind, b.prompt, {}, {}});
    }

    std::vector<std::string> prompts;
    for (const auto& c : canon) prompts.push_back(c.prompt);
    auto results = meta::execute_prompts(gen.context, prompts, backend, options.execution);
    for (std::size_t i = 0; i < canon.size(); ++i) {
      if (results[i].ok()) {
        canon[i].output = *results[i].output;
      } else {
        canon[i].error = results[i].skipped ? "skipped: " + results[i].error : results[i].error;
      }
    }

    std::mt19937_64 rng(item_seed);
    shuffle(canon, rng);
    entry.candidates = std::move(canon);
    pack.items.push_back(std::move(entry));
  }
  return pack;
}

}  // namespace catprompt::harness
