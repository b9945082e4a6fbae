#include "commands.hpp"

#include <fstream>
#include <ostream>

#include "catprompt/cat/laws.hpp"
#include "catprompt/error.hpp"
#include "catprompt/harness/analyze.hpp"
#include "catprompt/harness/corpus.hpp"
#include "catprompt/harness/csv.hpp"
#include "catprompt/harness/pack.hpp"
#include "catprompt/harness/rankings.hpp"
#include "catprompt/meta/engine.hpp"
#include "catprompt/prompt/fixture.hpp"

namespace catprompt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (err == nullptr) return input_error;
  switch (err->code()) {
    case Errc::cache_miss: return cache_miss;
    case Errc::task_membership:
    case Errc::missing_dual:
    case Errc::ill_formed_functor:
    case Errc::ill_formed_transformation:
    case Errc::incomplete_transformation: return check_failed;
    default: return input_error;
  }
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << content;
}

void print_report(const std::string& title, const cat::LawReport& r, std::ostream& out) {
  out << (r.passed() ? "PASS " : "FAIL ") << title << ": " << r.instances.size() << " instances, "
      << r.failures() << " failures" << (r.truncated ? " (truncated)" : "") << '\n';
  if (const auto* f = r.first_failure()) {
    out << "  counterexample: " << f->law << " on " << f->subject;
    if (f->witness) out << " with witness \"" << *f->witness << '"';
    out << "\n    lhs: \"" << f->lhs << "\"\n    rhs: \"" << f->rhs << "\"\n";
  }
}

struct LawSuite {
  json reports = json::array();
  bool passed = true;

  void add(const std::string& title, const cat::LawReport& r, std::ostream& out) {
    print_report(title, r, out);
    json j = r.to_json();
    j["title"] = title;
    reports.push_back(std::move(j));
    passed = passed && r.passed();
  }
};

bool report_misses(const BackendHandle& h, std::ostream& err) {
  if (!h.replay) return false;
  auto misses = h.replay->misses();
  if (misses.empty()) return false;
  err << "replay cache " << h.replay->directory().string() << " is missing " << misses.size()
      << " request(s):\n";
  for (const auto& m : misses) err << "  " << m << '\n';
  return true;
}

}  // namespace

int cmd_laws(const fs::path& path, const fs::path& out_dir, Streams io) {
  auto fixture = prompt::load_fixture(path);
  LawSuite suite;
  json extra;

  if (fixture.kind == "category") {
    auto f = prompt::load_category_fixture(fixture);
    suite.add("category " + f.category->name(), f.category->check_laws(), io.out);
    for (const auto& fn : f.functors) {
      suite.add("functor " + fn.name, cat::check_functor_laws(fn, f.category->semantics()), io.out);
    }
    for (const auto& t : f.transformations) {
      suite.add("naturality " + t.name, cat::check_naturality(t, f.category->semantics()), io.out);
    }
  } else if (fixture.kind == "task") {
    auto t = prompt::load_task(fixture.doc, fixture.base_dir);
    suite.add("task " + t->name, t->category->check_laws(), io.out);
    suite.add("inclusion " + t->inclusion.name,
              cat::check_functor_laws(t->inclusion, t->category->semantics()), io.out);
  } else if (fixture.kind == "duality") {
    auto d = prompt::load_duality_fixture(fixture);
    auto f = prompt::build_duality_functor(*d.source, *d.target, d.reverse, d.inversion_template);
    suite.add("duality " + f.functor.name,
              cat::check_functor_laws(f.functor, d.target->category->semantics()), io.out);
    extra["instructions"] = f.instructions;
    if (!d.back.empty()) {
      auto g = prompt::build_duality_functor(*d.target, *d.source, d.back, d.inversion_template);
      suite.add("duality " + g.functor.name,
                cat::check_functor_laws(g.functor, d.source->category->semantics()), io.out);
      suite.add("roundtrip", prompt::check_duality_roundtrip(f.functor, g.functor), io.out);
    }
  } else if (fixture.kind == "lemma1") {
    auto l = prompt::load_lemma1_fixture(fixture);
    auto res = prompt::check_lemma1(*l.task1, *l.task2, l.rewrites);
    extra["lemma1"] = res.to_json();
    if (res.functor) suite.add("lemma1 functor " + res.functor->name, res.laws, io.out);
    if (!res.ok()) {
      suite.passed = false;
      io.out << "FAIL lemma1 " << l.task1->name << " -> " << l.task2->name << ": " << res.detail << '\n';
      if (res.counterexample) {
        io.out << "  counterexample: (\"" << res.counterexample->first << "\", \""
               << res.counterexample->second << "\")\n";
      }
    } else {
      io.out << "PASS lemma1 " << l.task1->name << " -> " << l.task2->name << ": " << res.pairs_checked
             << " rewrite pairs connected\n";
    }
  } else {
    throw Error(Errc::schema, path.string() + ": unknown fixture kind '" + fixture.kind + "'");
  }

  json doc{{"schema_version", harness::kSchemaVersion},
           {"fixture", path.filename().string()},
           {"kind", fixture.kind},
           {"passed", suite.passed},
           {"reports", suite.reports}};
  if (!extra.is_null()) doc["details"] = extra;
  write_file(out_dir / ("laws_" + path.stem().string() + ".json"), doc.dump(2) + "\n");
  return suite.passed ? ok : check_failed;
}

int cmd_metagen(const RunConfig& config, Streams io, bool record) {
  config.validate();
  auto kind = harness::task_kind_from_string(config.task);
  auto binding = meta::TaskBinding::builtin(config.task);
  auto tmpl = meta::MetaPromptTemplate::resolve(config.template_name);
  auto handle = make_backend(config, record);
  auto items = harness::ingest_corpus(config.corpus, kind, config.sample_n, config.seed_sample);

  harness::PackOptions opts;
  opts.shuffle_seed = config.seed_shuffle;
  opts.meta_count = config.meta_count;
  opts.generation.max_output_tokens = config.max_output_tokens;
  opts.execution.max_output_tokens = config.max_output_tokens;
  opts.execution.jobs = config.jobs;
  auto pack = harness::build_annotation_pack(items, binding, tmpl, *handle.backend, opts);

  fs::path out(config.out);
  pack.save(out / "pack.jsonl");
  std::string failures;
  for (const auto& f : pack.failures) {
    failures += json{{"schema_version", harness::kSchemaVersion}, {"item_id", f.item_id}, {"error", f.error}}
                    .dump() +
                "\n";
  }
  write_file(out / "failures.jsonl", failures);

  std::size_t full = 0;
  for (const auto& item : pack.items) full += item.generated.size() == tmpl.expected_count ? 1 : 0;
  io.out << config.task << ": " << pack.items.size() << " entries (" << full << " with "
         << tmpl.expected_count << " parsed prompts), " << pack.failures.size() << " failed, template "
         << tmpl.name << ", backend " << handle.backend->kind() << '\n';
  for (const auto& f : pack.failures) io.err << "  " << f.item_id << ": " << f.error << '\n';
  if (report_misses(handle, io.err)) return cache_miss;
  return ok;
}

int cmd_execute(const RunConfig& config, const fs::path& pack_path, Streams io) {
  config.validate();
  auto handle = make_backend(config);
  auto pack = harness::AnnotationPack::load(pack_path);
  meta::ExecutionOptions opts;
  opts.max_output_tokens = config.max_output_tokens;
  opts.jobs = config.jobs;
  std::size_t errors = 0;
  for (auto& item : pack.items) {
    std::vector<std::string> prompts;
    for (const auto& c : item.candidates) prompts.push_back(c.prompt);
    auto results = meta::execute_prompts(item.context, prompts, *handle.backend, opts);
    for (std::size_t i = 0; i < results.size(); ++i) {
      auto& c = item.candidates[i];
      c.output = results[i].output.value_or("");
      c.error = results[i].ok() ? "" : (results[i].skipped ? "skipped: " : "") + results[i].error;
      errors += results[i].ok() ? 0 : 1;
    }
  }
  pack.save(fs::path(config.out) / "pack.jsonl");
  io.out << "executed " << pack.items.size() << " entries, " << errors << " candidate error(s)\n";
  if (report_misses(handle, io.err)) return cache_miss;
  return ok;
}

int cmd_pack(const fs::path& pack_path, std::size_t annotators, const fs::path& out_dir, Streams io) {
  if (annotators == 0) throw Error(Errc::config, "need at least one annotator");
  auto pack = harness::AnnotationPack::load(pack_path);
  std::string sheet;
  std::size_t width = 0;
  for (const auto& item : pack.items) {
    width = std::max(width, item.candidates.size());
    sheet += "=== " + item.item_id + "\n[context]\n" + item.context + "\n";
    for (const auto& c : item.candidates) {
      sheet += "\n[" + c.id + "] prompt: " + (c.prompt.empty() ? "(empty)" : c.prompt) + "\n";
      sheet += "[" + c.id + "] output: " + c.output + "\n";
    }
    sheet += "\n";
  }
  std::vector<std::string> header{"item_id", "annotator_id", "target"};
  for (std::size_t i = 1; i <= width; ++i) header.push_back("rank_" + std::to_string(i));
  std::string rows = harness::csv::row(header);
  for (const auto& item : pack.items) {
    for (std::size_t a = 1; a <= annotators; ++a) {
      for (const char* target : {"prompts", "outputs"}) {
        std::vector<std::string> f{item.item_id, "a" + std::to_string(a), target};
        f.resize(header.size());
        rows += harness::csv::row(f);
      }
    }
  }
  write_file(out_dir / "sheet.txt", sheet);
  write_file(out_dir / "rankings.csv", rows);
  io.out << "wrote sheet.txt and rankings.csv for " << pack.items.size() << " entries, " << annotators
         << " annotator(s)\n";
  return ok;
}

int cmd_analyze(const RunConfig& config, const fs::path& pack_path, const fs::path& rankings,
                Streams io) {
  config.validate();
  auto pack = harness::AnnotationPack::load(pack_path);
  auto records = harness::ingest_rankings(rankings, pack);
  harness::AnalyzeOptions opts;
  opts.k = config.k;
  opts.pairing = harness::pairing_from_string(config.pairing);
  auto report = harness::analyze(records, pack, opts);
  report.write_bundle(config.out);
  io.out << report.summary();
  return ok;
}

}  // namespace catprompt::cli
