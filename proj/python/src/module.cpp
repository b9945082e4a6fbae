#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "catprompt/error.hpp"
#include "catprompt/harness/analyze.hpp"
#include "catprompt/harness/corpus.hpp"
#include "catprompt/harness/pack.hpp"
#include "catprompt/harness/rankings.hpp"
#include "catprompt/harness/stats.hpp"
#include "catprompt/llm/mock.hpp"
#include "catprompt/llm/replay.hpp"
#include "catprompt/meta/engine.hpp"
#include "catprompt/meta/template.hpp"
#include "catprompt/prompt/fixture.hpp"
#include "catprompt/text/template.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace catprompt;

namespace {

// Structured values cross the boundary as JSON text; the Python package
// decodes them.
std::string dump(const nlohmann::json& j) { return j.dump(); }

harness::WilcoxonMode mode_from(const std::string& name) {
  if (name == "automatic") return harness::WilcoxonMode::automatic;
  if (name == "exact") return harness::WilcoxonMode::exact;
  if (name == "normal") return harness::WilcoxonMode::normal;
  if (name == "exact_small") return harness::WilcoxonMode::exact_small;
  throw Error(Errc::config, "unknown wilcoxon mode '" + name + "'");
}

std::string check_laws(const fs::path& path) {
  auto fixture = prompt::load_fixture(path);
  cat::LawReport report;
  if (fixture.kind == "category") {
    auto f = prompt::load_category_fixture(fixture);
    report = f.category->check_laws();
    for (const auto& fn : f.functors) report.merge(cat::check_functor_laws(fn, f.category->semantics()));
    for (const auto& t : f.transformations) report.merge(cat::check_naturality(t, f.category->semantics()));
  } else if (fixture.kind == "task") {
    auto t = prompt::load_task(fixture.doc, fixture.base_dir);
    report = t->category->check_laws();
    report.merge(cat::check_functor_laws(t->inclusion, t->category->semantics()));
  } else if (fixture.kind == "lemma1") {
    auto l = prompt::load_lemma1_fixture(fixture);
    return dump(prompt::check_lemma1(*l.task1, *l.task2, l.rewrites).to_json());
  } else {
    throw Error(Errc::schema, "check_laws handles category, task and lemma1 fixtures, not '" +
                                  fixture.kind + "'");
  }
  return dump(report.to_json());
}

std::string build_pack(const fs::path& corpus, const std::string& task, const std::string& template_name,
                       const fs::path& mock_rules, std::size_t n, std::uint64_t seed_sample,
                       std::uint64_t seed_shuffle, const std::optional<fs::path>& cache_dir) {
  // Same budget and model as the command-line defaults, so the shipped
  // replay caches hit.
  llm::BackendConfig config;
  config.budget.k = 4096;
  llm::BackendPtr backend;
  if (cache_dir) {
    backend = std::make_shared<llm::ReplayBackend>(*cache_dir, llm::ReplayMode::strict, nullptr, config);
  } else {
    backend = std::make_shared<llm::MockBackend>(llm::MockRuleSet::load(mock_rules), config);
  }
  auto items = harness::ingest_corpus(corpus, harness::task_kind_from_string(task), n, seed_sample);
  harness::PackOptions opts;
  opts.shuffle_seed = seed_shuffle;
  auto pack = harness::build_annotation_pack(items, meta::TaskBinding::builtin(task),
                                             meta::MetaPromptTemplate::resolve(template_name), *backend,
                                             opts);
  return pack.to_jsonl();
}

}  // namespace

PYBIND11_MODULE(_catprompt, m) {
  m.doc() = "Prompt-composition laws and meta-prompting experiment tools";

  static PyObject* error_type =
      PyErr_NewException("catprompt._catprompt.CatpromptError", PyExc_RuntimeError, nullptr);
  Py_INCREF(error_type);
  m.add_object("CatpromptError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  m.def("tensor_strings", [](const std::string& x, const std::string& y) {
    return prompt::tensor_strings(x, y);
  });
  m.def("template_slots", [](const std::string& source) { return text::Template::parse(source).slots(); });
  m.def("render_template", [](const std::string& source, const std::map<std::string, std::string>& values) {
    text::SlotValues v(values.begin(), values.end());
    return text::Template::parse(source).render(v);
  });
  m.def(
      "mock_complete",
      [](const std::string& rules_json, const std::string& prompt, std::size_t max_output_tokens) {
        llm::MockBackend backend(llm::MockRuleSet::from_json(nlohmann::json::parse(rules_json)));
        return backend.complete(llm::CompletionRequest{prompt, max_output_tokens, 0});
      },
      py::arg("rules_json"), py::arg("prompt"), py::arg("max_output_tokens") = 256);

  m.def("builtin_template", [](const std::string& name) { return meta::MetaPromptTemplate::builtin(name).body.source(); });
  m.def(
      "render_meta_prompt",
      [](const std::string& name_or_path, const std::string& task, const std::string& context,
         const std::vector<std::string>& examples) {
        return meta::render_meta_prompt(meta::MetaPromptTemplate::resolve(name_or_path), task, context,
                                        examples);
      },
      py::arg("template"), py::arg("task_description"), py::arg("context"),
      py::arg("examples") = std::vector<std::string>{});
  m.def(
      "parse_numbered_list",
      [](const std::string& completion, std::size_t expected, const std::string& seed) {
        auto r = meta::parse_numbered_list(completion, expected, seed);
        return py::make_tuple(r.items, r.extra_text, r.seed_recovered);
      },
      py::arg("completion"), py::arg("expected") = 5, py::arg("seed") = "");

  m.def(
      "wilcoxon",
      [](const std::vector<double>& d, const std::string& mode) {
        return dump(harness::wilcoxon_signed_rank(std::span<const double>(d), mode_from(mode)).to_json());
      },
      py::arg("differences"), py::arg("mode") = "automatic");
  m.def(
      "analyze",
      [](const fs::path& pack_path, const fs::path& rankings, std::size_t k, const std::string& pairing) {
        auto pack = harness::AnnotationPack::load(pack_path);
        harness::AnalyzeOptions opts;
        opts.k = k;
        opts.pairing = harness::pairing_from_string(pairing);
        return dump(harness::analyze(harness::ingest_rankings(rankings, pack), pack, opts).to_json());
      },
      py::arg("pack"), py::arg("rankings"), py::arg("k") = 3, py::arg("pairing") = "per_record");
  m.def("check_laws", &check_laws, py::arg("fixture"));
  m.def("build_pack", &build_pack, py::arg("corpus"), py::arg("task"), py::arg("template"),
        py::arg("mock_rules"), py::arg("n"), py::arg("seed_sample") = 1, py::arg("seed_shuffle") = 1,
        py::arg("cache_dir") = std::nullopt);
}
