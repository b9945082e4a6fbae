#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"

namespace cli = catprompt::cli;

namespace {

// Flags that override the config file. Optional so that an unset flag leaves
// the file's value alone.
struct Overrides {
  std::optional<std::string> config, backend, inner, task, template_name, corpus, out, cache, mock_rules,
      model, pairing;
  std::optional<std::uint64_t> seed_sample, seed_shuffle;
  std::optional<std::size_t> jobs, sample_n, budget_k, max_output_tokens, meta_count, k;

  void add_common(CLI::App& app) {
    app.add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--backend", backend, "mock | replay | live");
    app.add_option("--cache", cache, "replay cache directory");
    app.add_option("--mock-rules", mock_rules, "mock rule file");
    app.add_option("--model", model, "model name sent to the backend");
    app.add_option("--jobs", jobs, "parallel requests");
    app.add_option("--out", out, "output directory");
    app.add_option("--budget", budget_k, "context budget in tokens");
    app.add_option("--max-output-tokens", max_output_tokens, "completion cap");
  }

  void add_generation(CLI::App& app) {
    app.add_option("--task", task, "ideation | creativity");
    app.add_option("--template", template_name, "full | short | path to a template file");
    app.add_option("--corpus", corpus, "corpus file or directory");
    app.add_option("-n,--sample", sample_n, "entries to sample");
    app.add_option("--seed-sample", seed_sample, "corpus sampling seed");
    app.add_option("--seed-shuffle", seed_shuffle, "candidate order seed");
    app.add_option("--meta-count", meta_count, "generated prompts kept per entry");
  }

  cli::RunConfig resolve() const {
    cli::RunConfig c;
    if (config) c.merge_json_file(*config);
    auto set = [](auto& field, const auto& opt) {
      if (opt) field = *opt;
    };
    set(c.backend, backend);
    set(c.inner, inner);
    set(c.task, task);
    set(c.template_name, template_name);
    set(c.corpus, corpus);
    set(c.out, out);
    set(c.cache_dir, cache);
    set(c.mock_rules, mock_rules);
    set(c.model, model);
    set(c.pairing, pairing);
    set(c.seed_sample, seed_sample);
    set(c.seed_shuffle, seed_shuffle);
    set(c.jobs, jobs);
    set(c.sample_n, sample_n);
    set(c.budget_k, budget_k);
    set(c.max_output_tokens, max_output_tokens);
    set(c.meta_count, meta_count);
    set(c.k, k);
    c.resolve_defaults(cli::default_data_dir());
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prompt-composition laws and meta-prompting experiments"};
  app.require_subcommand(1);
  Overrides ov;
  std::string fixture, pack, rankings, out_dir = "out";
  std::size_t annotators = 1;

  auto* laws = app.add_subcommand("laws", "check the laws of a category, task, duality or lemma fixture");
  laws->add_option("fixture", fixture, "fixture JSON")->required()->check(CLI::ExistingFile);
  laws->add_option("--out", out_dir, "directory for laws_<fixture>.json");

  auto* metagen = app.add_subcommand("metagen", "sample a corpus and build an annotation pack");
  ov.add_common(*metagen);
  ov.add_generation(*metagen);

  auto* record = app.add_subcommand("record", "metagen through a recording replay cache");
  ov.add_common(*record);
  ov.add_generation(*record);
  record->add_option("--inner", ov.inner, "backend behind the cache: mock | live");

  auto* execute = app.add_subcommand("execute", "re-run the candidates of a pack");
  ov.add_common(*execute);
  execute->add_option("pack", pack, "pack.jsonl")->required()->check(CLI::ExistingFile);

  auto* pack_cmd = app.add_subcommand("pack", "write the annotation sheet and a blank rankings file");
  pack_cmd->add_option("pack", pack, "pack.jsonl")->required()->check(CLI::ExistingFile);
  pack_cmd->add_option("--annotators", annotators, "number of annotators");
  pack_cmd->add_option("--out", out_dir, "output directory");

  auto* analyze = app.add_subcommand("analyze", "rank matrices, top-k shares and the signed-rank test");
  analyze->add_option("--config", ov.config, "JSON run configuration")->check(CLI::ExistingFile);
  analyze->add_option("pack", pack, "pack.jsonl")->required()->check(CLI::ExistingFile);
  analyze->add_option("rankings", rankings, "rankings .csv or .jsonl")->required()->check(CLI::ExistingFile);
  analyze->add_option("-k", ov.k, "top-k cutoff");
  analyze->add_option("--pairing", ov.pairing, "per_record | per_item_median");
  analyze->add_option("--out", ov.out, "report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : cli::input_error;
  }

  cli::Streams io{std::cout, std::cerr};
  try {
    if (*laws) return cli::cmd_laws(fixture, out_dir, io);
    if (*metagen) return cli::cmd_metagen(ov.resolve(), io);
    if (*record) return cli::cmd_metagen(ov.resolve(), io, true);
    if (*execute) return cli::cmd_execute(ov.resolve(), pack, io);
    if (*pack_cmd) return cli::cmd_pack(pack, annotators, out_dir, io);
    if (*analyze) return cli::cmd_analyze(ov.resolve(), pack, rankings, io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for(e);
  }
  return cli::input_error;
}
