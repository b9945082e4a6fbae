#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "run_config.hpp"

namespace catprompt::cli {

enum Exit : int { ok = 0, check_failed = 1, input_error = 2, cache_miss = 3 };

/// Maps a library error code to an exit status.
int exit_code_for(const std::exception& e);

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Law suites for a fixture of any kind; writes laws_<stem>.json to `out_dir`.
int cmd_laws(const std::filesystem::path& fixture, const std::filesystem::path& out_dir, Streams io);

/// Samples the corpus and builds the annotation pack (pack.jsonl and
/// failures.jsonl in config.out). With `record` set, requests go through a
/// recording cache in front of config.inner.
int cmd_metagen(const RunConfig& config, Streams io, bool record = false);

/// Re-runs every candidate of an existing pack against the configured
/// backend and writes the refreshed pack.
int cmd_execute(const RunConfig& config, const std::filesystem::path& pack, Streams io);

/// Annotation hand-off: sheet.txt with each entry's context and candidates in
/// presentation order, and a blank rankings.csv for `annotators` people.
int cmd_pack(const std::filesystem::path& pack, std::size_t annotators,
             const std::filesystem::path& out_dir, Streams io);

/// Report bundle for a pack and its rankings.
int cmd_analyze(const RunConfig& config, const std::filesystem::path& pack,
                const std::filesystem::path& rankings, Streams io);

}  // namespace catprompt::cli
