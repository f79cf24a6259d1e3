#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cocomment/ingest.hpp"
#include "cocomment/synth.hpp"
#include "cocomment/text/tokenize.hpp"

namespace cocomment::cli {

// Every setting as a key-value pair; the config file and the command-line
// flags both write into this map, flags last.
using Settings = std::map<std::string, std::string>;

// The recognised keys with their default values.
const Settings& default_settings();

// "key = value" lines; '#' starts a comment line. Unknown keys are a
// ConfigError naming the line.
Settings parse_config_text(std::string_view text, const std::string& origin = "config");
Settings read_config_file(const std::filesystem::path& path);

struct PipelineConfig {
  Settings settings;  // resolved values, as recorded in manifests

  std::filesystem::path input;
  RecordFormat format = RecordFormat::kJsonl;
  bool strict_parse = false;
  WindowSpec window;

  double alpha = 0.05;
  bool strict = true;
  std::size_t exact_max_posts = 64;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::optional<std::size_t> clique_cap;
  std::size_t max_pair_incidences = 500'000'000;

  text::TextConfig text;
  std::filesystem::path stopwords_path;
  std::filesystem::path lexicon_path;
  std::size_t min_comments = 100;
  double kruskal_p = 0.01;
  std::size_t gini_top = 5;

  std::filesystem::path dir = ".";
  SynthSpec synth;
};

// Validates and converts settings (ConfigError on bad values). Loads the
// stopword list when one is configured.
PipelineConfig resolve_config(const Settings& settings);

// Settings that do not influence artifact contents (thread count, working
// directory, input path) are left out of manifests.
bool affects_output(const std::string& key);

inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"ingest", "graph",    "backbone", "communities",
                                                 "dynamics", "text", "synth",    "pipeline"};
  return names;
}

// Runs one stage on a resolved config. Files written by a failing stage
// are removed before the error propagates.
void run_stage(const std::string& stage, const PipelineConfig& config);

// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cocomment::cli
