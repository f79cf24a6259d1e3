#include <algorithm>
#include <iostream>
#include <new>

#include <CLI11.hpp>

#include "cocomment/cli.hpp"
#include "cocomment/error.hpp"

namespace cocomment::cli {

namespace {

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

const char* describe(const std::string& stage) {
  if (stage == "ingest") return "Parse a trace into per-window snapshots";
  if (stage == "graph") return "Project snapshots onto co-commenter graphs";
  if (stage == "backbone") return "Keep the edges that exceed the null-model percentile";
  if (stage == "communities") return "Run Louvain on each backbone";
  if (stage == "dynamics") return "Compare consecutive windows";
  if (stage == "text") return "Characterise the communities' comments";
  if (stage == "synth") return "Generate a synthetic trace";
  return "Run ingest, graph, backbone, communities, dynamics and text";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Co-commenter backbone extraction and community analysis"};
  app.name("cocomment");
  app.require_subcommand(1, 1);

  std::string config_path;
  app.add_option("--config", config_path, "Key-value config file; flags override its entries");

  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> options;
  for (const auto& [key, value] : default_settings()) {
    if (key == "strict") continue;
    options[key] = app.add_option(flag_name(key), flags[key], "default: " + (value.empty() ? "(none)" : value));
  }
  bool strict = false, lenient = false;
  auto* strict_flag = app.add_flag("--strict", strict, "Keep edges whose weight is greater than the percentile");
  auto* lenient_flag = app.add_flag("--lenient", lenient, "Keep edges whose weight is at least the percentile");
  strict_flag->excludes(lenient_flag);

  for (const auto& stage : stage_names()) app.add_subcommand(stage, describe(stage))->fallthrough();

  try {
    app.parse(static_cast<int>(args.size() + 1), [&] {
      static thread_local std::vector<const char*> argv;
      argv.clear();
      argv.push_back("cocomment");
      for (const auto& a : args) argv.push_back(a.c_str());
      return argv.data();
    }());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return static_cast<int>(ExitCode::kConfig);
  }

  try {
    Settings settings;
    if (!config_path.empty()) settings = read_config_file(config_path);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) settings[key] = flags[key];
    if (strict) settings["strict"] = "true";
    if (lenient) settings["strict"] = "false";
    const auto config = resolve_config(settings);
    const std::string stage = app.get_subcommands().front()->get_name();
    run_stage(stage, config);
    out << stage << ": done, outputs in " << config.dir.string() << "\n";
    return static_cast<int>(ExitCode::kSuccess);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return static_cast<int>(ExitCode::kResource);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kInput);
  }
}

}  // namespace cocomment::cli
