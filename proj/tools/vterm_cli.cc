// Command-line front end: pipeline stages plus a fixture generator.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vterm/error.h"
#include "vterm/pipeline.h"
#include "vterm/records.h"
#include "vterm/synthetic.h"

namespace fs = std::filesystem;

namespace {

struct StageArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;
};

int report_error(const std::string& kind, const std::string& message, int code) {
  nlohmann::json record{{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << record.dump() << '\n';
  return code;
}

void write_fixture(const vterm::Dataset& d, const fs::path& dir) {
  fs::create_directories(dir);
  vterm::write_dataset({dir / "lines.jsonl", dir / "line_points.jsonl",
                        dir / "fixes.jsonl"},
                       d);
  nlohmann::json config{{"lines", "lines.jsonl"},
                        {"line_points", "line_points.jsonl"},
                        {"fixes", "fixes.jsonl"},
                        {"output_dir", "out"}};
  std::ofstream(dir / "config.json") << config.dump(2) << '\n';
}

vterm::Dataset make_fixture(const std::string& name, std::uint64_t seed) {
  namespace synth = vterm::synth;
  if (name == "line829") return synth::line829(true).dataset;
  if (name == "line829-clean") return synth::line829(false).dataset;
  if (name == "uniform") return synth::uniform_loop_day(20, 16, 60);
  if (name == "jittered") return synth::jittered_loop_day(30, 20, 90, seed);
  if (name == "city") {
    synth::CityDaySpec spec;
    spec.seed = seed;
    return synth::city_day(spec).dataset;
  }
  throw vterm::Error("unknown fixture '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bus itinerary reconstruction and virtual-terminal analysis"};
  app.require_subcommand(1);

  StageArgs args;
  const char* stage_names[] = {"validate", "detect", "analyze", "cluster",
                               "route", "all"};
  const char* stage_help[] = {
      "check cross-file references and write a validation report",
      "reconstruct itineraries and write the tag report",
      "availability series, daily averages and outlier stops",
      "virtual terminals, cluster statistics and correlations",
      "OD evaluation with and without cluster transfers",
      "run every stage in order"};
  std::vector<CLI::App*> stage_cmds;
  for (std::size_t i = 0; i < std::size(stage_names); ++i) {
    CLI::App* cmd = app.add_subcommand(stage_names[i], stage_help[i]);
    cmd->add_option("--config", args.config, "pipeline config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out, "output directory (overrides config)");
    cmd->add_option("--seed", args.seed, "random seed (overrides config)");
    cmd->add_option("--jobs", args.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    stage_cmds.push_back(cmd);
  }

  std::string fixture;
  std::string fixture_out;
  std::uint64_t fixture_seed = 7;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "write a synthetic input fixture and config");
  synth_cmd->add_option("fixture", fixture,
                        "line829 | line829-clean | uniform | jittered | city")
      ->required();
  synth_cmd->add_option("--out", fixture_out, "fixture directory")->required();
  synth_cmd->add_option("--seed", fixture_seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth_cmd->parsed()) {
      write_fixture(make_fixture(fixture, fixture_seed), fixture_out);
      return 0;
    }
    for (std::size_t i = 0; i < stage_cmds.size(); ++i) {
      if (!stage_cmds[i]->parsed()) continue;
      vterm::PipelineConfig config = vterm::load_config(args.config);
      if (!args.out.empty()) config.output_dir = args.out;
      if (stage_cmds[i]->count("--seed") > 0) config.seed = args.seed;
      if (args.jobs > 0) config.jobs = args.jobs;
      vterm::run_pipeline(config, vterm::stages_for(stage_names[i]));
    }
    return 0;
  } catch (const vterm::ParseError& e) {
    return report_error("parse_error", e.what(), 2);
  } catch (const vterm::MissingDependencyError& e) {
    return report_error("missing_dependency", e.what(), 3);
  } catch (const vterm::InvariantError& e) {
    return report_error("invariant_violation", e.what(), 4);
  } catch (const std::exception& e) {
    return report_error("error", e.what(), 1);
  }
}
