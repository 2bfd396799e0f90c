// vw: trace variants of partially ordered event data.
//
//   vw variants --input log.xes [--output-format json|text]
//   vw render   --input log.csv --case 1 --output case1.svg
//   vw stats | check | bench | generate | dot

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "vw/cli.hpp"

namespace {

using vw::cli::CliConfig;
using vw::cli::InputFormat;
using vw::cli::OutputFormat;

unsigned threads_from_env() {
  if (const char* env = std::getenv("VW_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid VW_THREADS='" << env << "'\n";
  }
  return 1;
}

void add_common(CLI::App* cmd, CliConfig& cfg, std::string& columns, bool needs_input = true) {
  if (needs_input) {
    cmd->add_option("-i,--input", cfg.input, "Event log (.xes, .xes.gz or .csv)")->required();
    cmd->add_option("--format", cfg.format, "Input format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, InputFormat>{
                {"auto", InputFormat::Auto}, {"xes", InputFormat::Xes}, {"csv", InputFormat::Csv}},
            CLI::ignore_case));
    cmd->add_option("--columns", columns,
                    "CSV column names for case,label,start,complete (default: case,label,start,complete)");
  }
  cmd->add_option("-o,--output", cfg.output, "Output file (default: stdout)");
  cmd->add_option("--output-format", cfg.output_format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, OutputFormat>{{"json", OutputFormat::Json},
                                              {"svg", OutputFormat::Svg},
                                              {"text", OutputFormat::Text}},
          CLI::ignore_case));
  cmd->add_option("--threads", cfg.threads, "Worker threads (default: $VW_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace variants of partially ordered event data"};
  app.require_subcommand(1);

  CliConfig cfg;
  cfg.threads = threads_from_env();
  std::string columns;

  auto* variants = app.add_subcommand("variants", "List interval-order variants with counts and layouts");
  add_common(variants, cfg, columns);

  vw::cli::RenderTarget target;
  vw::RenderConfig style;
  auto* render = app.add_subcommand("render", "Render one variant as nested chevrons");
  add_common(render, cfg, columns);
  auto* key_opt = render->add_option("--key", target.key, "Canonical variant key");
  render->add_option("--case", target.case_id, "Case id whose variant to render")->excludes(key_opt);
  render->add_option("--unit-height", style.unit_height, "Pixels per leaf row")->check(CLI::PositiveNumber);
  render->add_option("--leaf-width", style.leaf_width, "Pixels per leaf chevron")->check(CLI::PositiveNumber);
  render->add_option("--indent", style.chevron_indent, "Chevron point depth")->check(CLI::PositiveNumber);
  render->add_option("--padding", style.padding, "Gap between chevrons")->check(CLI::PositiveNumber);
  render->add_option("--palette-seed", style.palette_seed, "Seed of the label colour hash");

  auto* stats = app.add_subcommand("stats", "Log and variant statistics with phase timings");
  add_common(stats, cfg, columns);

  auto* check = app.add_subcommand("check", "Validate every trace's interval order");
  add_common(check, cfg, columns);

  std::size_t repeat = 5;
  auto* bench = app.add_subcommand("bench", "Time the pipeline over repeated runs");
  add_common(bench, cfg, columns);
  bench->add_option("--repeat", repeat, "Number of runs")->check(CLI::PositiveNumber);

  vw::GeneratorSpec spec;
  auto* generate = app.add_subcommand("generate", "Write a seeded synthetic log as CSV");
  add_common(generate, cfg, columns, false);
  generate->add_option("--templates", spec.num_templates, "Number of distinct variants");
  generate->add_option("--traces-per-template", spec.traces_per_template, "Traces per variant");
  generate->add_option("--instances", spec.instances_per_trace, "Activity instances per trace");
  generate->add_option("--overlap", spec.overlap_density, "Overlap density in [0, 1]");

  std::string dot_case;
  auto* dot = app.add_subcommand("dot", "Export one case's interval order as Graphviz DOT");
  add_common(dot, cfg, columns);
  dot->add_option("--case", dot_case, "Case id")->required();

  try {
    app.parse(argc, argv);
    if (!columns.empty()) cfg.columns = vw::ColumnMap::from_list(columns);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : vw::cli::kInputError;
  } catch (const vw::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return vw::cli::kInputError;
  }

  if (*variants) return vw::cli::cmd_variants(cfg, std::cout, std::cerr);
  if (*render) return vw::cli::cmd_render(cfg, target, style, std::cout, std::cerr);
  if (*stats) return vw::cli::cmd_stats(cfg, std::cout, std::cerr);
  if (*check) return vw::cli::cmd_check(cfg, std::cout, std::cerr);
  if (*bench) return vw::cli::cmd_bench(cfg, repeat, std::cout, std::cerr);
  if (*dot) return vw::cli::cmd_dot(cfg, dot_case, std::cout, std::cerr);
  if (*generate) {
    spec.seed = cfg.seed;
    return vw::cli::cmd_generate(cfg, spec, std::cout, std::cerr);
  }
  return vw::cli::kInternalError;
}
