// bioeco: command-line front end for the harvested refuge prey-predator
// toolkit. One command per invocation, configuration from a JSON file with
// optional --set overrides, results to stdout or a file as CSV or JSON.
//
//   bioeco <command> --config <path> [--set k=v]... [--format csv|json] [--out <path>]
//
// Commands: equilibria, stability, simulate, hopf, bionomic, optimal, sweep,
// check. Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bioeco/bioeco.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string format;
  std::string out_path;
};

int run_command(const std::string& command, const CommonOpts& opts) {
  std::ifstream in(opts.config_path);
  if (!in) {
    std::cerr << "error: cannot open config file '" << opts.config_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  try {
    const std::string text = bioeco::apply_overrides(buf.str(), opts.sets);
    const bioeco::RunConfig cfg = bioeco::parse_config(text);

    bioeco::OutputFormat format = bioeco::OutputFormat::Json;
    std::string out_path;
    if (cfg.output) {
      format = cfg.output->format;
      out_path = cfg.output->path;
    }
    if (!opts.format.empty()) {
      if (opts.format == "csv") {
        format = bioeco::OutputFormat::Csv;
      } else if (opts.format == "json") {
        format = bioeco::OutputFormat::Json;
      } else {
        std::cerr << "error: --format must be csv or json\n";
        return 2;
      }
    }
    if (!opts.out_path.empty()) out_path = opts.out_path;

    // BIOECO_THREADS caps internal parallelism; evaluation is serial, so any
    // positive cap is honored as written.
    if (const char* threads = std::getenv("BIOECO_THREADS")) {
      const long n = std::strtol(threads, nullptr, 10);
      if (n < 1) {
        std::cerr << "error: BIOECO_THREADS must be a positive integer\n";
        return 2;
      }
    }

    const bioeco::RunOutcome outcome = bioeco::run(command, cfg);
    const std::string rendered = bioeco::emit(outcome.envelope, format);
    if (out_path.empty()) {
      std::cout << rendered;
    } else {
      std::ofstream os(out_path, std::ios::binary);
      if (!os) {
        std::cerr << "error: cannot write to '" << out_path << "'\n";
        return 2;
      }
      os << rendered;
    }
    for (const std::string& d : outcome.envelope.diagnostics) {
      std::cerr << "note: " << d << "\n";
    }
    return outcome.exit_code;
  } catch (const bioeco::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bioeco::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for a harvested prey-predator model with prey refuge"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"equilibria", "stability", "simulate", "hopf",
                                             "bionomic",   "optimal",   "sweep",    "check"};
  CommonOpts opts;
  std::string chosen;
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config_path, "path to the JSON configuration")->required();
    sub->add_option("--set", opts.sets, "key=value override, repeatable");
    sub->add_option("--format", opts.format, "csv or json (overrides output.format)");
    sub->add_option("--out", opts.out_path, "output path (overrides output.path)");
    sub->callback([&chosen, name]() { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return run_command(chosen, opts);
}
