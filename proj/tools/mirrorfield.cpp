// mirrorfield: sweeps of the coated-interface emission model.
//
//   mirrorfield <eta-map|xi-map|decay-curve|oracle-check> [--config FILE] [flags]
//
// Exit status: 0 success, 1 invalid input, 2 oracle failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mirrorfield/sweep.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mirrorfield::ValidationError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mirrorfield::ValidationError("cannot write '" + path + "'");
  out << content;
}

std::string svg_path(const std::string& out) {
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? out.substr(0, dot) : out) + ".svg";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decay-rate sweeps for an atom near a coated interface"};
  app.set_version_flag("--version", "mirrorfield 1.0");

  std::string command;
  app.add_option("command", command, "eta-map, xi-map, decay-curve or oracle-check")->required();
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value file; flags override it");

  // Every value flag maps onto the config key with '-' replaced by '_'.
  const std::vector<std::pair<std::string, std::string>> value_flags{
      {"--r-a", "reflection amplitude, side a"},
      {"--t-a", "transmission amplitude, side a"},
      {"--l-a", "loss amplitude, side a"},
      {"--r-b", "reflection amplitude, side b"},
      {"--t-b", "transmission amplitude, side b"},
      {"--l-b", "loss amplitude, side b"},
      {"--phi1", "reflection phase, side b"},
      {"--phi2", "transmission phase a to b"},
      {"--phi3", "reflection phase, side a"},
      {"--phi4", "transmission phase b to a"},
      {"--side", "atom side: a (air) or b (medium)"},
      {"--alignment", "|d1|^2, 0 parallel to the interface, 1 perpendicular"},
      {"--u-min", "smallest u = 2 k0 |x|"},
      {"--u-max", "largest u"},
      {"--u-count", "number of u samples"},
      {"--preset", "fig4, fig5a, fig5b, fig6, fig7a or fig7b"},
      {"--seed", "oracle-check seed"},
      {"--cases", "oracle-check case count"},
      {"--grid-count", "map points per axis"},
      {"--xi-phases", "comma-separated phases for xi-map"},
      {"--points-per-panel", "oracle Gauss-Legendre points per panel"},
      {"--panels-per-oscillation", "oracle panels per oscillation"},
      {"--min-panels", "oracle minimum panel count"},
      {"--rel-tolerance", "oracle refinement tolerance"},
  };
  std::vector<std::optional<std::string>> values(value_flags.size());
  for (std::size_t i = 0; i < value_flags.size(); ++i)
    app.add_option(value_flags[i].first, values[i], value_flags[i].second);
  std::optional<std::string> out;
  app.add_option("--out", out, "output CSV path (default: stdout)");
  bool svg = false;
  app.add_flag("--svg", svg, "also write an SVG plot next to --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const mirrorfield::Command cmd = mirrorfield::parse_command(command);
    mirrorfield::KeyValues given;
    if (!config_path.empty()) given = mirrorfield::parse_key_values(read_file(config_path));
    for (std::size_t i = 0; i < value_flags.size(); ++i)
      if (values[i]) given[mirrorfield::normalise_key(value_flags[i].first.substr(2))] = *values[i];
    if (out) given["out"] = *out;
    if (svg) given["svg"] = "true";

    const mirrorfield::SweepConfig cfg = mirrorfield::resolve_config(cmd, given);
    const mirrorfield::ResultTable table = mirrorfield::run_sweep(cfg);
    const std::string csv = mirrorfield::to_csv(table);
    if (cfg.out) {
      write_file(*cfg.out, csv);
      if (cfg.svg) write_file(svg_path(*cfg.out), mirrorfield::svg_for(table));
    } else {
      std::fwrite(csv.data(), 1, csv.size(), stdout);
    }
    if (cmd == mirrorfield::Command::oracle_check) {
      const std::size_t failures = mirrorfield::oracle_failures(table);
      if (failures > 0) {
        std::cerr << "oracle-check: " << failures << " of " << cfg.cases << " cases failed\n";
        return 2;
      }
    }
    return 0;
  } catch (const mirrorfield::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mirrorfield::QuadratureBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
