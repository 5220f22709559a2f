// plateau: solve, check and oracle subcommands over scenario files.
//
// Exit codes: 0 success, 1 a hard assertion failed (or the surface does not
// span, or the oracle ran out of budget), 2 usage error, 3 invalid scenario
// or input file, 4 internal error.

#include "plateau/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace plateau;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kInput = 3, kInternal = 4 };

json error_block(const std::string& type, const std::string& message, const std::string& field = {}) {
  json e{{"type", type}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  return {{"error", e}, {"ok", false}};
}

int report_error(const json& block, const std::optional<std::filesystem::path>& out_dir) {
  std::cout << block.dump(2) << "\n";
  if (out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*out_dir, ec);
    std::ofstream(*out_dir / "report.json") << block.dump(2) << "\n";
  }
  return block["error"]["type"] == "scenario" ? kInput : kInternal;
}

template <typename F>
int guarded(F&& body, const std::optional<std::filesystem::path>& out_dir = {}) {
  try {
    return body();
  } catch (const ScenarioError& e) {
    return report_error(error_block("scenario", e.what(), e.field()), out_dir);
  } catch (const std::exception& e) {
    return report_error(error_block("internal", e.what()), out_dir);
  }
}

std::optional<std::vector<std::string>> parse_diagnostics(const std::string& s) {
  if (s.empty() || s == "scenario") return std::nullopt;
  if (s == "all") return std::vector<std::string>{"all"};
  if (s == "none") return std::vector<std::string>{};
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item != "slicing" && item != "density" && item != "regularity" && item != "monotonicity")
      throw CLI::ValidationError("--diagnostics", "unknown diagnostic '" + item + "'");
    out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete spanning-surface solver on cubical grids"};
  app.require_subcommand(1);

  std::string scenario_path, surface_path, out_dir, diagnostics;
  bool mesh = false;
  std::size_t budget = 1000000;

  auto* solve_cmd = app.add_subcommand("solve", "Solve a scenario and run diagnostics");
  solve_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  solve_cmd->add_option("--out", out_dir, "Directory for report, CSV tables and meshes");
  solve_cmd->add_flag("--mesh", mesh, "Write an OFF mesh of the surface (n = 2, 3)");
  solve_cmd->add_option("--diagnostics", diagnostics, "all, none, or a comma list of slicing,density,regularity,monotonicity");

  auto* check_cmd = app.add_subcommand("check", "Spanning verdict for a surface file");
  check_cmd->add_option("surface", surface_path, "Complex file with the surface")->required();
  check_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact minimum by branch and bound");
  oracle_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  oracle_cmd->add_option("--budget", budget, "Search node budget")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (solve_cmd->parsed()) {
    std::optional<std::filesystem::path> out;
    if (!out_dir.empty()) out = out_dir;
    std::optional<std::vector<std::string>> diag;
    try {
      diag = parse_diagnostics(diagnostics);
    } catch (const CLI::ValidationError& e) {
      std::cerr << e.what() << "\n";
      return kUsage;
    }
    return guarded(
        [&] {
          const Scenario s = load_scenario(scenario_path);
          RunOptions opts;
          opts.out_dir = out;
          opts.mesh = mesh;
          opts.diagnostics = diag;
          const RunReport r = run(s, opts);
          std::cout << r.to_json().dump(2) << "\n";
          return r.ok ? kOk : kFailed;
        },
        out);
  }
  if (check_cmd->parsed()) {
    return guarded([&] {
      const Scenario s = load_scenario(scenario_path);
      const Surface x = read_surface(surface_path, s.problem);
      const bool ok = spans(x);
      const json j{{"spans", ok}, {"mcells", x.mcells().size()}, {"weight", to_string(surface_weight(x))}};
      std::cout << j.dump(2) << "\n";
      return ok ? kOk : kFailed;
    });
  }
  return guarded([&] {
    const Scenario s = load_scenario(scenario_path);
    const IsoperimetricReport r = isoperimetric_scan(s.problem, budget);
    json cells = json::array();
    for (const Cell& c : r.argmin) cells.push_back(describe(c, s.grid.n()));
    const json j{{"method", r.method},
                 {"exact", r.exact},
                 {"minimum", to_string(r.minimum)},
                 {"lower_bound", to_string(r.lower_bound)},
                 {"nodes", r.nodes},
                 {"budget", r.budget},
                 {"argmin", cells}};
    std::cout << j.dump(2) << "\n";
    return r.exact ? kOk : kFailed;
  });
}
