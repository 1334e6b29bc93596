#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "varsel/scenario.hpp"

namespace {

using nlohmann::json;

int emit(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 1;
    }
    f << text;
  }
  return varsel::reports_consistent(report) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Set-valued limits, regularity certificates, selections, and "
      "conjugate duality for piecewise data on [0,1]"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  json task;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-s,--scenario", scenario_path, "scenario JSON file")
        ->required();
    cmd->add_option("-o,--out", out_path,
                    "write the report here instead of stdout");
  };
  auto str_opt = [&](CLI::App* cmd, const std::string& flag,
                     const std::string& key, const std::string& help,
                     bool required = false) {
    auto* o = cmd->add_option_function<std::string>(
        flag, [&task, key](const std::string& v) { task[key] = v; }, help);
    if (required) o->required();
    return o;
  };
  auto int_opt = [&](CLI::App* cmd, const std::string& flag,
                     const std::string& key, const std::string& help) {
    return cmd->add_option_function<int>(
        flag, [&task, key](int v) { task[key] = v; }, help);
  };
  auto flag_opt = [&](CLI::App* cmd, const std::string& flag,
                      const std::string& key, const std::string& help) {
    return cmd->add_flag_callback(
        flag, [&task, key]() { task[key] = true; }, help);
  };

  CLI::App* limits = app.add_subcommand(
      "limits", "inner, outer, and measure inner limits at a point or at "
                "every grid point");
  add_common(limits);
  str_opt(limits, "--map", "map", "set-valued map name", true);
  str_opt(limits, "--measure", "measure",
          "base measure name (default: Lebesgue)");
  str_opt(limits, "--t", "t", "evaluation point (default: all grid points)");
  str_opt(limits, "--topology", "topology", "standard|left");

  CLI::App* check = app.add_subcommand(
      "check", "regularity verdict with witnesses on failure");
  add_common(check);
  str_opt(check, "--map", "map", "set-valued map name", true);
  str_opt(check, "--kind", "kind", "isc|osc|outer-regular|fully-lsc", true);
  str_opt(check, "--measure", "measure",
          "base measure name (default: Lebesgue)");
  str_opt(check, "--topology", "topology", "standard|left");

  CLI::App* selection = app.add_subcommand(
      "selection", "continuous selections, ladder families, and "
                   "essential-selection counterexamples");
  add_common(selection);
  str_opt(selection, "--map", "map", "set-valued map name", true);
  str_opt(selection, "--measure", "measure",
          "base measure name (default: Lebesgue)");
  str_opt(selection, "--topology", "topology", "standard|left");
  selection->add_option_function<std::string>(
      "--anchor",
      [&task](const std::string& v) {
        const auto comma = v.find(',');
        if (comma == std::string::npos)
          throw CLI::ValidationError("--anchor", "expected t,x");
        task["anchor"] =
            json{{"t", v.substr(0, comma)}, {"x", v.substr(comma + 1)}};
      },
      "anchor point t,x the selection must pass through");
  int_opt(selection, "--michael", "michael",
          "build this many selections along a dyadic ladder");
  flag_opt(selection, "--counterexample", "counterexample",
           "search for an essential selection that escapes the value");

  CLI::App* conj = app.add_subcommand(
      "conjugate", "exact convex conjugate of a piecewise "
                   "linear-quadratic function");
  add_common(conj);
  str_opt(conj, "--plq", "plq", "named function");
  str_opt(conj, "--integrand", "integrand", "named integrand (with --t)");
  str_opt(conj, "--t", "t", "time at which to pick the integrand slice");

  CLI::App* rec = app.add_subcommand(
      "recession", "recession function of a piecewise linear-quadratic "
                   "function");
  add_common(rec);
  str_opt(rec, "--plq", "plq", "named function");
  str_opt(rec, "--integrand", "integrand", "named integrand (with --t)");
  str_opt(rec, "--t", "t", "time at which to pick the integrand slice");

  CLI::App* evalih = app.add_subcommand(
      "eval-ih", "integral of the integrand along a function");
  add_common(evalih);
  str_opt(evalih, "--integrand", "integrand", "integrand name", true);
  str_opt(evalih, "--function", "function", "function name", true);
  str_opt(evalih, "--measure", "measure",
          "base measure name (default: Lebesgue)");

  CLI::App* duality = app.add_subcommand(
      "duality", "dual value versus refined primal estimates of the "
                 "conjugate of the integral functional");
  add_common(duality);
  str_opt(duality, "--integrand", "integrand", "integrand name", true);
  str_opt(duality, "--theta", "theta", "signed measure name", true);
  str_opt(duality, "--measure", "measure",
          "base measure name (default: Lebesgue)");
  int_opt(duality, "--levels", "levels", "dyadic refinement levels");

  CLI::App* bv = app.add_subcommand(
      "bv-duality", "exact and numerical supremum over left-continuous "
                    "functions of bounded variation");
  add_common(bv);
  str_opt(bv, "--integrand", "integrand", "integrand name", true);
  str_opt(bv, "--theta", "theta", "signed measure name", true);
  str_opt(bv, "--measure", "measure",
          "base measure name (default: Lebesgue)");
  int_opt(bv, "--levels", "levels", "dyadic refinement levels");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "grid-sampled brute-force limits, optionally compared "
                "against the exact engine");
  add_common(oracle);
  str_opt(oracle, "--map", "map", "set-valued map name", true);
  str_opt(oracle, "--kind", "kind", "li|ls|mli", true);
  str_opt(oracle, "--measure", "measure",
          "base measure name (default: Lebesgue)");
  str_opt(oracle, "--t", "t", "evaluation point (default: all grid points)");
  str_opt(oracle, "--topology", "topology", "standard|left");
  str_opt(oracle, "--step", "step", "sample step (default 1/4096)");
  int_opt(oracle, "--depth", "depth", "ball radius schedule depth");
  flag_opt(oracle, "--compare", "compare",
           "also compute exact sets and report Hausdorff distances");

  CLI::App* runall =
      app.add_subcommand("run", "execute every task embedded in the scenario");
  add_common(runall);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    const varsel::Scenario sc = varsel::load_scenario(scenario_path);
    json report;
    if (sub == runall) {
      report = varsel::run_all(sc);
    } else {
      task["command"] = sub->get_name();
      report = varsel::run_task(sc, task, 0);
    }
    return emit(report, out_path);
  } catch (const varsel::InconsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return 2;
  } catch (const varsel::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
