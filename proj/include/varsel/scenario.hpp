#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "varsel/integrand.hpp"
#include "varsel/measure.hpp"
#include "varsel/plq.hpp"
#include "varsel/pwfun.hpp"
#include "varsel/setmap.hpp"

namespace varsel {

// Malformed input, unresolved name, or a violated hypothesis of the
// requested computation. The CLI maps this to exit code 1.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cross-check inside a task disagreed with its guaranteed bound. The CLI
// maps this, and any report carrying a false `consistent` verdict, to exit
// code 2.
struct InconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Named inputs plus an ordered task list, read from a single versioned
// JSON document. Every real number in the document is a decimal string
// ("inf" and "-inf" allowed where a half-line makes sense), parsed exactly
// once; integers (version, levels, depth, counts) are plain JSON integers.
struct Scenario {
  std::map<std::string, Measure> measures;
  std::map<std::string, SignedMeasure> signed_measures;
  std::map<std::string, PiecewiseSetMap> setmaps;
  std::map<std::string, NormalIntegrand> integrands;
  std::map<std::string, PLQFunction> plqs;
  std::map<std::string, PiecewiseFunction> functions;
  std::vector<nlohmann::json> tasks;
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// Executes one task object (command plus named inputs) and returns the
// report {task, inputs, verdicts, witnesses, values, paper_anchor}. Keys
// are emitted sorted, so identical inputs give byte-identical reports.
nlohmann::json run_task(const Scenario& sc, const nlohmann::json& task,
                        int index);

// Every task in file order, wrapped as {"reports": [...]}.
nlohmann::json run_all(const Scenario& sc);

// True when no report carries a false boolean verdict named "consistent".
bool reports_consistent(const nlohmann::json& report_or_list);

}  // namespace varsel
