#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hvwork/model_io.hpp"

// Deterministic end-to-end demonstration runs, one per headline result:
// Born reproduction in the toy models, the segregation and mixing
// transforms, the antidistinguishing scenario with its three composite
// variants, and the additivity breakdown. The CLI renders these reports
// and can also save the fixture files each demo is built from.
namespace hvwork::demos {

struct CheckResult {
  std::string name;
  std::string detail;
  double residual = 0.0;
  bool pass = false;
};

struct DemoReport {
  std::string demo;
  std::vector<CheckResult> checks;
  bool pass = true;

  void add(const std::string& name, const std::string& detail, double residual,
           bool ok);
};

const std::vector<std::string>& demo_names();

// ArgumentError for unknown names. No randomness anywhere: two runs emit
// identical reports.
DemoReport run_demo(const std::string& name, double tolerance = kTolerance);

struct DemoModels {
  // Model fixture files, as (file name, content) pairs.
  std::vector<std::pair<std::string, model_io::ModelFile>> models;
  // Auxiliary documents (measurement and scenario files), pre-serialized.
  std::vector<std::pair<std::string, std::string>> documents;
};

// The fixtures behind a demo, for `demo <name> --save-models <dir>`.
DemoModels demo_models(const std::string& name);

}  // namespace hvwork::demos
