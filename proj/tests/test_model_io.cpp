#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "hvwork/demos.hpp"
#include "hvwork/toymodels.hpp"

using namespace hvwork;
using namespace hvwork::model_io;

namespace {

hvframe::HVModel canonical_toy() {
  return toymodels::build_mixed_toy(toymodels::canonical_toy_states(),
                                    toymodels::pauli_observables());
}

}  // namespace

TEST_CASE("model JSON round trip preserves every audited probability") {
  const hvframe::HVModel toy = canonical_toy();
  const ModelFile reloaded = parse_model_json(model_to_json({toy, std::nullopt}));
  const auto report = transforms::assert_equivalent(
      toy, reloaded.model, transforms::full_suite(toy));
  CHECK(report.pass);
  CHECK(report.max_delta == 0.0);

  const auto before = hvframe::classify(toy);
  const auto after = hvframe::classify(reloaded.model);
  CHECK(before.mixed == after.mixed);
  CHECK(before.state_dependent == after.state_dependent);
  CHECK(before.deterministic == after.deterministic);
}

TEST_CASE("composite round trip keeps provenance and conditional statistics") {
  const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
  const composer::CompositeModel prism = composer::build_prism_composite(
      composer::balanced_overlap_component(0.25), "psi1", "psi2", 2,
      scenario.measurement(), "M");
  const ModelFile reloaded =
      parse_model_json(model_to_json({prism.base, prism.info}));
  REQUIRE(reloaded.composite.has_value());
  CHECK(reloaded.composite->num_components == 2);
  CHECK(reloaded.composite->rule == composer::CompositionRule::kIndependentProduct);
  CHECK(reloaded.composite->preparation_ids == prism.info.preparation_ids);

  const composer::CompositeModel again{reloaded.model, *reloaded.composite};
  const pbrcheck::LemmaVerdict verdict =
      pbrcheck::detect_lemma_contradiction(again, scenario);
  CHECK(verdict.kind == pbrcheck::LemmaKind::kInefficiency);
  for (const auto& prep : again.info.preparation_ids) {
    for (const std::string& label : scenario.measurement().outcomes()) {
      CHECK(hvframe::check_conditional_reproduction(again.base, prep, "M",
                                                    {label}) <= 1e-12);
    }
  }
}

TEST_CASE("diagnostic tables survive the round trip") {
  const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
  composer::CompositeModel composite = composer::compose_independent(
      composer::balanced_overlap_component(0.25), "psi1", "psi2", 2);
  pbrcheck::attach_forced_state_independent_table(composite, scenario, "M");
  const ModelFile reloaded =
      parse_model_json(model_to_json({composite.base, composite.info}));
  REQUIRE(reloaded.composite.has_value());
  const composer::CompositeModel again{reloaded.model, *reloaded.composite};
  const auto audit = pbrcheck::additivity_audit(again, "ov|ov");
  CHECK(audit.value_sum == 0.0);
  CHECK(audit.mismatch);
}

TEST_CASE("loader reports a density that does not integrate to 1") {
  const std::string text = R"({
    "space": {"cells": [{"id": "c0", "measure": 1.0}]},
    "states": {"psi": [[1.0, 0.0], [0.0, 0.0]]},
    "densities": {"psi": {"c0": 0.9}}
  })";
  try {
    parse_model_json(text);
    FAIL("expected an invariant error");
  } catch (const InvariantError& e) {
    CHECK(std::string(e.what()).find("psi") != std::string::npos);
  }
}

TEST_CASE("loader reports a response row that does not sum to 1") {
  const std::string text = R"({
    "space": {"cells": [{"id": "c0", "measure": 1.0}]},
    "states": {"psi": [[1.0, 0.0], [0.0, 0.0]]},
    "observables": {"Z": {"outcomes": ["+1", "-1"],
                          "basis": [[[1.0, 0.0], [0.0, 0.0]],
                                    [[0.0, 0.0], [1.0, 0.0]]]}},
    "densities": {"psi": {"c0": 1.0}},
    "responses": [{"observable": "Z", "state_tag": "psi", "augmented": false,
                   "rows": {"c0": {"+1": 0.6, "-1": 0.5}}}]
  })";
  try {
    parse_model_json(text);
    FAIL("expected an invariant error");
  } catch (const InvariantError& e) {
    const std::string what = e.what();
    CHECK(what.find("Z") != std::string::npos);
    CHECK(what.find("c0") != std::string::npos);
  }
}

TEST_CASE("loader distinguishes parse errors from invariant errors") {
  CHECK_THROWS_AS(parse_model_json("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_model_json(R"({"states": {}})"), ParseError);
  // Non-normalized state is an invariant problem, not a parse problem.
  const std::string text = R"({
    "space": {"cells": [{"id": "c0", "measure": 1.0}]},
    "states": {"psi": [[0.5, 0.0], [0.5, 0.0]]},
    "densities": {"psi": {"c0": 1.0}}
  })";
  CHECK_THROWS_AS(parse_model_json(text), InvariantError);
}

TEST_CASE("measurement files round trip") {
  const auto meas = pbrcheck::pbr_basis_l2();
  const auto reloaded = parse_measurement_json(measurement_to_json(meas));
  CHECK(reloaded.outcomes() == meas.outcomes());
  for (int j = 0; j < meas.dim(); ++j) {
    CHECK(reloaded.basis()[j].amplitudes() == meas.basis()[j].amplitudes());
  }
}

TEST_CASE("scenario files select the canonical basis or an explicit one") {
  const auto canonical = parse_scenario_json(
      scenario_to_json(qcore::ket0(), qcore::ket_plus(), 2));
  CHECK(canonical.measurement().dim() == 4);

  const auto explicit_scenario = parse_scenario_json(scenario_to_json(
      qcore::ket0(), qcore::ket_plus(), 2, pbrcheck::pbr_basis_l2()));
  CHECK(explicit_scenario.measurement().dim() == 4);

  CHECK_THROWS_AS(
      parse_scenario_json(scenario_to_json(qcore::ket0(), qcore::ket_plus(), 3)),
      ArgumentError);
}

TEST_CASE("suite files parse triples and tolerance") {
  const std::string text = R"({
    "tolerance": 1e-9,
    "triples": [{"state": "a", "observable": "Z", "outcomes": ["+1", "-1"]}]
  })";
  const auto suite = parse_suite_json(text);
  CHECK(suite.tolerance == 1e-9);
  REQUIRE(suite.triples.size() == 1);
  CHECK(suite.triples[0].outcomes.size() == 2);
}

TEST_CASE("save and load through the filesystem") {
  const auto dir = std::filesystem::temp_directory_path() / "hvwork_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "toy.json").string();
  save_model_file({canonical_toy(), std::nullopt}, path);
  const ModelFile reloaded = load_model_file(path);
  CHECK(reloaded.model.states.size() == 3);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_model_file(path), IoError);
}
