#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "hvwork/composer.hpp"
#include "hvwork/pbrcheck.hpp"
#include "hvwork/transforms.hpp"

using namespace hvwork;
using namespace hvwork::composer;

namespace {

// Disjoint twin of the balanced component: same cells, supports split so
// that the pair never overlaps.
hvframe::HVModel disjoint_component() {
  hvframe::HVModel model = balanced_overlap_component(0.25);
  hvframe::StateDensity da;
  da.weights["aOnly"] = 1.0 / 0.375;
  hvframe::StateDensity db;
  db.weights["bOnly"] = 1.0 / 0.375;
  model.densities.at("psi1") = da;
  model.densities.at("psi2") = db;
  hvframe::validate_model(model);
  return model;
}

}  // namespace

TEST_CASE("balanced component has the advertised overlap numbers") {
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  const auto r = hvframe::overlap_report(c, "psi1", "psi2");
  CHECK(r.q_base == 0.25);
  CHECK(r.q_under_first == 0.25);
  CHECK(r.q_under_second == 0.25);
  const auto full = balanced_overlap_component(1.0);
  CHECK(hvframe::overlap_report(full, "psi1", "psi2").q_base == 1.0);
  CHECK_THROWS_AS(balanced_overlap_component(0.0), ArgumentError);
  CHECK_THROWS_AS(balanced_overlap_component(1.5), ArgumentError);
}

TEST_CASE("independent composite: common support measure is q^L") {
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  const CompositeModel composite = compose_independent(c, "psi1", "psi2", 2);
  CHECK(composite.info.preparation_ids.size() == 4);

  // Cell scan oracle, written against the densities directly.
  double scanned = 0.0;
  for (const hvframe::Cell& cell : composite.base.space.cells()) {
    bool shared = true;
    for (const auto& prep : composite.info.preparation_ids) {
      shared = shared && composite.base.density(prep).weight(cell.id) > 0.0;
    }
    if (shared) scanned += cell.measure;
  }
  CHECK(std::abs(scanned - 0.0625) <= 1e-12);
  CHECK(std::abs(common_support_base_measure(composite) - 0.0625) <= 1e-12);
}

TEST_CASE("full overlap keeps common support measure 1 for any L") {
  const hvframe::HVModel c = balanced_overlap_component(1.0);
  for (int L = 1; L <= 3; ++L) {
    const CompositeModel composite = compose_independent(c, "psi1", "psi2", L);
    CHECK(std::abs(common_support_base_measure(composite) - 1.0) <= 1e-12);
  }
}

TEST_CASE("L = 1 composition is the identity up to preparation selection") {
  const hvframe::HVModel component = fixtures::z_threshold_model();
  const CompositeModel composite =
      compose_independent(component, "zero", "plus", 1);
  CHECK(composite.info.preparation_ids ==
        std::vector<std::string>{"zero", "plus"});
  const auto report = transforms::assert_equivalent(
      component, composite.base, transforms::full_suite(composite.base));
  CHECK(report.pass);
  CHECK(report.max_delta == 0.0);
}

TEST_CASE("compose argument errors") {
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  CHECK_THROWS_AS(compose_independent(c, "psi1", "psi1", 2), ArgumentError);
  CHECK_THROWS_AS(compose_independent(c, "psi1", "psi2", 0), ArgumentError);
  CHECK_THROWS_AS(compose_independent(c, "ghost", "psi2", 2), LookupError);
  // Composite dimension cap: qubits allow L <= 4.
  CHECK_THROWS_AS(compose_independent(c, "psi1", "psi2", 5), ArgumentError);
}

TEST_CASE("independent products are compatible when the pair overlaps") {
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  const CompositeModel composite = compose_independent(c, "psi1", "psi2", 2);
  const CompatibilityResult r = check_compatibility(composite, c, "psi1", "psi2");
  CHECK(r.holds);
  CHECK_FALSE(r.counterexample_cell.has_value());
}

TEST_CASE("zeroing a diagonal weight breaks compatibility with a witness") {
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  CompositeModel composite = compose_independent(c, "psi1", "psi2", 2);
  auto& density = composite.base.densities.at("psi1|psi1");
  density.weights.erase("ov|ov");
  // Rescale so the density still integrates to 1.
  double remaining = 0.0;
  for (const hvframe::Cell& cell : composite.base.space.cells()) {
    remaining += density.weight(cell.id) * cell.measure;
  }
  for (auto& [cell, w] : density.weights) w /= remaining;
  hvframe::validate_model(composite.base);

  const CompatibilityResult r = check_compatibility(composite, c, "psi1", "psi2");
  CHECK_FALSE(r.holds);
  CHECK(r.counterexample_cell == std::string("ov|ov"));
  // The only shared cell was the diagonal one, so compactness fails too.
  const CompactnessResult k = check_compactness(composite, c, "psi1", "psi2");
  CHECK(k.kind == CompactnessKind::kNoneViolated);
}

TEST_CASE("segregated components satisfy both conditions vacuously") {
  const hvframe::HVModel c = disjoint_component();
  const CompositeModel composite = compose_independent(c, "psi1", "psi2", 2);
  CHECK(check_compatibility(composite, c, "psi1", "psi2").holds);
  const CompactnessResult k = check_compactness(composite, c, "psi1", "psi2");
  CHECK(k.kind == CompactnessKind::kNoneVacuous);
  CHECK(k.holds());
}

TEST_CASE("provenance mismatches are rejected") {
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  const CompositeModel composite = compose_independent(c, "psi1", "psi2", 2);
  CHECK_THROWS_AS(check_compatibility(composite, c, "psi2", "psi1"),
                  ArgumentError);
  const hvframe::HVModel other = fixtures::z_threshold_model();
  CHECK_THROWS_AS(check_compatibility(composite, other, "psi1", "psi2"),
                  ArgumentError);
}

TEST_CASE("compatible rule blends in a diagonal correlation") {
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  const CompositeModel composite =
      compose(c, "psi1", "psi2", 2, CompositionRule::kCompatible);
  CHECK(check_compatibility(composite, c, "psi1", "psi2").holds);
  // Diagonal weight is half the product weight plus the correlation term
  // 0.5 / measure(ov|ov) = 0.5 / 0.0625.
  CHECK(composite.base.density("psi1|psi1").weight("ov|ov") ==
        doctest::Approx(8.5).epsilon(1e-12));
  CHECK(check_compactness(composite, c, "psi1", "psi2").kind ==
        CompactnessKind::kWitness);
}

TEST_CASE("compact-native rule passes compactness but fails compatibility") {
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  const CompositeModel composite =
      compose(c, "psi1", "psi2", 2, CompositionRule::kCompactNative);
  CHECK(composite.info.native_cell_ids ==
        std::vector<std::string>{"native0"});

  const CompatibilityResult compat =
      check_compatibility(composite, c, "psi1", "psi2");
  CHECK_FALSE(compat.holds);
  CHECK(compat.counterexample_cell == std::string("ov|ov"));

  const CompactnessResult compact =
      check_compactness(composite, c, "psi1", "psi2");
  CHECK(compact.kind == CompactnessKind::kWitness);
  CHECK(compact.witness_cell == std::string("native0"));

  // Every preparation keeps unit mass after the move onto the native cell.
  for (const auto& prep : composite.info.preparation_ids) {
    double mass = 0.0;
    for (const hvframe::Cell& cell : composite.base.space.cells()) {
      mass += composite.base.density(prep).weight(cell.id) * cell.measure;
    }
    CHECK(std::abs(mass - 1.0) <= 1e-12);
  }
}

TEST_CASE("prism composite reproduces conditional Born probabilities exactly") {
  const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  const CompositeModel prism = build_prism_composite(
      c, "psi1", "psi2", 2, scenario.measurement(), "M");

  for (const auto& prep : prism.info.preparation_ids) {
    for (const std::string& label : scenario.measurement().outcomes()) {
      CHECK(hvframe::check_conditional_reproduction(prism.base, prep, "M",
                                                    {label}) <= 1e-12);
    }
  }
  // Fully overlapped cells answer theta with certainty.
  const hvframe::ResponseTable& t = prism.base.responses.front();
  CHECK(t.state_tag == kAnyStateTag);
  CHECK(t.augmented);
  CHECK(t.theta_weight("ov|ov") == 1.0);
  // A determined cell carries the Born row of its preparation:
  // (aOnly, bOnly) fixes |0+>, whose first-outcome probability is 0.25.
  CHECK(t.value("aOnly|bOnly", {"1"}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(t.theta_weight("aOnly|bOnly") == 0.0);

  // Cells that are not fully overlapped determine their preparation.
  for (const auto& [cell, row] : t.rows) {
    const double theta = t.theta_weight(cell);
    if (theta < 1.0) {
      double total = 0.0;
      for (const auto& [label, p] : row) {
        if (label != kThetaLabel) total += p;
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
  CHECK_FALSE(hvframe::classify(prism.base).state_dependent);
}

TEST_CASE("prism over a disjoint pair never answers theta") {
  const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
  const CompositeModel prism = build_prism_composite(
      disjoint_component(), "psi1", "psi2", 2, scenario.measurement(), "M");
  const hvframe::ResponseTable& t = prism.base.responses.front();
  for (const auto& prep : prism.info.preparation_ids) {
    const auto& density = prism.base.density(prep);
    for (const hvframe::Cell& cell : prism.base.space.cells()) {
      if (density.weight(cell.id) > 0.0) {
        CHECK(t.theta_weight(cell.id) == 0.0);
      }
    }
    for (const std::string& label : scenario.measurement().outcomes()) {
      CHECK(hvframe::check_conditional_reproduction(prism.base, prep, "M",
                                                    {label}) <= 1e-12);
    }
  }
}

TEST_CASE("prism build errors") {
  const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
  CHECK_THROWS_AS(build_prism_composite(balanced_overlap_component(1.0), "psi1",
                                        "psi2", 2, scenario.measurement(), "M"),
                  TotalNoShowError);
  CHECK_THROWS_AS(build_prism_composite(balanced_overlap_component(0.25),
                                        "psi1", "psi2", 2, qcore::pauli_z(),
                                        "M"),
                  ArgumentError);
}

TEST_CASE("a minimal all-components trigger cannot stay state independent") {
  // Exploratory: replace the prism's any-component trigger with the minimal
  // one (theta only when every component is overlapped), completing the
  // partially overlapped cells with the first state's row. Conditional
  // reproduction then fails for preparations that used the second state.
  const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
  const hvframe::HVModel c = balanced_overlap_component(0.25);
  CompositeModel prism = build_prism_composite(
      c, "psi1", "psi2", 2, scenario.measurement(), "M");

  const auto& da = c.density("psi1");
  const auto& db = c.density("psi2");
  hvframe::ResponseTable& t = prism.base.responses.front();
  for (const hvframe::Cell& comp1 : c.space.cells()) {
    for (const hvframe::Cell& comp2 : c.space.cells()) {
      const std::string id = comp1.id + "|" + comp2.id;
      bool all_overlap = true;
      bool any_support = true;
      std::string completion;
      for (const std::string& part : {comp1.id, comp2.id}) {
        const bool in_a = da.weight(part) > 0.0;
        const bool in_b = db.weight(part) > 0.0;
        all_overlap = all_overlap && (in_a && in_b);
        any_support = any_support && (in_a || in_b);
        completion += (completion.empty() ? "" : "|");
        completion += in_a ? "psi1" : "psi2";
      }
      if (all_overlap || !any_support) continue;
      if (t.theta_weight(id) == 1.0) {
        hvframe::ResponseRow row;
        const auto probs = qcore::born_vector(prism.base.state(completion),
                                              scenario.measurement());
        for (int j = 0; j < scenario.measurement().dim(); ++j) {
          row[scenario.measurement().outcomes()[j]] = probs[j];
        }
        t.rows[id] = std::move(row);
      }
    }
  }
  hvframe::validate_model(prism.base);
  const double residual = hvframe::check_conditional_reproduction(
      prism.base, "psi2|psi2", "M", {"4"});
  CHECK(residual == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("strictness property suite passes on a short seeded run") {
  const StrictnessReport report = strictness_property_suite(7, 40);
  CHECK(report.fixtures == 40);
  CHECK(report.implication_violations == 0);
  CHECK(report.canonical_gap_fixture);
  CHECK(report.compact_without_compatibility >= 1);
  CHECK(report.pass);
}
