#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hvwork/pbrcheck.hpp"
#include "hvwork/toymodels.hpp"

using namespace hvwork;
using namespace hvwork::pbrcheck;

namespace {

composer::CompositeModel forced_composite(const PbrScenario& scenario,
                                          double q = 0.25) {
  composer::CompositeModel composite = composer::compose_independent(
      composer::balanced_overlap_component(q), "psi1", "psi2", 2);
  attach_forced_state_independent_table(composite, scenario, "M");
  return composite;
}

qcore::ProjectiveMeasurement zz_basis() {
  std::vector<qcore::PureState> basis;
  basis.push_back(qcore::tensor_product({qcore::ket0(), qcore::ket0()}));
  basis.push_back(qcore::tensor_product({qcore::ket0(), qcore::ket1()}));
  basis.push_back(qcore::tensor_product({qcore::ket1(), qcore::ket0()}));
  basis.push_back(qcore::tensor_product({qcore::ket1(), qcore::ket1()}));
  return qcore::ProjectiveMeasurement(std::move(basis), {"1", "2", "3", "4"});
}

}  // namespace

TEST_CASE("product states enumerate in binary order") {
  const auto products =
      build_product_states(qcore::ket0(), qcore::ket_plus(), 2);
  REQUIRE(products.size() == 4);
  const double s = 1.0 / std::sqrt(2.0);
  // |00>, |0+>, |+0>, |++>
  CHECK(products[0].amplitudes()[0].real() == 1.0);
  CHECK(products[1].amplitudes()[0].real() == doctest::Approx(s));
  CHECK(products[1].amplitudes()[1].real() == doctest::Approx(s));
  CHECK(std::abs(products[1].amplitudes()[2]) == 0.0);
  CHECK(products[2].amplitudes()[2].real() == doctest::Approx(s));
  CHECK(products[3].amplitudes()[3].real() == doctest::Approx(0.5));

  const auto pair = build_product_states(qcore::ket0(), qcore::ket_plus(), 1);
  CHECK(pair.size() == 2);
  CHECK(pair[0].amplitudes() == qcore::ket0().amplitudes());
  CHECK(pair[1].amplitudes() == qcore::ket_plus().amplitudes());

  const auto eight = build_product_states(qcore::ket0(), qcore::ket_plus(), 3);
  CHECK(eight.size() == 8);
  for (const auto& state : eight) {
    double n2 = 0.0;
    for (const auto& a : state.amplitudes()) n2 += std::norm(a);
    CHECK(std::abs(n2 - 1.0) <= 1e-12);
  }

  CHECK_THROWS_AS(build_product_states(qcore::ket0(), qcore::ket0(), 2),
                  ArgumentError);
}

TEST_CASE("the canonical joint basis certifies itself") {
  const auto meas = pbr_basis_l2();
  CHECK(meas.dim() == 4);
  CHECK(qcore::identity_resolution_residual(meas) <= 1e-12);
  const auto products =
      build_product_states(qcore::ket0(), qcore::ket_plus(), 2);
  const auto residuals = verify_antidistinguishing(
      meas, std::span<const qcore::PureState>(products.data(), products.size()));
  for (double r : residuals) CHECK(r <= 1e-12);
}

TEST_CASE("Z(x)Z fails to antidistinguish |++> at the last outcome") {
  const auto products =
      build_product_states(qcore::ket0(), qcore::ket_plus(), 2);
  const auto residuals = verify_antidistinguishing(
      zz_basis(),
      std::span<const qcore::PureState>(products.data(), products.size()));
  // |00> yields its own outcome with certainty, the opposite of
  // antidistinguishing; |++> lands on outcome 4 with probability 1/4.
  CHECK(residuals[0] == 1.0);
  CHECK(residuals[3] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("verify_antidistinguishing rejects count mismatches") {
  const auto products =
      build_product_states(qcore::ket0(), qcore::ket_plus(), 1);
  CHECK_THROWS_AS(
      verify_antidistinguishing(zz_basis(),
                                std::span<const qcore::PureState>(
                                    products.data(), products.size())),
      ArgumentError);
}

TEST_CASE("scenario construction enforces the antidistinguishing property") {
  CHECK_THROWS_AS(
      PbrScenario(qcore::ket0(), qcore::ket_plus(), 2, zz_basis()),
      InvariantError);
  const PbrScenario ok = PbrScenario::canonical();
  CHECK(ok.num_components() == 2);
  CHECK(ok.products().size() == 4);
}

TEST_CASE("forced state-independent table yields the contradiction verdict") {
  const PbrScenario scenario = PbrScenario::canonical();
  const auto composite = forced_composite(scenario);
  const LemmaVerdict verdict = detect_lemma_contradiction(composite, scenario);
  CHECK(verdict.kind == LemmaKind::kContradiction);
  CHECK(verdict.witness_cell == "ov|ov");
  REQUIRE(verdict.chain.size() == 4);
  for (double v : verdict.chain) CHECK(v == 0.0);
  CHECK(verdict.totality == 0.0);
  CHECK(lemma_kind_name(verdict.kind) == "CONTRADICTION");
}

TEST_CASE("the contradiction also appears over the mixed toy") {
  const PbrScenario scenario = PbrScenario::canonical();
  const hvframe::HVModel toy = toymodels::build_mixed_toy(
      {{"ket0", qcore::ket0()}, {"ket_plus", qcore::ket_plus()}},
      toymodels::pauli_observables());
  composer::CompositeModel composite =
      composer::compose_independent(toy, "ket0", "ket_plus", 2);
  attach_forced_state_independent_table(composite, scenario, "M");
  const LemmaVerdict verdict = detect_lemma_contradiction(composite, scenario);
  CHECK(verdict.kind == LemmaKind::kContradiction);
  for (double v : verdict.chain) CHECK(v == 0.0);
  CHECK(verdict.totality == 0.0);
}

TEST_CASE("per-preparation tables evade the argument") {
  const PbrScenario scenario = PbrScenario::canonical();
  composer::CompositeModel composite = composer::compose_independent(
      composer::balanced_overlap_component(0.25), "psi1", "psi2", 2);
  attach_state_dependent_born_tables(composite, scenario, "M");
  const LemmaVerdict verdict = detect_lemma_contradiction(composite, scenario);
  CHECK(verdict.kind == LemmaKind::kConsistentStateDependent);
  // And they reproduce the Born statistics outright.
  for (const auto& prep : composite.info.preparation_ids) {
    for (const std::string& label : scenario.measurement().outcomes()) {
      CHECK(hvframe::check_born_reproduction(composite.base, prep, "M",
                                             {label}) <= 1e-12);
    }
  }
}

TEST_CASE("the prism composite turns the contradiction into inefficiency") {
  const PbrScenario scenario = PbrScenario::canonical();
  const composer::CompositeModel prism = composer::build_prism_composite(
      composer::balanced_overlap_component(0.25), "psi1", "psi2", 2,
      scenario.measurement(), "M");
  const LemmaVerdict verdict = detect_lemma_contradiction(prism, scenario);
  CHECK(verdict.kind == LemmaKind::kInefficiency);
  CHECK(verdict.witness_cell == "ov|ov");
  CHECK(verdict.theta_weight == 1.0);
  for (double v : verdict.chain) CHECK(v == 0.0);
}

TEST_CASE("detect requires a shared hidden variable") {
  const PbrScenario scenario = PbrScenario::canonical();
  hvframe::HVModel component = composer::balanced_overlap_component(0.25);
  hvframe::StateDensity da;
  da.weights["aOnly"] = 1.0 / 0.375;
  hvframe::StateDensity db;
  db.weights["bOnly"] = 1.0 / 0.375;
  component.densities.at("psi1") = da;
  component.densities.at("psi2") = db;
  hvframe::validate_model(component);
  composer::CompositeModel composite =
      composer::compose_independent(component, "psi1", "psi2", 2);
  attach_forced_state_independent_table(composite, scenario, "M");
  CHECK_THROWS_AS(detect_lemma_contradiction(composite, scenario),
                  NoWitnessError);
}

TEST_CASE("detect rejects tables that ignore the Born zeros") {
  const PbrScenario scenario = PbrScenario::canonical();
  composer::CompositeModel composite = composer::compose_independent(
      composer::balanced_overlap_component(0.25), "psi1", "psi2", 2);
  hvframe::ResponseTable uniform;
  uniform.observable = "M";
  uniform.state_tag = kAnyStateTag;
  for (const hvframe::Cell& c : composite.base.space.cells()) {
    uniform.rows[c.id] = {{"1", 0.25}, {"2", 0.25}, {"3", 0.25}, {"4", 0.25}};
  }
  composite.base.observables.emplace("M", scenario.measurement());
  composite.base.responses.push_back(std::move(uniform));
  hvframe::validate_model(composite.base);
  CHECK_THROWS_AS(detect_lemma_contradiction(composite, scenario),
                  PreconditionError);
}

TEST_CASE("built-in inefficiency aggregates to 1-(1-q)^L") {
  const PbrScenario scenario = PbrScenario::canonical();
  const composer::CompositeModel prism = composer::build_prism_composite(
      composer::balanced_overlap_component(0.25), "psi1", "psi2", 2,
      scenario.measurement(), "M");
  const InefficiencyReport report = builtin_inefficiency(prism);
  CHECK(report.note.empty());
  REQUIRE(report.aggregate_by_preparation.size() == 4);
  for (const auto& [prep, value] : report.aggregate_by_preparation) {
    CHECK(std::abs(value - 0.4375) <= 1e-12);
  }
  CHECK(std::abs(report.worst_case - 0.4375) <= 1e-12);
  for (const auto& [cell, theta] : report.theta_by_cell) {
    if (cell == "ov|ov") CHECK(theta == 1.0);
  }
}

TEST_CASE("inefficiency of a plain table is zero by definition") {
  const PbrScenario scenario = PbrScenario::canonical();
  const auto composite = forced_composite(scenario);
  const InefficiencyReport report = builtin_inefficiency(composite);
  CHECK_FALSE(report.note.empty());
  for (const auto& [prep, value] : report.aggregate_by_preparation) {
    CHECK(value == 0.0);
  }
  CHECK(report.worst_case == 0.0);
}

TEST_CASE("additivity audit at the shared cell reports the value gap") {
  const PbrScenario scenario = PbrScenario::canonical();
  const auto composite = forced_composite(scenario);
  const IdentityResolutionAudit audit = additivity_audit(composite, "ov|ov");
  REQUIRE(audit.projector_values.size() == 4);
  for (double v : audit.projector_values) CHECK(v == 0.0);
  CHECK(audit.value_sum == 0.0);
  CHECK(audit.identity_value == 1.0);
  CHECK(audit.mismatch);
  CHECK(audit.operator_residual <= 1e-12);
}

TEST_CASE("additivity holds at every cell off the shared support") {
  const PbrScenario scenario = PbrScenario::canonical();
  const auto composite = forced_composite(scenario);
  for (const hvframe::Cell& cell : composite.base.space.cells()) {
    if (cell.id == "ov|ov") continue;
    const IdentityResolutionAudit audit = additivity_audit(composite, cell.id);
    CHECK(audit.value_sum == 1.0);
    CHECK_FALSE(audit.mismatch);
  }
}

TEST_CASE("additivity audit preconditions") {
  const PbrScenario scenario = PbrScenario::canonical();
  const composer::CompositeModel prism = composer::build_prism_composite(
      composer::balanced_overlap_component(0.25), "psi1", "psi2", 2,
      scenario.measurement(), "M");
  CHECK_THROWS_AS(additivity_audit(prism, "ov|ov"), PreconditionError);

  const auto composite = forced_composite(scenario);
  CHECK_THROWS_AS(additivity_audit(composite, "ghost"), LookupError);
}

TEST_CASE("forced table reproduces the antidistinguishing zeros exactly") {
  const PbrScenario scenario = PbrScenario::canonical();
  const auto composite = forced_composite(scenario);
  const auto& outcomes = scenario.measurement().outcomes();
  for (size_t j = 0; j < composite.info.preparation_ids.size(); ++j) {
    CHECK(hvframe::check_born_reproduction(composite.base,
                                           composite.info.preparation_ids[j],
                                           "M", {outcomes[j]}) == 0.0);
    // Pointwise: the response vanishes on the preparation's support.
    CHECK(hvframe::pointwise_support_violations(
              composite.base, composite.info.preparation_ids[j], "M",
              outcomes[j])
              .empty());
  }
}
