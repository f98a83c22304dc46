#include "hvwork/demos.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "hvwork/toymodels.hpp"

namespace hvwork::demos {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string classification_string(const hvframe::Classification& c) {
  return hvframe::mixture_name(c) + ", " + hvframe::dependence_name(c) + ", " +
         hvframe::determinism_name(c);
}

// Single-cell component with uniform densities for the canonical pair; the
// trivial substrate for composing the uniform state-dependent model.
hvframe::HVModel uniform_pair_component() {
  hvframe::HVModel model;
  model.label = "uniform pair component";
  model.space = hvframe::HVSpace({{"c0", 1.0}}, "unit interval (one cell)");
  model.states.emplace("ket0", qcore::ket0());
  model.states.emplace("ket_plus", qcore::ket_plus());
  hvframe::StateDensity d;
  d.weights["c0"] = 1.0;
  model.densities.emplace("ket0", d);
  model.densities.emplace("ket_plus", d);
  hvframe::validate_model(model);
  return model;
}

composer::CompositeModel contradiction_composite(const pbrcheck::PbrScenario& scenario) {
  const hvframe::HVModel toy = toymodels::build_mixed_toy(
      toymodels::canonical_toy_states(), toymodels::pauli_observables());
  composer::CompositeModel composite =
      composer::compose_independent(toy, "ket0", "ket_plus", 2);
  pbrcheck::attach_forced_state_independent_table(composite, scenario, "M");
  return composite;
}

composer::CompositeModel state_dependent_composite(const pbrcheck::PbrScenario& scenario) {
  composer::CompositeModel composite = composer::compose_independent(
      uniform_pair_component(), "ket0", "ket_plus", 2);
  pbrcheck::attach_state_dependent_born_tables(composite, scenario, "M");
  return composite;
}

composer::CompositeModel prism_composite(const pbrcheck::PbrScenario& scenario) {
  return composer::build_prism_composite(composer::balanced_overlap_component(0.25),
                                         "psi1", "psi2", 2,
                                         scenario.measurement(), "M");
}

composer::CompositeModel additivity_composite(const pbrcheck::PbrScenario& scenario) {
  composer::CompositeModel composite = composer::compose_independent(
      composer::balanced_overlap_component(0.25), "psi1", "psi2", 2);
  pbrcheck::attach_forced_state_independent_table(composite, scenario, "M");
  return composite;
}

void run_toy(DemoReport& report, double tol) {
  const hvframe::HVModel toy = toymodels::build_mixed_toy(
      toymodels::canonical_toy_states(), toymodels::pauli_observables());
  for (const auto& [state_id, state] : toy.states) {
    (void)state;
    for (const auto& [obs_id, meas] : toy.observables) {
      for (const std::string& label : meas.outcomes()) {
        const double r =
            hvframe::check_born_reproduction(toy, state_id, obs_id, {label});
        report.add("born reproduction " + state_id + " " + obs_id + " {" +
                       label + "}",
                   "averaged response vs Born probability", r, r <= tol);
      }
    }
  }
  const hvframe::Classification c = hvframe::classify(toy);
  report.add("classification", classification_string(c),
             0.0, c.mixed && c.state_dependent && c.deterministic);
}

void run_segregate(DemoReport& report, double tol) {
  const hvframe::HVModel toy = toymodels::build_mixed_toy(
      toymodels::canonical_toy_states(), toymodels::pauli_observables());
  const hvframe::HVModel seg = transforms::segregate(toy);

  for (auto i = seg.states.begin(); i != seg.states.end(); ++i) {
    for (auto j = std::next(i); j != seg.states.end(); ++j) {
      const auto overlap = hvframe::overlap_report(seg, i->first, j->first);
      report.add("support overlap " + i->first + " / " + j->first,
                 "q_base after segregation", overlap.q_base,
                 overlap.q_base == 0.0);
    }
  }
  const hvframe::Classification c = hvframe::classify(seg);
  report.add("classification", classification_string(c), 0.0,
             !c.mixed && c.state_dependent && c.deterministic);

  const auto eq = transforms::assert_equivalent(toy, seg, transforms::full_suite(toy));
  report.add("statistics preserved",
             std::to_string(eq.results.size()) + " triples, max delta " +
                 fmt(eq.max_delta),
             eq.max_delta, eq.pass);
  (void)tol;
}

void run_mix(DemoReport& report, double tol) {
  const hvframe::HVModel seg = toymodels::build_segregated_toy(
      toymodels::canonical_toy_states(), toymodels::pauli_observables(),
      toymodels::Geometry::kDisjointIntervals);
  const hvframe::HVModel mixed = transforms::mix(seg);

  const hvframe::Classification c = hvframe::classify(mixed);
  report.add("classification", classification_string(c), 0.0, c.mixed);
  for (auto i = mixed.states.begin(); i != mixed.states.end(); ++i) {
    for (auto j = std::next(i); j != mixed.states.end(); ++j) {
      const auto overlap = hvframe::overlap_report(mixed, i->first, j->first);
      report.add("support overlap " + i->first + " / " + j->first,
                 "q_base after mixing", overlap.q_base, overlap.q_base == 1.0);
    }
  }
  const auto eq = transforms::assert_equivalent(seg, mixed, transforms::full_suite(seg));
  report.add("statistics preserved",
             std::to_string(eq.results.size()) + " triples, max delta " +
                 fmt(eq.max_delta),
             eq.max_delta, eq.pass);

  const hvframe::HVModel toy = toymodels::build_mixed_toy(
      toymodels::canonical_toy_states(), toymodels::pauli_observables());
  const hvframe::HVModel round_trip = transforms::mix(transforms::segregate(toy));
  const auto rt = transforms::assert_equivalent(toy, round_trip,
                                                transforms::full_suite(toy));
  report.add("mix(segregate(model)) round trip",
             std::to_string(rt.results.size()) + " triples, max delta " +
                 fmt(rt.max_delta),
             rt.max_delta, rt.pass);
  (void)tol;
}

void run_pbr(DemoReport& report, double tol) {
  const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
  const auto& meas = scenario.measurement();

  const double gram = qcore::orthonormality_residual(
      std::span<const qcore::PureState>(meas.basis().data(), meas.basis().size()));
  report.add("joint basis orthonormal", "largest Gram-matrix deviation", gram,
             gram <= tol);
  const double identity = qcore::identity_resolution_residual(meas);
  report.add("joint basis resolves the identity",
             "largest deviation of the projector sum", identity,
             identity <= tol);
  const auto anti = pbrcheck::verify_antidistinguishing(
      meas, std::span<const qcore::PureState>(scenario.products().data(),
                                              scenario.products().size()));
  for (size_t j = 0; j < anti.size(); ++j) {
    report.add("antidistinguishing outcome " + meas.outcomes()[j],
               "Born probability of the matching product state", anti[j],
               anti[j] <= tol);
  }

  {
    const composer::CompositeModel composite = contradiction_composite(scenario);
    const pbrcheck::LemmaVerdict verdict =
        pbrcheck::detect_lemma_contradiction(composite, scenario, tol);
    std::string chain = "chain (";
    for (size_t j = 0; j < verdict.chain.size(); ++j) {
      chain += (j ? "," : "") + fmt(verdict.chain[j]);
    }
    chain += "), totality " + fmt(verdict.totality) + " at cell " +
             verdict.witness_cell;
    bool chain_zero = true;
    for (double v : verdict.chain) chain_zero = chain_zero && v == 0.0;
    report.add("state-independent plain table",
               pbrcheck::lemma_kind_name(verdict.kind) + ": " + chain, 0.0,
               verdict.kind == pbrcheck::LemmaKind::kContradiction &&
                   chain_zero && verdict.totality == 0.0);
  }

  {
    const composer::CompositeModel composite = state_dependent_composite(scenario);
    const pbrcheck::LemmaVerdict verdict =
        pbrcheck::detect_lemma_contradiction(composite, scenario, tol);
    report.add("state-dependent tables",
               pbrcheck::lemma_kind_name(verdict.kind), 0.0,
               verdict.kind == pbrcheck::LemmaKind::kConsistentStateDependent);
    for (const std::string& prep : composite.info.preparation_ids) {
      for (const std::string& label : meas.outcomes()) {
        const double r =
            hvframe::check_born_reproduction(composite.base, prep, "M", {label});
        report.add("state-dependent reproduction " + prep + " {" + label + "}",
                   "averaged response vs Born probability", r, r <= tol);
      }
    }
  }

  {
    const composer::CompositeModel composite = prism_composite(scenario);
    const pbrcheck::LemmaVerdict verdict =
        pbrcheck::detect_lemma_contradiction(composite, scenario, tol);
    report.add("state-independent augmented table",
               pbrcheck::lemma_kind_name(verdict.kind) + ": theta weight " +
                   fmt(verdict.theta_weight) + " at cell " + verdict.witness_cell,
               0.0,
               verdict.kind == pbrcheck::LemmaKind::kInefficiency &&
                   verdict.theta_weight == 1.0);

    for (const std::string& prep : composite.info.preparation_ids) {
      for (const std::string& label : meas.outcomes()) {
        const double r = hvframe::check_conditional_reproduction(
            composite.base, prep, "M", {label});
        report.add("conditional reproduction " + prep + " {" + label + "}",
                   "outcome-conditioned average vs Born probability", r,
                   r <= tol);
      }
    }

    const pbrcheck::InefficiencyReport ineff =
        pbrcheck::builtin_inefficiency(composite);
    const double expected = 1.0 - std::pow(1.0 - 0.25, 2);
    for (const auto& [prep, aggregate] : ineff.aggregate_by_preparation) {
      report.add("built-in inefficiency " + prep,
                 "no-show probability vs 1-(1-q)^L = " + fmt(expected),
                 std::abs(aggregate - expected),
                 std::abs(aggregate - expected) <= tol);
    }
  }
}

void run_additivity(DemoReport& report, double tol) {
  const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
  const composer::CompositeModel composite = additivity_composite(scenario);
  const pbrcheck::LemmaVerdict verdict =
      pbrcheck::detect_lemma_contradiction(composite, scenario, tol);

  const pbrcheck::IdentityResolutionAudit audit =
      pbrcheck::additivity_audit(composite, verdict.witness_cell);
  bool all_zero = true;
  for (double v : audit.projector_values) all_zero = all_zero && v == 0.0;
  report.add("projector values at the shared cell " + audit.cell,
             "sum of values " + fmt(audit.value_sum) + ", value of sum " +
                 fmt(audit.identity_value),
             0.0, all_zero && audit.mismatch && audit.identity_value == 1.0);
  report.add("identity resolution",
             "operator residual of the projector sum", audit.operator_residual,
             audit.operator_residual <= tol);

  // Away from the shared support, the value assignment is additive.
  std::set<std::string> shared;
  for (const hvframe::Cell& c : composite.base.space.cells()) {
    bool in_all = true;
    for (const std::string& prep : composite.info.preparation_ids) {
      if (composite.base.density(prep).weight(c.id) <= 0.0) {
        in_all = false;
        break;
      }
    }
    if (in_all) shared.insert(c.id);
  }
  int off_cells = 0;
  bool additive = true;
  for (const hvframe::Cell& c : composite.base.space.cells()) {
    if (shared.count(c.id)) continue;
    ++off_cells;
    const auto cell_audit = pbrcheck::additivity_audit(composite, c.id);
    additive = additive && cell_audit.value_sum == 1.0 && !cell_audit.mismatch;
  }
  report.add("additivity away from the shared support",
             std::to_string(off_cells) + " cells, each summing to 1", 0.0,
             additive && off_cells > 0);
}

}  // namespace

void DemoReport::add(const std::string& name, const std::string& detail,
                     double residual, bool ok) {
  checks.push_back({name, detail, residual, ok});
  pass = pass && ok;
}

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = {"toy", "segregate", "mix",
                                                 "pbr", "additivity"};
  return names;
}

DemoReport run_demo(const std::string& name, double tolerance) {
  DemoReport report;
  report.demo = name;
  if (name == "toy") {
    run_toy(report, tolerance);
  } else if (name == "segregate") {
    run_segregate(report, tolerance);
  } else if (name == "mix") {
    run_mix(report, tolerance);
  } else if (name == "pbr") {
    run_pbr(report, tolerance);
  } else if (name == "additivity") {
    run_additivity(report, tolerance);
  } else {
    throw ArgumentError("unknown demo '" + name +
                        "' (expected toy, segregate, mix, pbr, or additivity)");
  }
  return report;
}

DemoModels demo_models(const std::string& name) {
  DemoModels out;
  const auto states = toymodels::canonical_toy_states();
  const auto observables = toymodels::pauli_observables();
  if (name == "toy") {
    out.models.push_back(
        {"mixed_toy.json",
         {toymodels::build_mixed_toy(states, observables), std::nullopt}});
    out.models.push_back(
        {"segregated_toy_intervals.json",
         {toymodels::build_segregated_toy(states, observables,
                                          toymodels::Geometry::kDisjointIntervals),
          std::nullopt}});
    out.models.push_back(
        {"segregated_toy_rays.json",
         {toymodels::build_segregated_toy(states, observables,
                                          toymodels::Geometry::kUnitCircleRays),
          std::nullopt}});
    const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
    std::vector<toymodels::NamedState> products;
    for (size_t j = 0; j < scenario.products().size(); ++j) {
      products.push_back({"phi" + std::to_string(j + 1), scenario.products()[j]});
    }
    out.models.push_back(
        {"uniform_state_dependent.json",
         {toymodels::build_uniform_state_dependent(scenario.measurement(), "M",
                                                   products),
          std::nullopt}});
  } else if (name == "segregate") {
    const hvframe::HVModel toy = toymodels::build_mixed_toy(states, observables);
    out.models.push_back({"mixed_toy.json", {toy, std::nullopt}});
    out.models.push_back(
        {"segregated_mixed_toy.json", {transforms::segregate(toy), std::nullopt}});
  } else if (name == "mix") {
    const hvframe::HVModel seg = toymodels::build_segregated_toy(
        states, observables, toymodels::Geometry::kDisjointIntervals);
    out.models.push_back({"segregated_toy_intervals.json", {seg, std::nullopt}});
    out.models.push_back(
        {"mixed_from_segregated.json", {transforms::mix(seg), std::nullopt}});
  } else if (name == "pbr") {
    const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
    out.models.push_back({"pbr_component.json",
                          {composer::balanced_overlap_component(0.25),
                           std::nullopt}});
    {
      const composer::CompositeModel c = prism_composite(scenario);
      out.models.push_back({"pbr_prism_composite.json", {c.base, c.info}});
    }
    {
      const composer::CompositeModel c = contradiction_composite(scenario);
      out.models.push_back({"pbr_contradiction_composite.json", {c.base, c.info}});
    }
    {
      const composer::CompositeModel c = state_dependent_composite(scenario);
      out.models.push_back(
          {"pbr_state_dependent_composite.json", {c.base, c.info}});
    }
    out.documents.push_back(
        {"pbr_basis.json", model_io::measurement_to_json(scenario.measurement())});
    out.documents.push_back(
        {"pbr_scenario.json",
         model_io::scenario_to_json(scenario.psi1(), scenario.psi2(),
                                    scenario.num_components())});
  } else if (name == "additivity") {
    const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
    const composer::CompositeModel c = additivity_composite(scenario);
    out.models.push_back({"additivity_composite.json", {c.base, c.info}});
  } else {
    throw ArgumentError("unknown demo '" + name + "'");
  }
  return out;
}

}  // namespace hvwork::demos
