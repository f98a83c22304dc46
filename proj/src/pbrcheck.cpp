#include "hvwork/pbrcheck.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace hvwork::pbrcheck {

namespace {

constexpr int kDimCap = 16;

double state_distance(const qcore::PureState& a, const qcore::PureState& b) {
  if (a.dim() != b.dim()) return 1.0;
  double worst = 0.0;
  for (int k = 0; k < a.dim(); ++k) {
    worst = std::max(worst, std::abs(a.amplitudes()[k] - b.amplitudes()[k]));
  }
  return worst;
}

// The scenario's measurement as registered in the composite's catalog.
std::string find_scenario_observable(const composer::CompositeModel& composite,
                                     const PbrScenario& scenario) {
  for (const auto& [obs_id, meas] : composite.base.observables) {
    if (meas.dim() != scenario.measurement().dim()) continue;
    if (meas.outcomes() != scenario.measurement().outcomes()) continue;
    bool same = true;
    for (int j = 0; j < meas.dim() && same; ++j) {
      same = state_distance(meas.basis()[j], scenario.measurement().basis()[j]) <=
             1e-9;
    }
    if (same) return obs_id;
  }
  throw LookupError(
      "composite carries no observable matching the scenario measurement");
}

void check_preparations_match(const composer::CompositeModel& composite,
                              const PbrScenario& scenario) {
  const auto& preps = composite.info.preparation_ids;
  if (preps.size() != scenario.products().size()) {
    throw ArgumentError("composite has " + std::to_string(preps.size()) +
                        " preparations but the scenario enumerates " +
                        std::to_string(scenario.products().size()));
  }
  for (size_t j = 0; j < preps.size(); ++j) {
    if (state_distance(composite.base.state(preps[j]), scenario.products()[j]) >
        1e-9) {
      throw ArgumentError("composite preparation '" + preps[j] +
                          "' does not match the scenario product state " +
                          std::to_string(j + 1));
    }
  }
}

// The composite's single state-independent table; LookupError if there is
// none, ArgumentError if the choice is ambiguous.
const hvframe::ResponseTable& sole_any_table(
    const composer::CompositeModel& composite) {
  const hvframe::ResponseTable* found = nullptr;
  for (const hvframe::ResponseTable& t : composite.base.responses) {
    if (t.state_tag != kAnyStateTag) continue;
    if (found) {
      throw ArgumentError(
          "composite carries more than one state-independent table");
    }
    found = &t;
  }
  if (!found) {
    throw LookupError("composite carries no state-independent response table");
  }
  return *found;
}

std::string find_shared_cell(const composer::CompositeModel& composite) {
  for (const hvframe::Cell& c : composite.base.space.cells()) {
    bool in_all = true;
    for (const std::string& prep : composite.info.preparation_ids) {
      if (composite.base.density(prep).weight(c.id) <= 0.0) {
        in_all = false;
        break;
      }
    }
    if (in_all) return c.id;
  }
  throw NoWitnessError(
      "no hidden variable is shared by every preparation; the lemma premise "
      "is unsatisfied");
}

}  // namespace

std::vector<qcore::PureState> build_product_states(const qcore::PureState& psi1,
                                                   const qcore::PureState& psi2,
                                                   int L) {
  if (L < 1) throw ArgumentError("component count L must be at least 1");
  if (psi1.dim() != psi2.dim()) {
    throw ArgumentError("pair states have different dimensions");
  }
  if (std::abs(qcore::inner_product(psi1, psi2)) >= 1.0 - kTolerance) {
    throw ArgumentError("pair states must be distinct");
  }
  long dim = 1;
  for (int i = 0; i < L; ++i) {
    dim *= psi1.dim();
    if (dim > kDimCap) {
      throw ArgumentError("product dimension exceeds the cap of " +
                          std::to_string(kDimCap));
    }
  }
  std::vector<qcore::PureState> out;
  const int count = 1 << L;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    std::vector<qcore::PureState> factors;
    for (int i = 0; i < L; ++i) {
      factors.push_back(((j >> (L - 1 - i)) & 1) ? psi2 : psi1);
    }
    out.push_back(qcore::tensor_product(
        std::span<const qcore::PureState>(factors.data(), factors.size())));
  }
  return out;
}

qcore::ProjectiveMeasurement pbr_basis_l2() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<qcore::PureState> basis;
  basis.emplace_back(
      std::vector<qcore::Complex>{{0, 0}, {s, 0}, {s, 0}, {0, 0}});
  basis.emplace_back(
      std::vector<qcore::Complex>{{0.5, 0}, {-0.5, 0}, {0.5, 0}, {0.5, 0}});
  basis.emplace_back(
      std::vector<qcore::Complex>{{0.5, 0}, {0.5, 0}, {-0.5, 0}, {0.5, 0}});
  basis.emplace_back(
      std::vector<qcore::Complex>{{s, 0}, {0, 0}, {0, 0}, {-s, 0}});
  qcore::ProjectiveMeasurement meas(std::move(basis), {"1", "2", "3", "4"});

  if (qcore::identity_resolution_residual(meas) > kTolerance) {
    throw InternalError("canonical basis does not resolve the identity");
  }
  const auto products = build_product_states(qcore::ket0(), qcore::ket_plus(), 2);
  const auto residuals = verify_antidistinguishing(
      meas, std::span<const qcore::PureState>(products.data(), products.size()));
  for (double r : residuals) {
    if (r > kTolerance) {
      throw InternalError("canonical basis fails to antidistinguish");
    }
  }
  return meas;
}

std::vector<double> verify_antidistinguishing(
    const qcore::ProjectiveMeasurement& meas,
    std::span<const qcore::PureState> products) {
  if (static_cast<int>(products.size()) != meas.dim()) {
    throw ArgumentError("scenario lists " + std::to_string(products.size()) +
                        " product states for a measurement with " +
                        std::to_string(meas.dim()) + " outcomes");
  }
  std::vector<double> residuals;
  residuals.reserve(products.size());
  for (size_t j = 0; j < products.size(); ++j) {
    residuals.push_back(
        qcore::born_probability(products[j], meas, {meas.outcomes()[j]}));
  }
  return residuals;
}

PbrScenario::PbrScenario(qcore::PureState psi1, qcore::PureState psi2, int L,
                         qcore::ProjectiveMeasurement meas)
    : psi1_(std::move(psi1)),
      psi2_(std::move(psi2)),
      num_components_(L),
      products_(build_product_states(psi1_, psi2_, L)),
      meas_(std::move(meas)) {
  if (meas_.dim() != static_cast<int>(products_.size())) {
    throw ArgumentError("measurement needs one outcome per product state");
  }
  const auto residuals = verify_antidistinguishing(
      meas_,
      std::span<const qcore::PureState>(products_.data(), products_.size()));
  for (size_t j = 0; j < residuals.size(); ++j) {
    if (residuals[j] > kTolerance) {
      throw InvariantError(
          "measurement is not antidistinguishing: Born(phi_" +
          std::to_string(j + 1) + ", {" + meas_.outcomes()[j] + "}) = " +
          std::to_string(residuals[j]));
    }
  }
}

PbrScenario PbrScenario::canonical() {
  return PbrScenario(qcore::ket0(), qcore::ket_plus(), 2, pbr_basis_l2());
}

std::string lemma_kind_name(LemmaKind kind) {
  switch (kind) {
    case LemmaKind::kContradiction: return "CONTRADICTION";
    case LemmaKind::kConsistentStateDependent: return "CONSISTENT_STATE_DEPENDENT";
    case LemmaKind::kInefficiency: return "INEFFICIENCY";
  }
  throw InternalError("unhandled lemma kind");
}

LemmaVerdict detect_lemma_contradiction(const composer::CompositeModel& composite,
                                        const PbrScenario& scenario,
                                        double tolerance) {
  const std::string obs_id = find_scenario_observable(composite, scenario);
  check_preparations_match(composite, scenario);

  bool any_tagged = false;
  const hvframe::ResponseTable* any_table = nullptr;
  for (const hvframe::ResponseTable& t : composite.base.responses) {
    if (t.observable != obs_id) continue;
    if (t.state_tag == kAnyStateTag) {
      any_table = &t;
    } else {
      any_tagged = true;
    }
  }
  if (!any_table && !any_tagged) {
    throw LookupError("composite carries no response table for observable '" +
                      obs_id + "'");
  }

  LemmaVerdict verdict;
  if (!any_table) {
    verdict.kind = LemmaKind::kConsistentStateDependent;
    return verdict;
  }

  // Premise: the table reproduces the antidistinguishing Born zeros.
  const auto& outcomes = scenario.measurement().outcomes();
  for (size_t j = 0; j < composite.info.preparation_ids.size(); ++j) {
    const std::string& prep = composite.info.preparation_ids[j];
    const double residual =
        any_table->augmented
            ? hvframe::check_conditional_reproduction(composite.base, prep,
                                                      obs_id, {outcomes[j]})
            : hvframe::check_born_reproduction(composite.base, prep, obs_id,
                                               {outcomes[j]});
    if (residual > tolerance) {
      throw PreconditionError(
          "the state-independent table does not reproduce the zero Born "
          "probability of outcome " + outcomes[j] + " for preparation '" +
          prep + "' (residual " + std::to_string(residual) + ")");
    }
  }

  verdict.witness_cell = find_shared_cell(composite);
  for (const std::string& label : outcomes) {
    verdict.chain.push_back(any_table->value(verdict.witness_cell, {label}));
  }
  verdict.totality = any_table->value(verdict.witness_cell, outcomes);
  verdict.theta_weight = any_table->theta_weight(verdict.witness_cell);
  verdict.kind = any_table->augmented ? LemmaKind::kInefficiency
                                      : LemmaKind::kContradiction;
  return verdict;
}

InefficiencyReport builtin_inefficiency(const composer::CompositeModel& composite) {
  const hvframe::ResponseTable& table = sole_any_table(composite);
  InefficiencyReport report;
  if (!table.augmented) {
    report.note =
        "table is not augmented: the no-show probability is zero by definition";
    for (const hvframe::Cell& c : composite.base.space.cells()) {
      report.theta_by_cell.push_back({c.id, 0.0});
    }
    for (const std::string& prep : composite.info.preparation_ids) {
      report.aggregate_by_preparation.push_back({prep, 0.0});
    }
    return report;
  }
  for (const hvframe::Cell& c : composite.base.space.cells()) {
    report.theta_by_cell.push_back({c.id, table.theta_weight(c.id)});
  }
  for (const std::string& prep : composite.info.preparation_ids) {
    const hvframe::StateDensity& density = composite.base.density(prep);
    double acc = 0.0;
    for (const hvframe::Cell& c : composite.base.space.cells()) {
      const double mass = density.weight(c.id) * c.measure;
      acc += table.theta_weight(c.id) * mass;
    }
    report.aggregate_by_preparation.push_back({prep, acc});
    report.worst_case = std::max(report.worst_case, acc);
  }
  return report;
}

IdentityResolutionAudit additivity_audit(const composer::CompositeModel& composite,
                                         const std::string& cell_id) {
  const hvframe::ResponseTable& table = sole_any_table(composite);
  if (!table.deterministic()) {
    throw PreconditionError(
        "additivity audits read value assignments; the table is stochastic");
  }
  if (!composite.base.space.has_cell(cell_id)) {
    throw LookupError("unknown cell id '" + cell_id + "'");
  }
  const qcore::ProjectiveMeasurement& meas =
      composite.base.observable(table.observable);

  IdentityResolutionAudit audit;
  audit.cell = cell_id;
  for (const std::string& label : meas.outcomes()) {
    audit.projector_values.push_back(table.value(cell_id, {label}));
  }
  audit.value_sum = table.value(cell_id, meas.outcomes());
  audit.identity_value = 1.0;
  audit.mismatch = audit.value_sum != audit.identity_value;
  audit.operator_residual = qcore::identity_resolution_residual(meas);
  return audit;
}

void attach_forced_state_independent_table(composer::CompositeModel& composite,
                                           const PbrScenario& scenario,
                                           const std::string& observable_id) {
  check_preparations_match(composite, scenario);
  if (composite.base.observables.count(observable_id)) {
    throw ArgumentError("observable id '" + observable_id + "' already exists");
  }
  const auto& outcomes = scenario.measurement().outcomes();
  const auto& preps = composite.info.preparation_ids;

  hvframe::ResponseTable table;
  table.observable = observable_id;
  table.state_tag = kAnyStateTag;
  table.diagnostic = true;  // the all-zero rows at shared cells are the point

  for (const hvframe::Cell& c : composite.base.space.cells()) {
    hvframe::ResponseRow row;
    for (const std::string& label : outcomes) row[label] = 0.0;
    for (size_t j = 0; j < preps.size(); ++j) {
      if (composite.base.density(preps[j]).weight(c.id) <= 0.0) {
        row[outcomes[j]] = 1.0;  // first preparation that excludes the cell
        break;
      }
    }
    table.rows[c.id] = std::move(row);
  }
  composite.base.observables.emplace(observable_id, scenario.measurement());
  composite.base.responses.push_back(std::move(table));
  hvframe::validate_model(composite.base);
}

void attach_state_dependent_born_tables(composer::CompositeModel& composite,
                                        const PbrScenario& scenario,
                                        const std::string& observable_id) {
  check_preparations_match(composite, scenario);
  if (composite.base.observables.count(observable_id)) {
    throw ArgumentError("observable id '" + observable_id + "' already exists");
  }
  const auto& outcomes = scenario.measurement().outcomes();
  composite.base.observables.emplace(observable_id, scenario.measurement());
  for (const std::string& prep : composite.info.preparation_ids) {
    hvframe::ResponseTable table;
    table.observable = observable_id;
    table.state_tag = prep;
    hvframe::ResponseRow row;
    const std::vector<double> probs =
        qcore::born_vector(composite.base.state(prep), scenario.measurement());
    for (size_t j = 0; j < outcomes.size(); ++j) row[outcomes[j]] = probs[j];
    for (const hvframe::Cell& c : composite.base.space.cells()) {
      table.rows[c.id] = row;
    }
    composite.base.responses.push_back(std::move(table));
  }
  hvframe::validate_model(composite.base);
}

}  // namespace hvwork::pbrcheck
