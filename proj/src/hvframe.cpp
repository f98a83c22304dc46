#include "hvwork/hvframe.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace hvwork::hvframe {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

HVSpace::HVSpace(std::vector<Cell> cells, std::string label)
    : cells_(std::move(cells)), label_(std::move(label)) {
  for (size_t k = 0; k < cells_.size(); ++k) {
    const Cell& c = cells_[k];
    if (c.id.empty()) {
      throw InvariantError("space '" + label_ + "' has a cell with an empty id");
    }
    if (!(c.measure >= 0.0)) {
      throw InvariantError("cell '" + c.id + "' has negative measure " +
                           fmt(c.measure));
    }
    if (!index_.emplace(c.id, k).second) {
      throw InvariantError("duplicate cell id '" + c.id + "'");
    }
  }
}

bool HVSpace::has_cell(const std::string& id) const { return index_.count(id) > 0; }

const Cell& HVSpace::cell(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw LookupError("unknown cell id '" + id + "'");
  return cells_[it->second];
}

double HVSpace::total_measure() const {
  double acc = 0.0;
  for (const Cell& c : cells_) acc += c.measure;
  return acc;
}

const ResponseRow& ResponseTable::row(const std::string& cell_id) const {
  auto it = rows.find(cell_id);
  if (it == rows.end()) {
    throw LookupError("response table for observable '" + observable +
                      "' has no row for cell '" + cell_id + "'");
  }
  return it->second;
}

double ResponseTable::value(const std::string& cell_id,
                            const qcore::OutcomeSet& s) const {
  const ResponseRow& r = row(cell_id);
  double acc = 0.0;
  for (const std::string& label : s) {
    auto it = r.find(label);
    if (it != r.end()) acc += it->second;
  }
  return acc;
}

double ResponseTable::theta_weight(const std::string& cell_id) const {
  const ResponseRow& r = row(cell_id);
  auto it = r.find(kThetaLabel);
  return it == r.end() ? 0.0 : it->second;
}

bool ResponseTable::deterministic() const {
  for (const auto& [cell, row] : rows) {
    for (const auto& [label, p] : row) {
      if (p != 0.0 && p != 1.0) return false;
    }
  }
  return true;
}

const qcore::PureState& HVModel::state(const std::string& id) const {
  auto it = states.find(id);
  if (it == states.end()) throw LookupError("unknown state id '" + id + "'");
  return it->second;
}

const qcore::ProjectiveMeasurement& HVModel::observable(const std::string& id) const {
  auto it = observables.find(id);
  if (it == observables.end()) {
    throw LookupError("unknown observable id '" + id + "'");
  }
  return it->second;
}

const StateDensity& HVModel::density(const std::string& id) const {
  auto it = densities.find(id);
  if (it == densities.end()) {
    throw LookupError("no density for state id '" + id + "'");
  }
  return it->second;
}

const ResponseTable& HVModel::response_for(const std::string& observable_id,
                                           const std::string& state_id) const {
  const ResponseTable* tagged = nullptr;
  for (const ResponseTable& t : responses) {
    if (t.observable != observable_id) continue;
    if (t.state_tag == kAnyStateTag) return t;
    if (t.state_tag == state_id) tagged = &t;
  }
  if (tagged) return *tagged;
  throw LookupError("no response table for observable '" + observable_id +
                    "' and state '" + state_id + "'");
}

std::vector<std::string> HVModel::support(const std::string& state_id) const {
  const StateDensity& d = density(state_id);
  std::vector<std::string> out;
  for (const Cell& c : space.cells()) {
    if (d.weight(c.id) > 0.0) out.push_back(c.id);
  }
  return out;
}

void validate_model(const HVModel& model) {
  const double space_total = model.space.total_measure();
  if (std::abs(space_total - 1.0) > kTolerance) {
    throw InvariantError("space '" + model.space.label() +
                         "' has total measure " + fmt(space_total) +
                         " (must be 1 within 1e-12)");
  }

  for (const auto& [state_id, density] : model.densities) {
    if (!model.states.count(state_id)) {
      throw InvariantError("density refers to state '" + state_id +
                           "' which is not in the state catalog");
    }
    double mass = 0.0;
    for (const auto& [cell_id, w] : density.weights) {
      if (!model.space.has_cell(cell_id)) {
        throw InvariantError("density for state '" + state_id +
                             "' refers to unknown cell '" + cell_id + "'");
      }
      if (!(w >= 0.0)) {
        throw InvariantError("density for state '" + state_id +
                             "' has negative weight at cell '" + cell_id + "'");
      }
    }
    for (const Cell& c : model.space.cells()) {
      mass += density.weight(c.id) * c.measure;
    }
    if (std::abs(mass - 1.0) > kTolerance) {
      throw InvariantError("density for state '" + state_id +
                           "' integrates to " + fmt(mass) +
                           " (must be 1 within 1e-12)");
    }
  }

  for (const auto& [state_id, state] : model.states) {
    if (state_id == kAnyStateTag) {
      throw InvariantError("state id '" + std::string(kAnyStateTag) +
                           "' is reserved for state-independent tables");
    }
    if (!model.densities.count(state_id)) {
      throw InvariantError("state '" + state_id + "' has no density");
    }
  }

  // Tagging style per observable: one ANY table, or one table per state.
  std::map<std::string, std::pair<int, std::set<std::string>>> per_obs;
  for (const ResponseTable& t : model.responses) {
    if (!model.observables.count(t.observable)) {
      throw InvariantError("response table refers to unknown observable '" +
                           t.observable + "'");
    }
    auto& entry = per_obs[t.observable];
    if (t.state_tag == kAnyStateTag) {
      entry.first += 1;
    } else {
      if (!model.states.count(t.state_tag)) {
        throw InvariantError("response table for observable '" + t.observable +
                             "' is tagged with unknown state '" + t.state_tag +
                             "'");
      }
      if (!entry.second.insert(t.state_tag).second) {
        throw InvariantError("observable '" + t.observable +
                             "' has two tables tagged with state '" +
                             t.state_tag + "'");
      }
    }

    const qcore::ProjectiveMeasurement& meas = model.observable(t.observable);
    for (const Cell& c : model.space.cells()) {
      auto row_it = t.rows.find(c.id);
      if (row_it == t.rows.end()) {
        throw InvariantError("response table for observable '" + t.observable +
                             "' has no row for cell '" + c.id + "'");
      }
      double total = 0.0;
      for (const auto& [label, p] : row_it->second) {
        if (label == kThetaLabel) {
          if (!t.augmented) {
            throw InvariantError(
                "response table for observable '" + t.observable +
                "' assigns theta at cell '" + c.id +
                "' but is not augmented");
          }
        } else if (!meas.has_outcome(label)) {
          throw InvariantError("response row for observable '" + t.observable +
                               "', cell '" + c.id +
                               "' refers to unknown outcome '" + label + "'");
        }
        if (p < -kTolerance || p > 1.0 + kTolerance) {
          throw InvariantError("response entry for observable '" +
                               t.observable + "', cell '" + c.id +
                               "', outcome '" + label + "' is " + fmt(p) +
                               " (must lie in [0,1])");
        }
        total += p;
      }
      if (!t.diagnostic && std::abs(total - 1.0) > kTolerance) {
        throw InvariantError(
            "response row for observable '" + t.observable + "', cell '" +
            c.id + "' sums to " + fmt(total) + " over the " +
            (t.augmented ? "augmented spectrum" : "spectrum") +
            " (must be 1 within 1e-12)");
      }
    }
    for (const auto& [cell_id, row] : t.rows) {
      if (!model.space.has_cell(cell_id)) {
        throw InvariantError("response table for observable '" + t.observable +
                             "' has a row for unknown cell '" + cell_id + "'");
      }
      (void)row;
    }
  }
  for (const auto& [obs_id, entry] : per_obs) {
    const auto& [any_count, tagged] = entry;
    if (any_count > 1) {
      throw InvariantError("observable '" + obs_id +
                           "' has more than one ANY-tagged table");
    }
    if (any_count > 0 && !tagged.empty()) {
      throw InvariantError("observable '" + obs_id +
                           "' mixes ANY-tagged and state-tagged tables");
    }
    if (any_count == 0) {
      for (const auto& [state_id, state] : model.states) {
        (void)state;
        if (!tagged.count(state_id)) {
          throw InvariantError("observable '" + obs_id +
                               "' has state-tagged tables but none for state '" +
                               state_id + "'");
        }
      }
    }
  }
}

std::string mixture_name(const Classification& c) {
  return c.mixed ? "mixed" : "segregated";
}
std::string dependence_name(const Classification& c) {
  return c.state_dependent ? "state-dependent" : "state-independent";
}
std::string determinism_name(const Classification& c) {
  return c.deterministic ? "deterministic" : "stochastic";
}

namespace {

void validate_outcome_set(const qcore::ProjectiveMeasurement& meas,
                          const qcore::OutcomeSet& s) {
  std::set<std::string> seen;
  for (const std::string& label : s) {
    if (label == kThetaLabel) {
      throw ArgumentError("outcome sets range over the spectrum only; '" +
                          std::string(kThetaLabel) + "' is reserved");
    }
    if (!meas.has_outcome(label)) {
      throw ArgumentError("outcome '" + label + "' is not in the spectrum");
    }
    if (!seen.insert(label).second) {
      throw ArgumentError("outcome set repeats label '" + label + "'");
    }
  }
}

// Average of the table over the density: sum of R(s,c) * (weight * measure),
// iterated in space order. The mass is computed first so that rescaled
// models reproduce the identical floating-point products.
double averaged_value(const HVModel& model, const ResponseTable& table,
                      const StateDensity& density, const qcore::OutcomeSet& s) {
  double acc = 0.0;
  for (const Cell& c : model.space.cells()) {
    const double mass = density.weight(c.id) * c.measure;
    acc += table.value(c.id, s) * mass;
  }
  return acc;
}

}  // namespace

double reproduced_probability(const HVModel& model, const std::string& state_id,
                              const std::string& observable_id,
                              const qcore::OutcomeSet& s) {
  const qcore::ProjectiveMeasurement& meas = model.observable(observable_id);
  validate_outcome_set(meas, s);
  const StateDensity& density = model.density(state_id);
  const ResponseTable& table = model.response_for(observable_id, state_id);
  const double num = averaged_value(model, table, density, s);
  if (!table.augmented) return num;
  const double den =
      averaged_value(model, table, density, meas.outcomes());
  if (std::abs(den) <= kTolerance) {
    throw TotalNoShowError("detection probability for state '" + state_id +
                           "' under observable '" + observable_id +
                           "' is 0; no outcome to condition on");
  }
  return num / den;
}

double check_born_reproduction(const HVModel& model, const std::string& state_id,
                               const std::string& observable_id,
                               const qcore::OutcomeSet& s) {
  const ResponseTable& table = model.response_for(observable_id, state_id);
  if (table.augmented) {
    throw WrongAuditError(
        "response table for observable '" + observable_id +
        "' is augmented; use the conditional reproduction audit");
  }
  const double reproduced = reproduced_probability(model, state_id, observable_id, s);
  const double born =
      qcore::born_probability(model.state(state_id), model.observable(observable_id), s);
  return std::abs(reproduced - born);
}

double check_conditional_reproduction(const HVModel& model,
                                      const std::string& state_id,
                                      const std::string& observable_id,
                                      const qcore::OutcomeSet& s) {
  const ResponseTable& table = model.response_for(observable_id, state_id);
  if (!table.augmented) {
    throw WrongAuditError("response table for observable '" + observable_id +
                          "' is not augmented; use the plain Born audit");
  }
  const double reproduced = reproduced_probability(model, state_id, observable_id, s);
  const double born =
      qcore::born_probability(model.state(state_id), model.observable(observable_id), s);
  return std::abs(reproduced - born);
}

OverlapReport overlap_report(const HVModel& model, const std::string& a,
                             const std::string& b) {
  const StateDensity& da = model.density(a);
  const StateDensity& db = model.density(b);
  (void)model.state(a);
  (void)model.state(b);
  OverlapReport report;
  report.first = a;
  report.second = b;
  for (const Cell& c : model.space.cells()) {
    const double wa = da.weight(c.id);
    const double wb = db.weight(c.id);
    if (wa > 0.0 && wb > 0.0) {
      report.q_base += c.measure;
      report.q_under_first += wa * c.measure;
      report.q_under_second += wb * c.measure;
    }
  }
  return report;
}

Classification classify(const HVModel& model) {
  Classification c;
  c.state_dependent = false;
  c.deterministic = true;
  for (const ResponseTable& t : model.responses) {
    if (t.state_tag != kAnyStateTag) c.state_dependent = true;
    if (!t.deterministic()) c.deterministic = false;
  }
  c.mixed = false;
  for (auto i = model.states.begin(); i != model.states.end() && !c.mixed; ++i) {
    for (auto j = std::next(i); j != model.states.end(); ++j) {
      if (overlap_report(model, i->first, j->first).q_base > 0.0) {
        c.mixed = true;
        break;
      }
    }
  }
  return c;
}

std::vector<std::string> pointwise_support_violations(
    const HVModel& model, const std::string& state_id,
    const std::string& observable_id, const std::string& outcome,
    double tolerance) {
  const StateDensity& density = model.density(state_id);
  const ResponseTable& table = model.response_for(observable_id, state_id);
  std::vector<std::string> out;
  for (const Cell& c : model.space.cells()) {
    const double mass = density.weight(c.id) * c.measure;
    if (mass > 0.0 && table.value(c.id, {outcome}) > tolerance) {
      out.push_back(c.id);
    }
  }
  return out;
}

UnitIntervalPartition partition_unit_interval(std::vector<double> thresholds,
                                              const std::string& label) {
  thresholds.push_back(1.0);
  std::sort(thresholds.begin(), thresholds.end());
  std::vector<double> uppers;
  for (double t : thresholds) {
    if (t <= 0.0 || t > 1.0) continue;  // boundaries at 0 or beyond 1 are no-ops
    if (!uppers.empty() && t == uppers.back()) continue;
    uppers.push_back(t);
  }
  std::vector<Cell> cells;
  double lower = 0.0;
  for (size_t k = 0; k < uppers.size(); ++k) {
    cells.push_back({"c" + std::to_string(k), uppers[k] - lower});
    lower = uppers[k];
  }
  UnitIntervalPartition part;
  part.uppers = std::move(uppers);
  part.space = HVSpace(std::move(cells), label);
  return part;
}

}  // namespace hvwork::hvframe
