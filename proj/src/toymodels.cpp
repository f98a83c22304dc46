#include "hvwork/toymodels.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <utility>

namespace hvwork::toymodels {

namespace {

void check_toy_inputs(const std::vector<NamedState>& states,
                      const std::vector<ToyObservable>& observables) {
  if (states.empty()) throw ArgumentError("at least one state is required");
  if (observables.empty()) throw ArgumentError("at least one observable is required");
  std::set<std::string> ids;
  for (const NamedState& s : states) {
    if (s.state.dim() != 2) {
      throw ArgumentError("state '" + s.id + "' is not a qubit");
    }
    if (!ids.insert(s.id).second) {
      throw ArgumentError("duplicate state id '" + s.id + "'");
    }
  }
  for (size_t i = 0; i < states.size(); ++i) {
    for (size_t j = i + 1; j < states.size(); ++j) {
      const double overlap =
          std::abs(qcore::inner_product(states[i].state, states[j].state));
      if (overlap >= 1.0 - kTolerance) {
        throw ArgumentError("states '" + states[i].id + "' and '" +
                            states[j].id + "' are not distinct");
      }
    }
  }
  std::set<std::string> obs_ids;
  for (const ToyObservable& o : observables) {
    if (!obs_ids.insert(o.id).second) {
      throw ArgumentError("duplicate observable id '" + o.id + "'");
    }
  }
}

// Born thresholds P_A^psi({+1}) for every (state, observable) pair.
std::vector<double> collect_thresholds(const std::vector<NamedState>& states,
                                       const std::vector<ToyObservable>& observables) {
  std::vector<double> thresholds;
  for (const ToyObservable& o : observables) {
    for (const NamedState& s : states) {
      thresholds.push_back(qcore::born_probability(s.state, o.measurement, {"+1"}));
    }
  }
  return thresholds;
}

hvframe::ResponseRow threshold_row(double upper, double threshold) {
  const bool plus = upper <= threshold;
  return {{"+1", plus ? 1.0 : 0.0}, {"-1", plus ? 0.0 : 1.0}};
}

std::string block_cell_id(Geometry geometry, const std::vector<NamedState>& states,
                          size_t state_index, size_t local_index) {
  const std::string local = "c" + std::to_string(local_index);
  if (geometry == Geometry::kUnitCircleRays) {
    return "ray(" + states[state_index].id + "):" + local;
  }
  return "(" + std::to_string(state_index) + "," +
         std::to_string(state_index + 1) + "]:" + local;
}

}  // namespace

ToyObservable::ToyObservable(std::string id_, qcore::ProjectiveMeasurement meas)
    : id(std::move(id_)), measurement(std::move(meas)) {
  if (measurement.dim() != 2 || measurement.outcomes() !=
                                    std::vector<std::string>{"+1", "-1"}) {
    throw ArgumentError("toy observable '" + id +
                        "' must be a qubit measurement with outcomes {+1, -1}");
  }
}

Geometry geometry_from_name(const std::string& name) {
  if (name == "shared-unit-interval") return Geometry::kSharedUnitInterval;
  if (name == "disjoint-intervals") return Geometry::kDisjointIntervals;
  if (name == "unit-circle-rays") return Geometry::kUnitCircleRays;
  throw ArgumentError("unknown geometry '" + name + "'");
}

std::string geometry_name(Geometry g) {
  switch (g) {
    case Geometry::kSharedUnitInterval: return "shared-unit-interval";
    case Geometry::kDisjointIntervals: return "disjoint-intervals";
    case Geometry::kUnitCircleRays: return "unit-circle-rays";
  }
  throw InternalError("unhandled geometry");
}

hvframe::HVModel build_mixed_toy(const std::vector<NamedState>& states,
                                 const std::vector<ToyObservable>& observables) {
  check_toy_inputs(states, observables);
  const auto part = hvframe::partition_unit_interval(
      collect_thresholds(states, observables), "unit interval (0,1]");

  hvframe::HVModel model;
  model.label = "mixed toy";
  model.space = part.space;
  for (const NamedState& s : states) {
    model.states.emplace(s.id, s.state);
    hvframe::StateDensity d;
    for (const hvframe::Cell& c : part.space.cells()) d.weights[c.id] = 1.0;
    model.densities.emplace(s.id, std::move(d));
  }
  for (const ToyObservable& o : observables) {
    model.observables.emplace(o.id, o.measurement);
    for (const NamedState& s : states) {
      const double t = qcore::born_probability(s.state, o.measurement, {"+1"});
      hvframe::ResponseTable table;
      table.observable = o.id;
      table.state_tag = s.id;
      for (size_t k = 0; k < part.uppers.size(); ++k) {
        table.rows["c" + std::to_string(k)] = threshold_row(part.uppers[k], t);
      }
      model.responses.push_back(std::move(table));
    }
  }
  hvframe::validate_model(model);
  return model;
}

hvframe::HVModel build_segregated_toy(const std::vector<NamedState>& states,
                                      const std::vector<ToyObservable>& observables,
                                      Geometry geometry) {
  if (geometry == Geometry::kSharedUnitInterval) {
    throw ArgumentError("shared-unit-interval is the mixed construction; "
                        "pick a segregated geometry");
  }
  check_toy_inputs(states, observables);
  const auto part = hvframe::partition_unit_interval(
      collect_thresholds(states, observables),
      "per-state blocks, " + geometry_name(geometry));

  const size_t block_count = std::bit_ceil(states.size());
  const double scale = static_cast<double>(block_count);

  hvframe::HVModel model;
  model.label = "segregated toy (" + geometry_name(geometry) + ")";

  std::vector<hvframe::Cell> cells;
  for (size_t si = 0; si < states.size(); ++si) {
    for (size_t k = 0; k < part.uppers.size(); ++k) {
      cells.push_back({block_cell_id(geometry, states, si, k),
                       part.space.cells()[k].measure / scale});
    }
  }
  const double slack =
      static_cast<double>(block_count - states.size()) / scale;
  if (slack > 0.0) cells.push_back({"slack", slack});
  model.space = hvframe::HVSpace(std::move(cells), part.space.label());

  for (size_t si = 0; si < states.size(); ++si) {
    const NamedState& s = states[si];
    model.states.emplace(s.id, s.state);
    hvframe::StateDensity d;
    for (size_t k = 0; k < part.uppers.size(); ++k) {
      d.weights[block_cell_id(geometry, states, si, k)] = scale;
    }
    model.densities.emplace(s.id, std::move(d));
  }

  for (const ToyObservable& o : observables) {
    model.observables.emplace(o.id, o.measurement);
    for (const NamedState& s : states) {
      const double t = qcore::born_probability(s.state, o.measurement, {"+1"});
      hvframe::ResponseTable table;
      table.observable = o.id;
      table.state_tag = s.id;
      // The same threshold rule at every block's local coordinate.
      for (size_t si = 0; si < states.size(); ++si) {
        for (size_t k = 0; k < part.uppers.size(); ++k) {
          table.rows[block_cell_id(geometry, states, si, k)] =
              threshold_row(part.uppers[k], t);
        }
      }
      if (slack > 0.0) table.rows["slack"] = {{"+1", 1.0}, {"-1", 0.0}};
      model.responses.push_back(std::move(table));
    }
  }
  hvframe::validate_model(model);
  return model;
}

hvframe::HVModel build_uniform_state_dependent(
    const qcore::ProjectiveMeasurement& meas, const std::string& observable_id,
    const std::vector<NamedState>& states) {
  if (states.empty()) throw ArgumentError("at least one state is required");
  for (const NamedState& s : states) {
    if (s.state.dim() != meas.dim()) {
      throw ArgumentError("state '" + s.id + "' has dimension " +
                          std::to_string(s.state.dim()) +
                          " but the measurement has dimension " +
                          std::to_string(meas.dim()));
    }
  }
  hvframe::HVModel model;
  model.label = "uniform state-dependent";
  model.space = hvframe::HVSpace({{"c0", 1.0}}, "unit interval (one cell)");
  model.observables.emplace(observable_id, meas);
  for (const NamedState& s : states) {
    model.states.emplace(s.id, s.state);
    hvframe::StateDensity d;
    d.weights["c0"] = 1.0;
    model.densities.emplace(s.id, std::move(d));

    hvframe::ResponseTable table;
    table.observable = observable_id;
    table.state_tag = s.id;
    hvframe::ResponseRow row;
    const std::vector<double> probs = qcore::born_vector(s.state, meas);
    for (int j = 0; j < meas.dim(); ++j) row[meas.outcomes()[j]] = probs[j];
    table.rows["c0"] = std::move(row);
    model.responses.push_back(std::move(table));
  }
  hvframe::validate_model(model);
  return model;
}

std::vector<NamedState> canonical_toy_states() {
  return {{"ket0", qcore::ket0()},
          {"ket_plus", qcore::ket_plus()},
          {"ket_i", qcore::ket_i_plus()}};
}

std::vector<ToyObservable> pauli_observables() {
  std::vector<ToyObservable> out;
  out.emplace_back("X", qcore::pauli_x());
  out.emplace_back("Y", qcore::pauli_y());
  out.emplace_back("Z", qcore::pauli_z());
  return out;
}

}  // namespace hvwork::toymodels
