#pragma once

// Hand-built fixture models shared by the unit tests.

#include "hvwork/hvframe.hpp"

namespace fixtures {

using namespace hvwork;

// Two-cell unit interval split at 0.5, states |0> and |+>, observable Z,
// deterministic threshold tables. The in-memory twin of the simplest mixed
// toy model.
inline hvframe::HVModel z_threshold_model() {
  hvframe::HVModel model;
  model.label = "z threshold fixture";
  model.space = hvframe::HVSpace({{"c0", 0.5}, {"c1", 0.5}}, "unit interval");
  model.states.emplace("zero", qcore::ket0());
  model.states.emplace("plus", qcore::ket_plus());

  hvframe::StateDensity uniform;
  uniform.weights["c0"] = 1.0;
  uniform.weights["c1"] = 1.0;
  model.densities.emplace("zero", uniform);
  model.densities.emplace("plus", uniform);

  model.observables.emplace("Z", qcore::pauli_z());

  hvframe::ResponseTable zero_table;
  zero_table.observable = "Z";
  zero_table.state_tag = "zero";
  zero_table.rows["c0"] = {{"+1", 1.0}, {"-1", 0.0}};
  zero_table.rows["c1"] = {{"+1", 1.0}, {"-1", 0.0}};
  model.responses.push_back(zero_table);

  hvframe::ResponseTable plus_table;
  plus_table.observable = "Z";
  plus_table.state_tag = "plus";
  plus_table.rows["c0"] = {{"+1", 1.0}, {"-1", 0.0}};
  plus_table.rows["c1"] = {{"+1", 0.0}, {"-1", 1.0}};
  model.responses.push_back(plus_table);

  hvframe::validate_model(model);
  return model;
}

// Four equal cells; supports (0, 0.5] and (0.25, 0.75] with uniform
// densities. Overlap is the single cell (0.25, 0.5].
inline hvframe::HVModel staggered_support_model() {
  hvframe::HVModel model;
  model.label = "staggered supports";
  model.space = hvframe::HVSpace(
      {{"c0", 0.25}, {"c1", 0.25}, {"c2", 0.25}, {"c3", 0.25}}, "unit interval");
  model.states.emplace("first", qcore::ket0());
  model.states.emplace("second", qcore::ket_plus());

  hvframe::StateDensity first;
  first.weights["c0"] = 2.0;
  first.weights["c1"] = 2.0;
  model.densities.emplace("first", std::move(first));
  hvframe::StateDensity second;
  second.weights["c1"] = 2.0;
  second.weights["c2"] = 2.0;
  model.densities.emplace("second", std::move(second));

  hvframe::validate_model(model);
  return model;
}

}  // namespace fixtures
