#pragma once

#include <string>
#include <vector>

#include "hvwork/hvframe.hpp"

// The concrete toy models: the mixed unit-interval model, its segregated
// variants (disjoint intervals on the line, rays on the unit circle), and
// the uniform state-dependent model whose response rows are the Born
// probabilities themselves.
namespace hvwork::toymodels {

struct NamedState {
  std::string id;
  qcore::PureState state;
};

// A bivalent qubit observable with outcomes {+1, -1}.
struct ToyObservable {
  std::string id;
  qcore::ProjectiveMeasurement measurement;

  ToyObservable(std::string id_, qcore::ProjectiveMeasurement meas);
};

enum class Geometry {
  kSharedUnitInterval,
  kDisjointIntervals,
  kUnitCircleRays,
};

Geometry geometry_from_name(const std::string& name);
std::string geometry_name(Geometry g);

// Shared unit interval (0,1], partitioned at every Born threshold in play;
// uniform distribution; deterministic per-state response tables with +1
// exactly on the cells below the state's threshold.
hvframe::HVModel build_mixed_toy(const std::vector<NamedState>& states,
                                 const std::vector<ToyObservable>& observables);

// Same construction repeated inside per-state disjoint blocks. Block
// geometry is carried in the cell ids; block measures are scaled by the
// next power of two >= state count so every audit reproduces the mixed
// model's sums bit for bit, with any remainder parked in a zero-density
// slack cell.
hvframe::HVModel build_segregated_toy(const std::vector<NamedState>& states,
                                      const std::vector<ToyObservable>& observables,
                                      Geometry geometry);

// Single-cell unit space, uniform densities, and per-state stochastic rows
// equal to each state's Born vector under the measurement.
hvframe::HVModel build_uniform_state_dependent(
    const qcore::ProjectiveMeasurement& meas, const std::string& observable_id,
    const std::vector<NamedState>& states);

// Canonical fixtures used by the demos: {|0>, |+>, (|0>+i|1>)/sqrt2} and
// the three Pauli observables.
std::vector<NamedState> canonical_toy_states();
std::vector<ToyObservable> pauli_observables();

}  // namespace hvwork::toymodels
