#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "hvwork/common.hpp"

// Exact small-dimension complex linear algebra: pure states, tensor
// products, projective measurements and Born probabilities. Everything is
// immutable after construction and safe to share across threads.
namespace hvwork::qcore {

using Complex = std::complex<double>;

// A set of outcome labels, always a subset of some measurement's spectrum.
using OutcomeSet = std::vector<std::string>;

// Unit vector on a finite-dimensional Hilbert space.
class PureState {
 public:
  // Validates unit norm (squared norm within kTolerance of 1).
  explicit PureState(std::vector<Complex> amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

 private:
  std::vector<Complex> amplitudes_;
};

// <a|b>
Complex inner_product(const PureState& a, const PureState& b);

// Kronecker product of the factors, first factor varying slowest
// (big-endian index convention).
PureState tensor_product(std::span<const PureState> factors);
PureState tensor_product(std::initializer_list<PureState> factors);

// Orthonormal eigenbasis with distinct outcome labels, spanning the space.
class ProjectiveMeasurement {
 public:
  ProjectiveMeasurement(std::vector<PureState> basis,
                        std::vector<std::string> outcomes);

  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<PureState>& basis() const { return basis_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }

  bool has_outcome(const std::string& label) const;
  // Index of a label in the spectrum; LookupError if absent.
  int outcome_index(const std::string& label) const;

 private:
  std::vector<PureState> basis_;
  std::vector<std::string> outcomes_;
};

// Sum over s of |<basis_j|state>|^2. The set must be made of distinct
// labels from the measurement's spectrum.
double born_probability(const PureState& state,
                        const ProjectiveMeasurement& meas,
                        const OutcomeSet& s);

// Full probability vector over the spectrum, in outcome order.
std::vector<double> born_vector(const PureState& state,
                                const ProjectiveMeasurement& meas);

// Max entry deviation of sum_j |v_j><v_j| from the identity. The span
// overload accepts incomplete sets for diagnostic use.
double identity_resolution_residual(std::span<const PureState> vectors, int dim);
double identity_resolution_residual(const ProjectiveMeasurement& meas);

// Max deviation of the Gram matrix <v_i|v_j> from the identity.
double orthonormality_residual(std::span<const PureState> vectors);

// Canonical qubit states.
PureState ket0();
PureState ket1();
PureState ket_plus();
PureState ket_minus();
PureState ket_i_plus();   // (|0> + i|1>)/sqrt(2)
PureState ket_i_minus();  // (|0> - i|1>)/sqrt(2)

// Pauli measurements with outcomes {"+1", "-1"}.
ProjectiveMeasurement pauli_x();
ProjectiveMeasurement pauli_y();
ProjectiveMeasurement pauli_z();

}  // namespace hvwork::qcore
