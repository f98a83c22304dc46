#include "hvwork/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace hvwork::qcore {

namespace {

double squared_norm(const std::vector<Complex>& amps) {
  double acc = 0.0;
  for (const Complex& a : amps) acc += std::norm(a);
  return acc;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

PureState::PureState(std::vector<Complex> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) {
    throw ArgumentError("pure state needs at least one amplitude");
  }
  const double n2 = squared_norm(amplitudes_);
  if (std::abs(n2 - 1.0) > kTolerance) {
    throw ArgumentError("pure state is not normalized: squared norm " +
                        std::to_string(n2));
  }
}

Complex inner_product(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) {
    throw ArgumentError("inner product of states with dimensions " +
                        std::to_string(a.dim()) + " and " +
                        std::to_string(b.dim()));
  }
  Complex acc{0.0, 0.0};
  for (int k = 0; k < a.dim(); ++k) {
    acc += std::conj(a.amplitudes()[k]) * b.amplitudes()[k];
  }
  return acc;
}

PureState tensor_product(std::span<const PureState> factors) {
  if (factors.empty()) {
    throw ArgumentError("tensor product of an empty factor list");
  }
  std::vector<Complex> out{Complex{1.0, 0.0}};
  for (const PureState& f : factors) {
    std::vector<Complex> next;
    next.reserve(out.size() * f.amplitudes().size());
    for (const Complex& a : out) {
      for (const Complex& b : f.amplitudes()) {
        next.push_back(a * b);
      }
    }
    out = std::move(next);
  }
  return PureState(std::move(out));
}

PureState tensor_product(std::initializer_list<PureState> factors) {
  return tensor_product(std::span<const PureState>(factors.begin(), factors.size()));
}

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<PureState> basis,
                                             std::vector<std::string> outcomes)
    : basis_(std::move(basis)), outcomes_(std::move(outcomes)) {
  if (basis_.empty()) {
    throw ArgumentError("measurement needs at least one basis vector");
  }
  const int d = basis_.front().dim();
  for (const PureState& v : basis_) {
    if (v.dim() != d) {
      throw ArgumentError("measurement basis vectors have mixed dimensions");
    }
  }
  if (static_cast<int>(basis_.size()) != d) {
    throw ArgumentError("measurement basis must span the space: " +
                        std::to_string(basis_.size()) + " vectors in dimension " +
                        std::to_string(d));
  }
  if (outcomes_.size() != basis_.size()) {
    throw ArgumentError("outcome label count does not match basis size");
  }
  std::set<std::string> seen;
  for (const std::string& label : outcomes_) {
    if (label == kThetaLabel) {
      throw ArgumentError("outcome label '" + std::string(kThetaLabel) +
                          "' is reserved for the augmented spectrum");
    }
    if (!seen.insert(label).second) {
      throw ArgumentError("duplicate outcome label '" + label + "'");
    }
  }
  const double gram = orthonormality_residual(basis_);
  if (gram > kTolerance) {
    throw ArgumentError("measurement basis is not orthonormal: Gram residual " +
                        std::to_string(gram));
  }
}

bool ProjectiveMeasurement::has_outcome(const std::string& label) const {
  return std::find(outcomes_.begin(), outcomes_.end(), label) != outcomes_.end();
}

int ProjectiveMeasurement::outcome_index(const std::string& label) const {
  auto it = std::find(outcomes_.begin(), outcomes_.end(), label);
  if (it == outcomes_.end()) {
    throw LookupError("unknown outcome label '" + label + "'");
  }
  return static_cast<int>(it - outcomes_.begin());
}

double born_probability(const PureState& state,
                        const ProjectiveMeasurement& meas,
                        const OutcomeSet& s) {
  if (state.dim() != meas.dim()) {
    throw ArgumentError("state dimension " + std::to_string(state.dim()) +
                        " does not match measurement dimension " +
                        std::to_string(meas.dim()));
  }
  std::set<std::string> members;
  for (const std::string& label : s) {
    if (!meas.has_outcome(label)) {
      throw ArgumentError("outcome '" + label + "' is not in the spectrum");
    }
    if (!members.insert(label).second) {
      throw ArgumentError("outcome set repeats label '" + label + "'");
    }
  }
  double acc = 0.0;
  for (int j = 0; j < meas.dim(); ++j) {
    if (members.count(meas.outcomes()[j])) {
      acc += std::norm(inner_product(meas.basis()[j], state));
    }
  }
  return acc;
}

std::vector<double> born_vector(const PureState& state,
                                const ProjectiveMeasurement& meas) {
  if (state.dim() != meas.dim()) {
    throw ArgumentError("state dimension does not match measurement dimension");
  }
  std::vector<double> probs(meas.dim());
  for (int j = 0; j < meas.dim(); ++j) {
    probs[j] = std::norm(inner_product(meas.basis()[j], state));
  }
  return probs;
}

double identity_resolution_residual(std::span<const PureState> vectors, int dim) {
  if (dim <= 0) throw ArgumentError("dimension must be positive");
  for (const PureState& v : vectors) {
    if (v.dim() != dim) {
      throw ArgumentError("projector dimension does not match requested dimension");
    }
  }
  double worst = 0.0;
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      Complex acc{0.0, 0.0};
      for (const PureState& v : vectors) {
        acc += v.amplitudes()[r] * std::conj(v.amplitudes()[c]);
      }
      const Complex expect = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      worst = std::max(worst, std::abs(acc - expect));
    }
  }
  return worst;
}

double identity_resolution_residual(const ProjectiveMeasurement& meas) {
  return identity_resolution_residual(
      std::span<const PureState>(meas.basis().data(), meas.basis().size()),
      meas.dim());
}

double orthonormality_residual(std::span<const PureState> vectors) {
  double worst = 0.0;
  for (size_t i = 0; i < vectors.size(); ++i) {
    for (size_t j = 0; j < vectors.size(); ++j) {
      const Complex g = inner_product(vectors[i], vectors[j]);
      const Complex expect = (i == j) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      worst = std::max(worst, std::abs(g - expect));
    }
  }
  return worst;
}

PureState ket0() { return PureState({{1.0, 0.0}, {0.0, 0.0}}); }
PureState ket1() { return PureState({{0.0, 0.0}, {1.0, 0.0}}); }
PureState ket_plus() { return PureState({{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}}); }
PureState ket_minus() { return PureState({{kInvSqrt2, 0.0}, {-kInvSqrt2, 0.0}}); }
PureState ket_i_plus() { return PureState({{kInvSqrt2, 0.0}, {0.0, kInvSqrt2}}); }
PureState ket_i_minus() { return PureState({{kInvSqrt2, 0.0}, {0.0, -kInvSqrt2}}); }

ProjectiveMeasurement pauli_x() {
  return ProjectiveMeasurement({ket_plus(), ket_minus()}, {"+1", "-1"});
}

ProjectiveMeasurement pauli_y() {
  return ProjectiveMeasurement({ket_i_plus(), ket_i_minus()}, {"+1", "-1"});
}

ProjectiveMeasurement pauli_z() {
  return ProjectiveMeasurement({ket0(), ket1()}, {"+1", "-1"});
}

}  // namespace hvwork::qcore
