#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hvwork/composer.hpp"

// The antidistinguishing scenario engine: product-state enumeration, the
// canonical four-outcome joint measurement, detection of the state-
// independence contradiction, built-in inefficiency accounting, and the
// additivity (value-assignment) audit.
namespace hvwork::pbrcheck {

// The 2^L tensor products psi_{x_1} (x) ... (x) psi_{x_L} in binary
// enumeration order of (x_1..x_L).
std::vector<qcore::PureState> build_product_states(const qcore::PureState& psi1,
                                                   const qcore::PureState& psi2,
                                                   int L);

// The canonical joint measurement for the pair (|0>, |+>) with L = 2:
//   F1 = (|01>+|10>)/sqrt2, F2 = (|0->+|1+>)/sqrt2,
//   F3 = (|+1>+|-0>)/sqrt2, F4 = (|+->+|-+>)/sqrt2,
// certified orthonormal, identity-resolving, and antidistinguishing
// before it is returned.
qcore::ProjectiveMeasurement pbr_basis_l2();

// residuals[j] = Born(phi_j, meas, {j}); all vanish for a valid scenario.
std::vector<double> verify_antidistinguishing(
    const qcore::ProjectiveMeasurement& meas,
    std::span<const qcore::PureState> products);

// A distinct state pair, the product enumeration, and an antidistinguishing
// joint measurement. Construction certifies the defining properties.
class PbrScenario {
 public:
  PbrScenario(qcore::PureState psi1, qcore::PureState psi2, int L,
              qcore::ProjectiveMeasurement meas);
  static PbrScenario canonical();

  const qcore::PureState& psi1() const { return psi1_; }
  const qcore::PureState& psi2() const { return psi2_; }
  int num_components() const { return num_components_; }
  const std::vector<qcore::PureState>& products() const { return products_; }
  const qcore::ProjectiveMeasurement& measurement() const { return meas_; }

 private:
  qcore::PureState psi1_;
  qcore::PureState psi2_;
  int num_components_;
  std::vector<qcore::PureState> products_;
  qcore::ProjectiveMeasurement meas_;
};

enum class LemmaKind {
  kContradiction,             // state-independent plain table: outcome totality fails
  kConsistentStateDependent,  // per-preparation tables evade the argument
  kInefficiency,              // state-independent augmented table: theta mass
};

std::string lemma_kind_name(LemmaKind kind);

struct LemmaVerdict {
  LemmaKind kind = LemmaKind::kConsistentStateDependent;
  std::string witness_cell;     // shared hidden variable, when one is needed
  std::vector<double> chain;    // R({j}, witness) per outcome
  double totality = 0.0;        // R(S(M), witness)
  double theta_weight = 0.0;    // R({theta}, witness) for augmented tables
};

// Classifies what happens at a hidden variable shared by every preparation.
// Requires the composite's table for the scenario measurement to reproduce
// the antidistinguishing Born zeros; NoWitnessError when no shared cell
// exists (the premise fails for segregated components).
LemmaVerdict detect_lemma_contradiction(const composer::CompositeModel& composite,
                                        const PbrScenario& scenario,
                                        double tolerance = kTolerance);

struct InefficiencyReport {
  std::vector<std::pair<std::string, double>> theta_by_cell;  // space order
  std::vector<std::pair<std::string, double>> aggregate_by_preparation;
  double worst_case = 0.0;
  std::string note;  // set when the table is not augmented (zero by definition)
};

// No-show accounting for the composite's state-independent table.
InefficiencyReport builtin_inefficiency(const composer::CompositeModel& composite);

struct IdentityResolutionAudit {
  std::string cell;
  std::vector<double> projector_values;  // R({j}, cell) per outcome
  double value_sum = 0.0;
  double identity_value = 1.0;  // a measurement of the identity always yields 1
  bool mismatch = false;        // value_sum != identity_value
  double operator_residual = 0.0;
};

// Reads the deterministic value assignment at one cell and compares the sum
// of the projector values with the value of their sum (the identity).
// PreconditionError for stochastic tables.
IdentityResolutionAudit additivity_audit(const composer::CompositeModel& composite,
                                         const std::string& cell_id);

// Attaches the maximal deterministic state-independent table consistent
// with the antidistinguishing Born zeros: at each cell the first outcome
// whose preparation excludes the cell, and the all-zero row where every
// preparation claims it. The all-zero rows are the point, so the table is
// marked diagnostic.
void attach_forced_state_independent_table(composer::CompositeModel& composite,
                                           const PbrScenario& scenario,
                                           const std::string& observable_id);

// Attaches one table per preparation whose rows are that preparation's Born
// vector, the uniform state-dependent construction on the composite.
void attach_state_dependent_born_tables(composer::CompositeModel& composite,
                                        const PbrScenario& scenario,
                                        const std::string& observable_id);

}  // namespace hvwork::pbrcheck
