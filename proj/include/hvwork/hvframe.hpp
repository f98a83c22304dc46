#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hvwork/qcore.hpp"

// Hidden-variables models over finite measurable partitions. A continuum
// space like (0,1] is represented by finitely many cells with measures;
// every density and response function in play is piecewise constant over
// such a partition, so the reproduction audits are exact finite sums.
//
// Models are immutable after assembly; all audits are pure functions and
// safe for concurrent use.
namespace hvwork::hvframe {

struct Cell {
  std::string id;
  double measure = 0.0;
};

// Finite partition of a unit-measure hidden-variable space.
class HVSpace {
 public:
  HVSpace() = default;
  HVSpace(std::vector<Cell> cells, std::string label);

  const std::vector<Cell>& cells() const { return cells_; }
  const std::string& label() const { return label_; }
  bool has_cell(const std::string& id) const;
  const Cell& cell(const std::string& id) const;  // LookupError if absent
  double total_measure() const;

 private:
  std::vector<Cell> cells_;
  std::string label_;
  std::map<std::string, size_t> index_;
};

// Probability density for one state, as a weight per cell. Cells absent
// from the map carry weight 0. Normalization: sum of weight*measure = 1.
struct StateDensity {
  std::map<std::string, double> weights;

  double weight(const std::string& cell_id) const {
    auto it = weights.find(cell_id);
    return it == weights.end() ? 0.0 : it->second;
  }
};

// Probability row over a measurement's spectrum at one cell. Outcomes
// absent from the map carry probability 0; the reserved theta label is
// allowed only in augmented tables.
using ResponseRow = std::map<std::string, double>;

struct ResponseTable {
  std::string observable;
  std::string state_tag = kAnyStateTag;  // kAnyStateTag or a state id
  bool augmented = false;
  // Lifts the row-sum requirement so that lemma-style fixtures, whose whole
  // point is an outcome-totality violation, can be represented and stored.
  bool diagnostic = false;
  std::map<std::string, ResponseRow> rows;  // cell id -> row

  const ResponseRow& row(const std::string& cell_id) const;
  // Probability assigned to an outcome set at a cell (theta excluded).
  double value(const std::string& cell_id, const qcore::OutcomeSet& s) const;
  double theta_weight(const std::string& cell_id) const;
  bool deterministic() const;  // every entry exactly 0 or 1
};

struct HVModel {
  HVSpace space;
  std::map<std::string, qcore::PureState> states;  // state catalog
  std::map<std::string, qcore::ProjectiveMeasurement> observables;
  std::map<std::string, StateDensity> densities;
  std::vector<ResponseTable> responses;
  std::string label;

  const qcore::PureState& state(const std::string& id) const;
  const qcore::ProjectiveMeasurement& observable(const std::string& id) const;
  const StateDensity& density(const std::string& id) const;
  // The table answering for (observable, state): the ANY-tagged table if
  // one exists, else the state-tagged one. LookupError if neither.
  const ResponseTable& response_for(const std::string& observable_id,
                                    const std::string& state_id) const;
  // Cells with strictly positive density weight, in space order.
  std::vector<std::string> support(const std::string& state_id) const;
};

// Validates every type invariant; throws InvariantError naming the first
// violated one together with the offending state/cell/observable ids.
void validate_model(const HVModel& model);

struct OverlapReport {
  std::string first;
  std::string second;
  double q_base = 0.0;          // base measure of the support intersection
  double q_under_first = 0.0;   // its probability under the first density
  double q_under_second = 0.0;  // and under the second
};

struct Classification {
  bool mixed = false;             // some pair of supports overlaps
  bool state_dependent = false;   // some response table is state-tagged
  bool deterministic = false;     // every response entry is 0 or 1
};

std::string mixture_name(const Classification& c);      // "mixed"/"segregated"
std::string dependence_name(const Classification& c);   // "state-dependent"/...
std::string determinism_name(const Classification& c);  // "deterministic"/...

// Reproduced probability of the outcome set: the plain average for a
// plain table, the outcome-conditional ratio for an augmented one.
double reproduced_probability(const HVModel& model, const std::string& state_id,
                              const std::string& observable_id,
                              const qcore::OutcomeSet& s);

// |average - Born|. WrongAuditError on an augmented table.
double check_born_reproduction(const HVModel& model, const std::string& state_id,
                               const std::string& observable_id,
                               const qcore::OutcomeSet& s);

// |conditional average - Born| per the augmented-spectrum rule.
// WrongAuditError on a plain table; TotalNoShowError when the detection
// probability vanishes.
double check_conditional_reproduction(const HVModel& model,
                                      const std::string& state_id,
                                      const std::string& observable_id,
                                      const qcore::OutcomeSet& s);

OverlapReport overlap_report(const HVModel& model, const std::string& a,
                             const std::string& b);

Classification classify(const HVModel& model);

// Cells where the state has positive mass yet the response gives the
// outcome positive probability. Empty whenever the Born probability of the
// outcome is zero and reproduction holds (the pointwise-support lemma).
std::vector<std::string> pointwise_support_violations(
    const HVModel& model, const std::string& state_id,
    const std::string& observable_id, const std::string& outcome,
    double tolerance = kTolerance);

// Partition of (0,1] refined at the given threshold points. uppers[k] is
// the right endpoint of cell k (half-open cells (a,b]); ids are c0..cn.
struct UnitIntervalPartition {
  std::vector<double> uppers;
  HVSpace space;
};

UnitIntervalPartition partition_unit_interval(std::vector<double> thresholds,
                                              const std::string& label);

}  // namespace hvwork::hvframe
