#pragma once

#include <string>
#include <vector>

#include "hvwork/hvframe.hpp"

// Structure-preserving transforms between mixed and segregated models, and
// the auditor that certifies "same statistics" over a declared suite of
// (state, observable, outcome set) triples.
namespace hvwork::transforms {

struct EquivalenceTriple {
  std::string state;
  std::string observable;
  qcore::OutcomeSet outcomes;
};

struct EquivalenceSuite {
  std::vector<EquivalenceTriple> triples;
  double tolerance = 0.0;  // default: exact equality
};

struct TripleResult {
  EquivalenceTriple triple;
  double probability_a = 0.0;
  double probability_b = 0.0;
  double delta = 0.0;
};

struct EquivalenceReport {
  std::vector<TripleResult> results;
  double max_delta = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Every (state, observable, singleton outcome) triple registered in the
// model, in catalog order.
EquivalenceSuite full_suite(const hvframe::HVModel& model);

// Renames each state's support cells to (cell, state) pairs so the per-state
// spaces become disjoint, rescaling block measures by the next power of two
// >= state count (with a zero-density slack remainder) so that every audited
// probability is preserved bit for bit.
hvframe::HVModel segregate(const hvframe::HVModel& model);

// Maps the per-state blocks of a segregated model onto one shared space by
// identifying the k-th cell of each block after refining the blocks to a
// common partition. ANY-tagged tables whose per-block images coincide stay
// ANY-tagged; otherwise they become per-state copies.
hvframe::HVModel mix(const hvframe::HVModel& model);

// Evaluates every triple in both models through the audit matching each
// table (plain or conditional) and reports the deltas.
EquivalenceReport assert_equivalent(const hvframe::HVModel& a,
                                    const hvframe::HVModel& b,
                                    const EquivalenceSuite& suite);

}  // namespace hvwork::transforms
