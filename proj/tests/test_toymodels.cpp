#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hvwork/pbrcheck.hpp"
#include "hvwork/toymodels.hpp"

using namespace hvwork;
using namespace hvwork::toymodels;

namespace {

std::vector<NamedState> zero_plus() {
  return {{"zero", qcore::ket0()}, {"plus", qcore::ket_plus()}};
}

std::vector<ToyObservable> z_only() {
  std::vector<ToyObservable> out;
  out.emplace_back("Z", qcore::pauli_z());
  return out;
}

}  // namespace

TEST_CASE("mixed toy thresholds place the +1 region below P({+1})") {
  const hvframe::HVModel toy = build_mixed_toy(zero_plus(), z_only());
  // Thresholds {0.5, 1} -> cells c0 = (0, 0.5], c1 = (0.5, 1].
  REQUIRE(toy.space.cells().size() == 2);
  CHECK(toy.space.cells()[0].measure == doctest::Approx(0.5).epsilon(1e-12));

  const hvframe::ResponseTable& plus = toy.response_for("Z", "plus");
  CHECK(plus.value("c0", {"+1"}) == 1.0);
  CHECK(plus.value("c1", {"+1"}) == 0.0);
  const hvframe::ResponseTable& zero = toy.response_for("Z", "zero");
  CHECK(zero.value("c0", {"+1"}) == 1.0);
  CHECK(zero.value("c1", {"+1"}) == 1.0);
}

TEST_CASE("mixed toy reproduces every Born probability") {
  const hvframe::HVModel toy =
      build_mixed_toy(canonical_toy_states(), pauli_observables());
  for (const auto& [state_id, state] : toy.states) {
    (void)state;
    for (const auto& [obs_id, meas] : toy.observables) {
      // The +1 audit is bit-exact: the cumulative cell measures land on the
      // threshold, which is the Born probability itself. The -1 audit picks
      // up at most an ulp because the two Born values need not sum to 1.0
      // in floating point.
      CHECK(hvframe::check_born_reproduction(toy, state_id, obs_id, {"+1"}) ==
            0.0);
      CHECK(hvframe::check_born_reproduction(toy, state_id, obs_id, {"-1"}) <=
            1e-12);
    }
  }
}

TEST_CASE("a state with P({+1}) = 0.3 reproduces 0.3") {
  const double p = 0.3;
  std::vector<NamedState> states = {
      {"tilted", qcore::PureState({{std::sqrt(p), 0.0},
                                   {std::sqrt(1.0 - p), 0.0}})},
      {"plus", qcore::ket_plus()}};
  const hvframe::HVModel toy = build_mixed_toy(states, z_only());
  CHECK(hvframe::check_born_reproduction(toy, "tilted", "Z", {"+1"}) == 0.0);
  CHECK(hvframe::reproduced_probability(toy, "tilted", "Z", {"+1"}) ==
        doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("mixed toy classification") {
  const hvframe::HVModel toy =
      build_mixed_toy(canonical_toy_states(), pauli_observables());
  const hvframe::Classification c = hvframe::classify(toy);
  CHECK(c.mixed);
  CHECK(c.state_dependent);
  CHECK(c.deterministic);
}

TEST_CASE("toy builders reject bad input") {
  CHECK_THROWS_AS(build_mixed_toy({}, z_only()), ArgumentError);
  CHECK_THROWS_AS(build_mixed_toy(zero_plus(), {}), ArgumentError);
  // Non-qubit state.
  std::vector<NamedState> qutrit = {
      {"big", qcore::PureState({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}})},
      {"plus", qcore::ket_plus()}};
  CHECK_THROWS_AS(build_mixed_toy(qutrit, z_only()), ArgumentError);
  // Same state twice (up to phase) is not distinct.
  std::vector<NamedState> twice = {{"a", qcore::ket0()}, {"b", qcore::ket0()}};
  CHECK_THROWS_AS(build_mixed_toy(twice, z_only()), ArgumentError);
  CHECK_THROWS_AS(build_segregated_toy(zero_plus(), z_only(),
                                       Geometry::kSharedUnitInterval),
                  ArgumentError);
  CHECK_THROWS_AS(
      ToyObservable("bad", qcore::ProjectiveMeasurement(
                               {qcore::ket0(), qcore::ket1()}, {"a", "b"})),
      ArgumentError);
}

TEST_CASE("segregated toys have pairwise disjoint supports") {
  for (const Geometry g :
       {Geometry::kDisjointIntervals, Geometry::kUnitCircleRays}) {
    const hvframe::HVModel seg =
        build_segregated_toy(canonical_toy_states(), pauli_observables(), g);
    for (auto i = seg.states.begin(); i != seg.states.end(); ++i) {
      for (auto j = std::next(i); j != seg.states.end(); ++j) {
        CHECK(hvframe::overlap_report(seg, i->first, j->first).q_base == 0.0);
      }
    }
    const hvframe::Classification c = hvframe::classify(seg);
    CHECK_FALSE(c.mixed);
    CHECK(c.state_dependent);
    CHECK(c.deterministic);
  }
}

TEST_CASE("ray geometry tags cells with the state direction") {
  const hvframe::HVModel seg = build_segregated_toy(
      zero_plus(), z_only(), Geometry::kUnitCircleRays);
  bool found = false;
  for (const hvframe::Cell& c : seg.space.cells()) {
    if (c.id.rfind("ray(zero):", 0) == 0) found = true;
  }
  CHECK(found);
}

TEST_CASE("segregated blocks are scaled to a power of two with slack") {
  // Three states round up to four blocks; the unused quarter is a slack
  // cell that carries no density.
  const hvframe::HVModel seg = build_segregated_toy(
      canonical_toy_states(), pauli_observables(), Geometry::kDisjointIntervals);
  CHECK(seg.space.has_cell("slack"));
  CHECK(seg.space.cell("slack").measure == 0.25);
  for (const auto& [state_id, density] : seg.densities) {
    (void)state_id;
    CHECK(density.weight("slack") == 0.0);
  }
  // Two states fill both blocks exactly; no slack.
  const hvframe::HVModel two = build_segregated_toy(
      zero_plus(), z_only(), Geometry::kDisjointIntervals);
  CHECK_FALSE(two.space.has_cell("slack"));
}

TEST_CASE("mixed and segregated toys produce identical statistics") {
  const auto states = canonical_toy_states();
  const auto observables = pauli_observables();
  const hvframe::HVModel mixed = build_mixed_toy(states, observables);
  for (const Geometry g :
       {Geometry::kDisjointIntervals, Geometry::kUnitCircleRays}) {
    const hvframe::HVModel seg = build_segregated_toy(states, observables, g);
    for (const auto& [state_id, state] : mixed.states) {
      (void)state;
      for (const auto& [obs_id, meas] : mixed.observables) {
        for (const std::string& label : meas.outcomes()) {
          const double a =
              hvframe::reproduced_probability(mixed, state_id, obs_id, {label});
          const double b =
              hvframe::reproduced_probability(seg, state_id, obs_id, {label});
          CHECK(a == b);  // bit-for-bit, not merely close
        }
      }
    }
  }
}

TEST_CASE("uniform state-dependent model over the canonical joint basis") {
  const pbrcheck::PbrScenario scenario = pbrcheck::PbrScenario::canonical();
  std::vector<NamedState> products;
  for (size_t j = 0; j < scenario.products().size(); ++j) {
    products.push_back({"phi" + std::to_string(j + 1), scenario.products()[j]});
  }
  const hvframe::HVModel model = build_uniform_state_dependent(
      scenario.measurement(), "M", products);

  // Each preparation's row puts probability zero on its own outcome.
  for (size_t j = 0; j < products.size(); ++j) {
    const hvframe::ResponseTable& t = model.response_for("M", products[j].id);
    CHECK(t.value("c0", {scenario.measurement().outcomes()[j]}) <= 1e-12);
  }
  for (const auto& [state_id, state] : model.states) {
    (void)state;
    for (const std::string& label : scenario.measurement().outcomes()) {
      CHECK(hvframe::check_born_reproduction(model, state_id, "M", {label}) ==
            0.0);
    }
  }
  const hvframe::Classification c = hvframe::classify(model);
  CHECK(c.mixed);
  CHECK(c.state_dependent);
  CHECK_FALSE(c.deterministic);
}

TEST_CASE("uniform builder rejects dimension mismatches") {
  CHECK_THROWS_AS(
      build_uniform_state_dependent(qcore::pauli_z(), "Z",
                                    {{"phi", qcore::PureState({{1.0, 0.0},
                                                               {0.0, 0.0},
                                                               {0.0, 0.0},
                                                               {0.0, 0.0}})}}),
      ArgumentError);
}
