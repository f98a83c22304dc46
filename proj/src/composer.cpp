#include "hvwork/composer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <utility>

namespace hvwork::composer {

namespace {

constexpr int kDimCap = 16;
constexpr size_t kProductCellCap = 4096;
constexpr double kNativeMeasure = 0.25;

std::string join_ids(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "|";
    out += parts[i];
  }
  return out;
}

void reject_separator(const std::string& id, const std::string& what) {
  if (id.find('|') != std::string::npos) {
    throw ArgumentError(what + " id '" + id +
                        "' contains '|', which is reserved for composite ids");
  }
}

// Visits the L-fold cartesian power of the component cells in lexicographic
// order, first factor slowest.
template <typename Fn>
void for_each_product_cell(const std::vector<hvframe::Cell>& comp_cells, int L,
                           Fn&& fn) {
  std::vector<size_t> idx(static_cast<size_t>(L), 0);
  while (true) {
    fn(idx);
    int pos = L - 1;
    while (pos >= 0 && ++idx[pos] == comp_cells.size()) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

std::vector<std::string> overlap_cells(const hvframe::HVModel& component,
                                       const std::string& a,
                                       const std::string& b) {
  const hvframe::StateDensity& da = component.density(a);
  const hvframe::StateDensity& db = component.density(b);
  std::vector<std::string> out;
  for (const hvframe::Cell& c : component.space.cells()) {
    if (da.weight(c.id) > 0.0 && db.weight(c.id) > 0.0) out.push_back(c.id);
  }
  return out;
}

std::string diagonal_id(const std::string& cell_id, int L) {
  std::vector<std::string> parts(static_cast<size_t>(L), cell_id);
  return join_ids(parts);
}

void check_provenance(const CompositeModel& composite,
                      const hvframe::HVModel& component, const std::string& a,
                      const std::string& b) {
  if (composite.info.first_state != a || composite.info.second_state != b) {
    throw ArgumentError("mismatched provenance: composite was built over pair (" +
                        composite.info.first_state + ", " +
                        composite.info.second_state + "), not (" + a + ", " + b +
                        ")");
  }
  std::vector<std::string> comp_ids;
  for (const hvframe::Cell& c : component.space.cells()) comp_ids.push_back(c.id);
  if (comp_ids != composite.info.component_cell_ids) {
    throw ArgumentError(
        "mismatched provenance: component cells do not match the ones the "
        "composite was built over");
  }
  component.density(a);
  component.density(b);
}

CompositeModel compose_product(const hvframe::HVModel& component,
                               const std::string& a, const std::string& b,
                               int L, CompositionRule rule, bool copy_tables) {
  if (L < 1) throw ArgumentError("component count L must be at least 1");
  if (a == b) throw ArgumentError("pair states must be distinct");
  const qcore::PureState& sa = component.state(a);
  const qcore::PureState& sb = component.state(b);
  component.density(a);
  component.density(b);
  if (sa.dim() != sb.dim()) {
    throw ArgumentError("pair states have different dimensions");
  }
  reject_separator(a, "state");
  reject_separator(b, "state");

  long dim = 1;
  for (int i = 0; i < L; ++i) {
    dim *= sa.dim();
    if (dim > kDimCap) {
      throw ArgumentError("composite dimension exceeds the cap of " +
                          std::to_string(kDimCap));
    }
  }
  const auto& comp_cells = component.space.cells();
  double cell_count = 1.0;
  for (int i = 0; i < L; ++i) cell_count *= static_cast<double>(comp_cells.size());
  if (cell_count > static_cast<double>(kProductCellCap)) {
    throw ArgumentError("product space would exceed " +
                        std::to_string(kProductCellCap) + " cells");
  }
  for (const hvframe::Cell& c : comp_cells) reject_separator(c.id, "cell");

  CompositeModel composite;
  composite.info.num_components = L;
  composite.info.rule = rule;
  composite.info.first_state = a;
  composite.info.second_state = b;
  for (const hvframe::Cell& c : comp_cells) {
    composite.info.component_cell_ids.push_back(c.id);
  }

  hvframe::HVModel& base = composite.base;
  base.label = rule_name(rule) + " composite of [" + component.label +
               "], L=" + std::to_string(L);

  std::vector<hvframe::Cell> cells;
  for_each_product_cell(comp_cells, L, [&](const std::vector<size_t>& idx) {
    std::vector<std::string> parts;
    double measure = 1.0;
    for (size_t i : idx) {
      parts.push_back(comp_cells[i].id);
      measure *= comp_cells[i].measure;
    }
    cells.push_back({join_ids(parts), measure});
  });
  base.space = hvframe::HVSpace(std::move(cells),
                                "product of " + std::to_string(L) + " copies of: " +
                                    component.space.label());

  const int preparations = 1 << L;
  for (int j = 0; j < preparations; ++j) {
    std::vector<std::string> part_ids;
    std::vector<qcore::PureState> factors;
    std::vector<const hvframe::StateDensity*> factor_densities;
    for (int i = 0; i < L; ++i) {
      const bool second = (j >> (L - 1 - i)) & 1;
      const std::string& sid = second ? b : a;
      part_ids.push_back(sid);
      factors.push_back(component.state(sid));
      factor_densities.push_back(&component.density(sid));
    }
    const std::string prep_id = join_ids(part_ids);
    composite.info.preparation_ids.push_back(prep_id);
    base.states.emplace(prep_id,
                        qcore::tensor_product(std::span<const qcore::PureState>(
                            factors.data(), factors.size())));

    hvframe::StateDensity density;
    for_each_product_cell(comp_cells, L, [&](const std::vector<size_t>& idx) {
      double w = 1.0;
      for (int i = 0; i < L; ++i) {
        w *= factor_densities[i]->weight(comp_cells[idx[i]].id);
      }
      if (w > 0.0) {
        std::vector<std::string> parts;
        for (size_t i : idx) parts.push_back(comp_cells[i].id);
        density.weights[join_ids(parts)] = w;
      }
    });
    base.densities.emplace(prep_id, std::move(density));
  }

  if (L == 1 && copy_tables) {
    base.observables = component.observables;
    for (const hvframe::ResponseTable& t : component.responses) {
      if (t.state_tag == kAnyStateTag || t.state_tag == a || t.state_tag == b) {
        base.responses.push_back(t);
      }
    }
  }

  hvframe::validate_model(base);
  return composite;
}

}  // namespace

CompositionRule rule_from_name(const std::string& name) {
  if (name == "independent") return CompositionRule::kIndependentProduct;
  if (name == "compatible") return CompositionRule::kCompatible;
  if (name == "compact-native") return CompositionRule::kCompactNative;
  throw ArgumentError("unknown composition rule '" + name + "'");
}

std::string rule_name(CompositionRule rule) {
  switch (rule) {
    case CompositionRule::kIndependentProduct: return "independent";
    case CompositionRule::kCompatible: return "compatible";
    case CompositionRule::kCompactNative: return "compact-native";
  }
  throw InternalError("unhandled composition rule");
}

CompositeModel compose_independent(const hvframe::HVModel& component,
                                   const std::string& first_state,
                                   const std::string& second_state, int L) {
  return compose_product(component, first_state, second_state, L,
                         CompositionRule::kIndependentProduct,
                         /*copy_tables=*/true);
}

CompositeModel compose(const hvframe::HVModel& component,
                       const std::string& first_state,
                       const std::string& second_state, int L,
                       CompositionRule rule) {
  if (rule == CompositionRule::kIndependentProduct) {
    return compose_independent(component, first_state, second_state, L);
  }

  CompositeModel composite =
      compose_product(component, first_state, second_state, L, rule,
                      /*copy_tables=*/false);
  const std::vector<std::string> overlap =
      overlap_cells(component, first_state, second_state);
  std::vector<std::string> diag_ids;
  for (const std::string& cell : overlap) diag_ids.push_back(diagonal_id(cell, L));

  if (rule == CompositionRule::kCompatible) {
    if (overlap.empty()) return composite;  // nothing to correlate
    double diag_measure = 0.0;
    for (const std::string& id : diag_ids) {
      diag_measure += composite.base.space.cell(id).measure;
    }
    for (const std::string& prep : composite.info.preparation_ids) {
      hvframe::StateDensity& d = composite.base.densities.at(prep);
      for (auto& [cell, w] : d.weights) w *= 0.5;
      for (const std::string& id : diag_ids) {
        d.weights[id] += 0.5 / diag_measure;
      }
    }
    hvframe::validate_model(composite.base);
    return composite;
  }

  // Compact-native: shrink the product region, add a native cell, and move
  // each preparation's diagonal overlap mass onto it.
  const double shrink = 1.0 - kNativeMeasure;
  std::vector<hvframe::Cell> cells;
  for (const hvframe::Cell& c : composite.base.space.cells()) {
    cells.push_back({c.id, c.measure * shrink});
  }
  cells.push_back({"native0", kNativeMeasure});
  composite.base.space =
      hvframe::HVSpace(std::move(cells), composite.base.space.label() +
                                             " plus one native cell");
  composite.info.native_cell_ids.push_back("native0");

  const std::set<std::string> diag_set(diag_ids.begin(), diag_ids.end());
  for (const std::string& prep : composite.info.preparation_ids) {
    hvframe::StateDensity& d = composite.base.densities.at(prep);
    for (auto& [cell, w] : d.weights) w /= shrink;
    double moved_mass = 0.0;
    for (const std::string& id : diag_ids) {
      auto it = d.weights.find(id);
      if (it == d.weights.end()) continue;
      moved_mass += it->second * composite.base.space.cell(id).measure;
      d.weights.erase(it);
    }
    if (moved_mass > 0.0) d.weights["native0"] = moved_mass / kNativeMeasure;
  }
  hvframe::validate_model(composite.base);
  return composite;
}

CompatibilityResult check_compatibility(const CompositeModel& composite,
                                        const hvframe::HVModel& component,
                                        const std::string& first_state,
                                        const std::string& second_state) {
  check_provenance(composite, component, first_state, second_state);
  CompatibilityResult result;
  result.holds = true;
  for (const std::string& cell :
       overlap_cells(component, first_state, second_state)) {
    const std::string diag = diagonal_id(cell, composite.info.num_components);
    for (const std::string& prep : composite.info.preparation_ids) {
      if (composite.base.density(prep).weight(diag) <= 0.0) {
        result.holds = false;
        result.counterexample_cell = diag;
        return result;
      }
    }
  }
  return result;
}

CompactnessResult check_compactness(const CompositeModel& composite,
                                    const hvframe::HVModel& component,
                                    const std::string& first_state,
                                    const std::string& second_state) {
  check_provenance(composite, component, first_state, second_state);
  CompactnessResult result;
  if (overlap_cells(component, first_state, second_state).empty()) {
    result.kind = CompactnessKind::kNoneVacuous;
    return result;
  }
  for (const hvframe::Cell& c : composite.base.space.cells()) {
    bool in_all = true;
    for (const std::string& prep : composite.info.preparation_ids) {
      if (composite.base.density(prep).weight(c.id) <= 0.0) {
        in_all = false;
        break;
      }
    }
    if (in_all) {
      result.kind = CompactnessKind::kWitness;
      result.witness_cell = c.id;
      return result;
    }
  }
  result.kind = CompactnessKind::kNoneViolated;
  return result;
}

CompositeModel build_prism_composite(const hvframe::HVModel& component,
                                     const std::string& first_state,
                                     const std::string& second_state, int L,
                                     const qcore::ProjectiveMeasurement& meas,
                                     const std::string& observable_id) {
  const hvframe::OverlapReport overlap =
      hvframe::overlap_report(component, first_state, second_state);
  if (overlap.q_base >= 1.0 - kTolerance) {
    throw TotalNoShowError(
        "pair supports coincide (q_base = 1): the prism composite would never "
        "produce an outcome");
  }

  CompositeModel composite =
      compose_product(component, first_state, second_state, L,
                      CompositionRule::kIndependentProduct,
                      /*copy_tables=*/false);
  const int dim = composite.base.states.begin()->second.dim();
  if (meas.dim() != dim) {
    throw ArgumentError("measurement dimension " + std::to_string(meas.dim()) +
                        " does not match the composite dimension " +
                        std::to_string(dim));
  }

  const hvframe::StateDensity& da = component.density(first_state);
  const hvframe::StateDensity& db = component.density(second_state);
  const auto& comp_cells = component.space.cells();

  hvframe::ResponseTable table;
  table.observable = observable_id;
  table.state_tag = kAnyStateTag;
  table.augmented = true;

  for_each_product_cell(comp_cells, L, [&](const std::vector<size_t>& idx) {
    std::vector<std::string> parts;
    bool any_overlap = false;
    bool all_determined = true;
    std::vector<std::string> determined;
    for (size_t i : idx) {
      const std::string& cid = comp_cells[i].id;
      parts.push_back(cid);
      const bool in_a = da.weight(cid) > 0.0;
      const bool in_b = db.weight(cid) > 0.0;
      if (in_a && in_b) any_overlap = true;
      else if (in_a) determined.push_back(first_state);
      else if (in_b) determined.push_back(second_state);
      else all_determined = false;
    }
    hvframe::ResponseRow row;
    if (any_overlap || !all_determined) {
      // Either a component hides in the overlap (the preparation cannot be
      // read off the cell) or the cell carries no mass at all: no result.
      row[kThetaLabel] = 1.0;
    } else {
      const std::string prep_id = join_ids(determined);
      const std::vector<double> probs =
          qcore::born_vector(composite.base.state(prep_id), meas);
      for (int j = 0; j < meas.dim(); ++j) row[meas.outcomes()[j]] = probs[j];
    }
    table.rows[join_ids(parts)] = std::move(row);
  });

  composite.base.observables.emplace(observable_id, meas);
  composite.base.responses.push_back(std::move(table));
  hvframe::validate_model(composite.base);
  return composite;
}

double common_support_base_measure(const CompositeModel& composite) {
  double acc = 0.0;
  for (const hvframe::Cell& c : composite.base.space.cells()) {
    bool in_all = true;
    for (const std::string& prep : composite.info.preparation_ids) {
      if (composite.base.density(prep).weight(c.id) <= 0.0) {
        in_all = false;
        break;
      }
    }
    if (in_all) acc += c.measure;
  }
  return acc;
}

hvframe::HVModel balanced_overlap_component(double q) {
  if (!(q > 0.0) || q > 1.0) {
    throw ArgumentError("overlap probability q must lie in (0, 1]");
  }
  std::ostringstream label;
  label.precision(12);
  label << "balanced overlap component (q=" << q << ")";

  hvframe::HVModel model;
  model.label = label.str();
  std::vector<hvframe::Cell> cells;
  const double rest = (1.0 - q) / 2.0;
  if (rest > 0.0) cells.push_back({"aOnly", rest});
  cells.push_back({"ov", q});
  if (rest > 0.0) cells.push_back({"bOnly", rest});
  model.space = hvframe::HVSpace(std::move(cells), model.label);

  model.states.emplace("psi1", qcore::ket0());
  model.states.emplace("psi2", qcore::ket_plus());

  hvframe::StateDensity da;
  hvframe::StateDensity db;
  da.weights["ov"] = 1.0;
  db.weights["ov"] = 1.0;
  if (rest > 0.0) {
    da.weights["aOnly"] = 2.0;
    db.weights["bOnly"] = 2.0;
  }
  model.densities.emplace("psi1", std::move(da));
  model.densities.emplace("psi2", std::move(db));
  hvframe::validate_model(model);
  return model;
}

StrictnessReport strictness_property_suite(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  StrictnessReport report;

  {
    const hvframe::HVModel component = balanced_overlap_component(0.25);
    const CompositeModel composite =
        compose(component, "psi1", "psi2", 2, CompositionRule::kCompactNative);
    const CompatibilityResult compat =
        check_compatibility(composite, component, "psi1", "psi2");
    const CompactnessResult compact =
        check_compactness(composite, component, "psi1", "psi2");
    report.canonical_gap_fixture =
        !compat.holds && compact.kind == CompactnessKind::kWitness;
  }

  std::uniform_int_distribution<int> cell_count_dist(2, 5);
  std::uniform_int_distribution<int> measure_dist(1, 8);
  std::uniform_int_distribution<int> l_dist(1, 3);
  std::uniform_int_distribution<int> rule_dist(0, 2);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  for (int trial = 0; trial < count; ++trial) {
    const int n = cell_count_dist(rng);
    std::vector<int> raw(n);
    int total = 0;
    for (int& r : raw) {
      r = measure_dist(rng);
      total += r;
    }
    hvframe::HVModel component;
    component.label = "random component " + std::to_string(trial);
    std::vector<hvframe::Cell> cells;
    for (int i = 0; i < n; ++i) {
      cells.push_back({"k" + std::to_string(i),
                       static_cast<double>(raw[i]) / static_cast<double>(total)});
    }
    component.space = hvframe::HVSpace(std::move(cells), component.label);
    component.states.emplace("psi1", qcore::ket0());
    component.states.emplace("psi2", qcore::ket_plus());

    for (const std::string& sid : {std::string("psi1"), std::string("psi2")}) {
      std::vector<int> support;
      for (int i = 0; i < n; ++i) {
        if (coin(rng) < 0.55) support.push_back(i);
      }
      if (support.empty()) {
        support.push_back(std::uniform_int_distribution<int>(0, n - 1)(rng));
      }
      double supp_measure = 0.0;
      for (int i : support) {
        supp_measure += component.space.cells()[i].measure;
      }
      hvframe::StateDensity d;
      for (int i : support) {
        d.weights[component.space.cells()[i].id] = 1.0 / supp_measure;
      }
      component.densities.emplace(sid, std::move(d));
    }
    hvframe::validate_model(component);

    const int L = l_dist(rng);
    const CompositionRule rule = static_cast<CompositionRule>(rule_dist(rng));
    CompositeModel composite;
    try {
      composite = compose(component, "psi1", "psi2", L, rule);
    } catch (const ArgumentError&) {
      continue;  // cell cap; skip rather than bias the draw
    }

    // Occasionally knock a diagonal overlap cell out of one preparation's
    // support, breaking the product form.
    const std::vector<std::string> overlap =
        overlap_cells(component, "psi1", "psi2");
    if (!overlap.empty() && coin(rng) < 0.3) {
      const std::string victim =
          diagonal_id(overlap[std::uniform_int_distribution<size_t>(
                          0, overlap.size() - 1)(rng)],
                      L);
      const std::string& prep = composite.info.preparation_ids
          [std::uniform_int_distribution<size_t>(
              0, composite.info.preparation_ids.size() - 1)(rng)];
      hvframe::StateDensity& d = composite.base.densities.at(prep);
      auto it = d.weights.find(victim);
      if (it != d.weights.end()) {
        const double saved = it->second;
        d.weights.erase(it);
        double remaining = 0.0;
        for (const hvframe::Cell& c : composite.base.space.cells()) {
          remaining += d.weight(c.id) * c.measure;
        }
        if (remaining > 0.05) {
          for (auto& [cell, w] : d.weights) w /= remaining;
        } else {
          d.weights[victim] = saved;  // too degenerate; restore
        }
      }
      hvframe::validate_model(composite.base);
    }

    const CompatibilityResult compat =
        check_compatibility(composite, component, "psi1", "psi2");
    const CompactnessResult compact =
        check_compactness(composite, component, "psi1", "psi2");
    report.fixtures += 1;
    if (compat.holds) report.compatible_count += 1;
    if (compact.holds()) report.compact_count += 1;
    if (compact.holds() && !compat.holds) {
      report.compact_without_compatibility += 1;
    }
    if (compat.holds && !compact.holds()) {
      report.implication_violations += 1;
    }
  }

  report.pass = report.implication_violations == 0 &&
                report.compact_without_compatibility >= 1 &&
                report.canonical_gap_fixture;
  return report;
}

}  // namespace hvwork::composer
