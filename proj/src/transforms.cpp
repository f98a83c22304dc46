#include "hvwork/transforms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <utility>

namespace hvwork::transforms {

namespace {

std::string pair_id(const std::string& cell, const std::string& state) {
  return cell + "@" + state;
}

hvframe::ResponseRow filler_row(const hvframe::HVModel& model,
                                const hvframe::ResponseTable& table) {
  const auto& meas = model.observable(table.observable);
  hvframe::ResponseRow row;
  row[meas.outcomes().front()] = 1.0;
  return row;
}

// One state's block: its support cells in space order, with measures.
struct Block {
  std::string state_id;
  std::vector<std::string> cell_ids;
  std::vector<double> measures;
  double total = 0.0;
};

std::vector<Block> support_blocks(const hvframe::HVModel& model) {
  std::vector<Block> blocks;
  std::set<std::string> claimed;
  for (const auto& [state_id, density] : model.densities) {
    Block b;
    b.state_id = state_id;
    for (const hvframe::Cell& c : model.space.cells()) {
      if (density.weight(c.id) > 0.0) {
        if (claimed.count(c.id)) {
          throw PreconditionError("model is not segregated: cell '" + c.id +
                                  "' lies in more than one state's support");
        }
        b.cell_ids.push_back(c.id);
        b.measures.push_back(c.measure);
        b.total += c.measure;
      }
    }
    for (const std::string& id : b.cell_ids) claimed.insert(id);
    if (b.total <= 0.0) {
      throw PreconditionError("state '" + state_id +
                              "' has a support of measure zero");
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

bool equal_measure_sequences(const std::vector<Block>& blocks) {
  for (size_t i = 1; i < blocks.size(); ++i) {
    if (blocks[i].measures != blocks[0].measures) return false;
  }
  return true;
}

// Union of the blocks' normalized cumulative boundaries; boundaries closer
// than kTolerance are merged.
std::vector<double> merged_boundaries(const std::vector<Block>& blocks) {
  std::vector<double> bounds;
  for (const Block& b : blocks) {
    double cum = 0.0;
    for (double m : b.measures) {
      cum += m;
      bounds.push_back(cum / b.total);
    }
  }
  bounds.push_back(1.0);
  std::sort(bounds.begin(), bounds.end());
  std::vector<double> merged;
  for (double v : bounds) {
    if (v <= kTolerance) continue;
    if (!merged.empty() && v - merged.back() <= kTolerance) continue;
    merged.push_back(std::min(v, 1.0));
  }
  if (merged.empty() || std::abs(merged.back() - 1.0) > kTolerance) {
    throw ArgumentError("block measures cannot be aligned to a common partition");
  }
  merged.back() = 1.0;
  return merged;
}

// Index of the block cell covering the normalized interval ending at
// boundary k.
size_t parent_cell(const Block& block, double lo, double hi) {
  const double mid = 0.5 * (lo + hi) * block.total;
  double cum = 0.0;
  for (size_t i = 0; i < block.measures.size(); ++i) {
    cum += block.measures[i];
    if (mid <= cum) return i;
  }
  return block.measures.size() - 1;
}

}  // namespace

EquivalenceSuite full_suite(const hvframe::HVModel& model) {
  EquivalenceSuite suite;
  for (const auto& [state_id, state] : model.states) {
    (void)state;
    for (const auto& [obs_id, meas] : model.observables) {
      for (const std::string& label : meas.outcomes()) {
        suite.triples.push_back({state_id, obs_id, {label}});
      }
    }
  }
  return suite;
}

hvframe::HVModel segregate(const hvframe::HVModel& model) {
  const size_t state_count = model.states.size();
  if (state_count == 0) throw ArgumentError("model has no states");
  const double scale = static_cast<double>(std::bit_ceil(state_count));

  hvframe::HVModel out;
  out.label = "segregate(" + model.label + ")";
  out.states = model.states;
  out.observables = model.observables;

  std::vector<hvframe::Cell> cells;
  double block_total = 0.0;
  for (const auto& [state_id, density] : model.densities) {
    for (const hvframe::Cell& c : model.space.cells()) {
      if (density.weight(c.id) > 0.0) {
        const double m = c.measure / scale;
        cells.push_back({pair_id(c.id, state_id), m});
        block_total += m;
      }
    }
  }
  const double slack = 1.0 - block_total;
  const bool has_slack = slack > 1e-15;
  if (has_slack) cells.push_back({"slack", slack});
  out.space = hvframe::HVSpace(std::move(cells),
                               "pairs (cell, state) of: " + model.space.label());

  for (const auto& [state_id, density] : model.densities) {
    hvframe::StateDensity d;
    for (const hvframe::Cell& c : model.space.cells()) {
      const double w = density.weight(c.id);
      if (w > 0.0) d.weights[pair_id(c.id, state_id)] = w * scale;
    }
    out.densities.emplace(state_id, std::move(d));
  }

  for (const hvframe::ResponseTable& t : model.responses) {
    hvframe::ResponseTable nt;
    nt.observable = t.observable;
    nt.state_tag = t.state_tag;
    nt.augmented = t.augmented;
    nt.diagnostic = t.diagnostic;
    for (const auto& [state_id, density] : model.densities) {
      for (const hvframe::Cell& c : model.space.cells()) {
        if (density.weight(c.id) > 0.0) {
          nt.rows[pair_id(c.id, state_id)] = t.row(c.id);
        }
      }
    }
    if (has_slack) nt.rows["slack"] = filler_row(model, t);
    out.responses.push_back(std::move(nt));
  }

  hvframe::validate_model(out);
  return out;
}

hvframe::HVModel mix(const hvframe::HVModel& model) {
  const std::vector<Block> blocks = support_blocks(model);

  // Refine every block to a common cell structure. refined[b][k] is the
  // (parent index, measure) of block b's k-th refined cell.
  std::vector<std::vector<std::pair<size_t, double>>> refined(blocks.size());
  std::vector<double> shared_measures;
  if (equal_measure_sequences(blocks)) {
    const Block& first = blocks[0];
    for (size_t k = 0; k < first.measures.size(); ++k) {
      shared_measures.push_back(first.measures[k] / first.total);
    }
    for (size_t b = 0; b < blocks.size(); ++b) {
      for (size_t k = 0; k < first.measures.size(); ++k) {
        refined[b].push_back({k, shared_measures[k]});
      }
    }
  } else {
    const std::vector<double> bounds = merged_boundaries(blocks);
    double lo = 0.0;
    for (double hi : bounds) {
      shared_measures.push_back(hi - lo);
      for (size_t b = 0; b < blocks.size(); ++b) {
        refined[b].push_back({parent_cell(blocks[b], lo, hi), hi - lo});
      }
      lo = hi;
    }
  }

  hvframe::HVModel out;
  out.label = "mix(" + model.label + ")";
  out.states = model.states;
  out.observables = model.observables;

  std::vector<hvframe::Cell> cells;
  for (size_t k = 0; k < shared_measures.size(); ++k) {
    cells.push_back({"u" + std::to_string(k), shared_measures[k]});
  }
  out.space = hvframe::HVSpace(std::move(cells),
                               "shared image of the per-state blocks");

  for (size_t b = 0; b < blocks.size(); ++b) {
    const Block& block = blocks[b];
    const hvframe::StateDensity& density = model.density(block.state_id);
    hvframe::StateDensity d;
    for (size_t k = 0; k < refined[b].size(); ++k) {
      const auto& [parent, measure] = refined[b][k];
      (void)measure;
      d.weights["u" + std::to_string(k)] =
          density.weight(block.cell_ids[parent]) * block.total;
    }
    out.densities.emplace(block.state_id, std::move(d));
  }

  for (const hvframe::ResponseTable& t : model.responses) {
    // Per-block images of the table on the shared cells.
    std::vector<std::map<std::string, hvframe::ResponseRow>> images(blocks.size());
    for (size_t b = 0; b < blocks.size(); ++b) {
      for (size_t k = 0; k < refined[b].size(); ++k) {
        images[b]["u" + std::to_string(k)] =
            t.row(blocks[b].cell_ids[refined[b][k].first]);
      }
    }
    const bool images_coincide =
        std::all_of(images.begin(), images.end(),
                    [&](const auto& img) { return img == images[0]; });
    if (t.state_tag != kAnyStateTag) {
      const auto it = std::find_if(
          blocks.begin(), blocks.end(),
          [&](const Block& b) { return b.state_id == t.state_tag; });
      if (it == blocks.end()) {
        throw LookupError("response table tagged with state '" + t.state_tag +
                          "' which has no density");
      }
      hvframe::ResponseTable nt;
      nt.observable = t.observable;
      nt.state_tag = t.state_tag;
      nt.augmented = t.augmented;
      nt.diagnostic = t.diagnostic;
      nt.rows = images[it - blocks.begin()];
      out.responses.push_back(std::move(nt));
    } else if (images_coincide) {
      hvframe::ResponseTable nt;
      nt.observable = t.observable;
      nt.state_tag = kAnyStateTag;
      nt.augmented = t.augmented;
      nt.diagnostic = t.diagnostic;
      nt.rows = images[0];
      out.responses.push_back(std::move(nt));
    } else {
      // The identification pulls different rows from different blocks:
      // retag as identical per-state copies of each block's image.
      for (size_t b = 0; b < blocks.size(); ++b) {
        hvframe::ResponseTable nt;
        nt.observable = t.observable;
        nt.state_tag = blocks[b].state_id;
        nt.augmented = t.augmented;
        nt.diagnostic = t.diagnostic;
        nt.rows = images[b];
        out.responses.push_back(std::move(nt));
      }
    }
  }

  hvframe::validate_model(out);
  return out;
}

EquivalenceReport assert_equivalent(const hvframe::HVModel& a,
                                    const hvframe::HVModel& b,
                                    const EquivalenceSuite& suite) {
  EquivalenceReport report;
  report.tolerance = suite.tolerance;
  for (const EquivalenceTriple& triple : suite.triples) {
    TripleResult result;
    result.triple = triple;
    try {
      result.probability_a =
          hvframe::reproduced_probability(a, triple.state, triple.observable,
                                          triple.outcomes);
      result.probability_b =
          hvframe::reproduced_probability(b, triple.state, triple.observable,
                                          triple.outcomes);
    } catch (const LookupError& e) {
      throw LookupError("equivalence triple (" + triple.state + ", " +
                        triple.observable + ") cannot be evaluated: " +
                        e.what());
    }
    result.delta = std::abs(result.probability_a - result.probability_b);
    report.max_delta = std::max(report.max_delta, result.delta);
    report.results.push_back(std::move(result));
  }
  report.pass = report.max_delta <= suite.tolerance;
  return report;
}

}  // namespace hvwork::transforms
