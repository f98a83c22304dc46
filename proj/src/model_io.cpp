#include "hvwork/model_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace hvwork::model_io {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

const json& require(const json& j, const std::string& key,
                    const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(context + " is missing the key '" + key + "'");
  }
  return *it;
}

std::vector<qcore::Complex> amplitudes_from_json(const json& j,
                                                 const std::string& context) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(context + " must be a non-empty array of [re, im] pairs");
  }
  std::vector<qcore::Complex> amps;
  for (const json& entry : j) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number()) {
      throw ParseError(context + " must hold [re, im] number pairs");
    }
    amps.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  return amps;
}

json amplitudes_to_json(const qcore::PureState& state) {
  json out = json::array();
  for (const qcore::Complex& a : state.amplitudes()) {
    out.push_back(json::array({a.real(), a.imag()}));
  }
  return out;
}

qcore::ProjectiveMeasurement measurement_from_json(const json& j,
                                                   const std::string& context) {
  if (!j.is_object()) throw ParseError(context + " must be an object");
  const json& joutcomes = require(j, "outcomes", context);
  const json& jbasis = require(j, "basis", context);
  if (!joutcomes.is_array() || !jbasis.is_array()) {
    throw ParseError(context + ": 'outcomes' and 'basis' must be arrays");
  }
  std::vector<std::string> outcomes;
  for (const json& o : joutcomes) {
    if (!o.is_string()) throw ParseError(context + ": outcomes must be strings");
    outcomes.push_back(o.get<std::string>());
  }
  std::vector<qcore::PureState> basis;
  for (size_t k = 0; k < jbasis.size(); ++k) {
    try {
      basis.emplace_back(amplitudes_from_json(
          jbasis[k], context + " basis vector " + std::to_string(k)));
    } catch (const ArgumentError& e) {
      throw InvariantError(context + " basis vector " + std::to_string(k) +
                           ": " + e.what());
    }
  }
  try {
    return qcore::ProjectiveMeasurement(std::move(basis), std::move(outcomes));
  } catch (const ArgumentError& e) {
    throw InvariantError(context + ": " + e.what());
  }
}

json measurement_to_json_value(const qcore::ProjectiveMeasurement& meas) {
  json out;
  out["outcomes"] = meas.outcomes();
  json basis = json::array();
  for (const qcore::PureState& v : meas.basis()) {
    basis.push_back(amplitudes_to_json(v));
  }
  out["basis"] = std::move(basis);
  return out;
}

composer::CompositeInfo composite_from_json(const json& j) {
  composer::CompositeInfo info;
  info.num_components = require(j, "L", "composite block").get<int>();
  info.rule =
      composer::rule_from_name(require(j, "rule", "composite block").get<std::string>());
  const json& pair = require(j, "pair", "composite block");
  if (!pair.is_array() || pair.size() != 2) {
    throw ParseError("composite 'pair' must list two state ids");
  }
  info.first_state = pair[0].get<std::string>();
  info.second_state = pair[1].get<std::string>();
  for (const json& p : require(j, "preparations", "composite block")) {
    info.preparation_ids.push_back(p.get<std::string>());
  }
  for (const json& c : require(j, "component_cells", "composite block")) {
    info.component_cell_ids.push_back(c.get<std::string>());
  }
  if (j.contains("native_cells")) {
    for (const json& c : j["native_cells"]) {
      info.native_cell_ids.push_back(c.get<std::string>());
    }
  }
  return info;
}

json composite_to_json(const composer::CompositeInfo& info) {
  json out;
  out["L"] = info.num_components;
  out["rule"] = composer::rule_name(info.rule);
  out["pair"] = json::array({info.first_state, info.second_state});
  out["preparations"] = info.preparation_ids;
  out["component_cells"] = info.component_cell_ids;
  out["native_cells"] = info.native_cell_ids;
  return out;
}

}  // namespace

ModelFile parse_model_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw ParseError("model document must be a JSON object");

  ModelFile file;
  hvframe::HVModel& model = file.model;
  if (j.contains("label")) model.label = j["label"].get<std::string>();

  const json& jspace = require(j, "space", "model document");
  std::vector<hvframe::Cell> cells;
  for (const json& jc : require(jspace, "cells", "space block")) {
    cells.push_back({require(jc, "id", "cell").get<std::string>(),
                     require(jc, "measure", "cell").get<double>()});
  }
  std::string space_label;
  if (jspace.contains("label")) space_label = jspace["label"].get<std::string>();
  model.space = hvframe::HVSpace(std::move(cells), space_label);

  for (const auto& [state_id, jamps] :
       require(j, "states", "model document").items()) {
    try {
      model.states.emplace(state_id,
                           qcore::PureState(amplitudes_from_json(
                               jamps, "state '" + state_id + "'")));
    } catch (const ArgumentError& e) {
      throw InvariantError("state '" + state_id + "': " + e.what());
    }
  }

  if (j.contains("observables")) {
    for (const auto& [obs_id, jmeas] : j["observables"].items()) {
      model.observables.emplace(
          obs_id, measurement_from_json(jmeas, "observable '" + obs_id + "'"));
    }
  }

  for (const auto& [state_id, jweights] :
       require(j, "densities", "model document").items()) {
    hvframe::StateDensity d;
    for (const auto& [cell_id, w] : jweights.items()) {
      if (!w.is_number()) {
        throw ParseError("density for state '" + state_id +
                         "' has a non-numeric weight at cell '" + cell_id + "'");
      }
      d.weights[cell_id] = w.get<double>();
    }
    model.densities.emplace(state_id, std::move(d));
  }

  if (j.contains("responses")) {
    for (const json& jt : j["responses"]) {
      hvframe::ResponseTable t;
      t.observable = require(jt, "observable", "response table").get<std::string>();
      t.state_tag = require(jt, "state_tag", "response table").get<std::string>();
      if (jt.contains("augmented")) t.augmented = jt["augmented"].get<bool>();
      if (jt.contains("diagnostic")) t.diagnostic = jt["diagnostic"].get<bool>();
      for (const auto& [cell_id, jrow] :
           require(jt, "rows", "response table").items()) {
        hvframe::ResponseRow row;
        for (const auto& [label, p] : jrow.items()) {
          if (!p.is_number()) {
            throw ParseError("response row for observable '" + t.observable +
                             "', cell '" + cell_id +
                             "' has a non-numeric entry");
          }
          row[label] = p.get<double>();
        }
        t.rows.emplace(cell_id, std::move(row));
      }
      model.responses.push_back(std::move(t));
    }
  }

  hvframe::validate_model(model);

  if (j.contains("composite")) {
    composer::CompositeInfo info = composite_from_json(j["composite"]);
    for (const std::string& prep : info.preparation_ids) {
      if (!model.states.count(prep)) {
        throw InvariantError("composite preparation '" + prep +
                             "' is not in the state catalog");
      }
    }
    for (const std::string& native : info.native_cell_ids) {
      if (!model.space.has_cell(native)) {
        throw InvariantError("composite native cell '" + native +
                             "' is not in the space");
      }
    }
    file.composite = std::move(info);
  }
  return file;
}

ModelFile load_model_file(const std::string& path) {
  return parse_model_json(read_text_file(path));
}

std::string model_to_json(const ModelFile& file, int indent) {
  const hvframe::HVModel& model = file.model;
  json j;
  j["format"] = "hvwork-model";
  j["version"] = 1;
  j["label"] = model.label;

  json jcells = json::array();
  for (const hvframe::Cell& c : model.space.cells()) {
    jcells.push_back({{"id", c.id}, {"measure", c.measure}});
  }
  j["space"] = {{"label", model.space.label()}, {"cells", std::move(jcells)}};

  json jstates = json::object();
  for (const auto& [state_id, state] : model.states) {
    jstates[state_id] = amplitudes_to_json(state);
  }
  j["states"] = std::move(jstates);

  json jobs = json::object();
  for (const auto& [obs_id, meas] : model.observables) {
    jobs[obs_id] = measurement_to_json_value(meas);
  }
  j["observables"] = std::move(jobs);

  json jdens = json::object();
  for (const auto& [state_id, density] : model.densities) {
    json w = json::object();
    for (const auto& [cell_id, weight] : density.weights) w[cell_id] = weight;
    jdens[state_id] = std::move(w);
  }
  j["densities"] = std::move(jdens);

  json jresp = json::array();
  for (const hvframe::ResponseTable& t : model.responses) {
    json jt;
    jt["observable"] = t.observable;
    jt["state_tag"] = t.state_tag;
    jt["augmented"] = t.augmented;
    if (t.diagnostic) jt["diagnostic"] = true;
    json rows = json::object();
    for (const auto& [cell_id, row] : t.rows) {
      json jrow = json::object();
      for (const auto& [label, p] : row) jrow[label] = p;
      rows[cell_id] = std::move(jrow);
    }
    jt["rows"] = std::move(rows);
    jresp.push_back(std::move(jt));
  }
  j["responses"] = std::move(jresp);

  if (file.composite) j["composite"] = composite_to_json(*file.composite);
  return j.dump(indent) + "\n";
}

void save_model_file(const ModelFile& file, const std::string& path) {
  write_text_file(path, model_to_json(file));
}

qcore::ProjectiveMeasurement parse_measurement_json(const std::string& text) {
  return measurement_from_json(parse_text(text), "measurement");
}

qcore::ProjectiveMeasurement load_measurement_file(const std::string& path) {
  return parse_measurement_json(read_text_file(path));
}

std::string measurement_to_json(const qcore::ProjectiveMeasurement& meas,
                                int indent) {
  return measurement_to_json_value(meas).dump(indent) + "\n";
}

pbrcheck::PbrScenario parse_scenario_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw ParseError("scenario document must be a JSON object");
  qcore::PureState psi1(
      amplitudes_from_json(require(j, "psi1", "scenario"), "psi1"));
  qcore::PureState psi2(
      amplitudes_from_json(require(j, "psi2", "scenario"), "psi2"));
  const int L = require(j, "L", "scenario").get<int>();
  const bool canonical =
      j.contains("canonical-basis") && j["canonical-basis"].get<bool>();
  if (canonical) {
    if (L != 2) {
      throw ArgumentError("the canonical basis is the L = 2 construction");
    }
    return pbrcheck::PbrScenario(std::move(psi1), std::move(psi2), L,
                                 pbrcheck::pbr_basis_l2());
  }
  return pbrcheck::PbrScenario(
      std::move(psi1), std::move(psi2), L,
      measurement_from_json(require(j, "basis", "scenario"), "scenario basis"));
}

pbrcheck::PbrScenario load_scenario_file(const std::string& path) {
  return parse_scenario_json(read_text_file(path));
}

std::string scenario_to_json(const qcore::PureState& psi1,
                             const qcore::PureState& psi2, int L,
                             const std::optional<qcore::ProjectiveMeasurement>&
                                 explicit_basis,
                             int indent) {
  json j;
  j["psi1"] = amplitudes_to_json(psi1);
  j["psi2"] = amplitudes_to_json(psi2);
  j["L"] = L;
  if (explicit_basis) {
    j["basis"] = measurement_to_json_value(*explicit_basis);
  } else {
    j["canonical-basis"] = true;
  }
  return j.dump(indent) + "\n";
}

transforms::EquivalenceSuite parse_suite_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw ParseError("suite document must be a JSON object");
  transforms::EquivalenceSuite suite;
  if (j.contains("tolerance")) suite.tolerance = j["tolerance"].get<double>();
  for (const json& jt : require(j, "triples", "suite")) {
    transforms::EquivalenceTriple triple;
    triple.state = require(jt, "state", "suite triple").get<std::string>();
    triple.observable = require(jt, "observable", "suite triple").get<std::string>();
    for (const json& o : require(jt, "outcomes", "suite triple")) {
      triple.outcomes.push_back(o.get<std::string>());
    }
    suite.triples.push_back(std::move(triple));
  }
  return suite;
}

transforms::EquivalenceSuite load_suite_file(const std::string& path) {
  return parse_suite_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed to write '" + path + "'");
}

}  // namespace hvwork::model_io
