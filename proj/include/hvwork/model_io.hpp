#pragma once

#include <optional>
#include <string>

#include "hvwork/composer.hpp"
#include "hvwork/pbrcheck.hpp"
#include "hvwork/transforms.hpp"

// JSON model, measurement, scenario, and suite files. The model format is
// self-contained: space, states, observables, densities, and response
// tables, plus an optional composite block recording provenance. Doubles
// are serialized with shortest round-trip precision, so a save/load cycle
// reproduces every probability bit for bit.
namespace hvwork::model_io {

struct ModelFile {
  hvframe::HVModel model;
  std::optional<composer::CompositeInfo> composite;
};

// Parses and validates; ParseError for malformed documents, InvariantError
// (naming the offending state/cell/observable) for the first violated
// model invariant.
ModelFile parse_model_json(const std::string& text);
ModelFile load_model_file(const std::string& path);

std::string model_to_json(const ModelFile& file, int indent = 2);
void save_model_file(const ModelFile& file, const std::string& path);

qcore::ProjectiveMeasurement parse_measurement_json(const std::string& text);
qcore::ProjectiveMeasurement load_measurement_file(const std::string& path);
std::string measurement_to_json(const qcore::ProjectiveMeasurement& meas,
                                int indent = 2);

// Scenario files list psi1, psi2, L, and either "canonical-basis": true or
// an explicit "basis" measurement object.
pbrcheck::PbrScenario parse_scenario_json(const std::string& text);
pbrcheck::PbrScenario load_scenario_file(const std::string& path);
std::string scenario_to_json(const qcore::PureState& psi1,
                             const qcore::PureState& psi2, int L,
                             const std::optional<qcore::ProjectiveMeasurement>&
                                 explicit_basis = std::nullopt,
                             int indent = 2);

transforms::EquivalenceSuite parse_suite_json(const std::string& text);
transforms::EquivalenceSuite load_suite_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hvwork::model_io
