#include "hvwork/hvwork.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>

#include "hvwork/demos.hpp"
#include "hvwork/toymodels.hpp"
#include "json.hpp"

using nlohmann::json;

struct hvw_model {
  hvwork::model_io::ModelFile file;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hvw_status map_code(hvwork::ErrorCode code) {
  using hvwork::ErrorCode;
  switch (code) {
    case ErrorCode::kArgument: return HVW_ERR_ARGUMENT;
    case ErrorCode::kLookup: return HVW_ERR_LOOKUP;
    case ErrorCode::kParse: return HVW_ERR_PARSE;
    case ErrorCode::kInvariant: return HVW_ERR_INVARIANT;
    case ErrorCode::kPrecondition: return HVW_ERR_PRECONDITION;
    case ErrorCode::kWrongAudit: return HVW_ERR_WRONG_AUDIT;
    case ErrorCode::kTotalNoShow: return HVW_ERR_TOTAL_NO_SHOW;
    case ErrorCode::kNoWitness: return HVW_ERR_NO_WITNESS;
    case ErrorCode::kIo: return HVW_ERR_IO;
    case ErrorCode::kInternal: return HVW_ERR_INTERNAL;
  }
  return HVW_ERR_INTERNAL;
}

template <typename Fn>
hvw_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HVW_OK;
  } catch (const hvwork::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HVW_ERR_INTERNAL;
  }
}

const char* require_cstr(const char* text, const char* what) {
  if (!text) throw hvwork::ArgumentError(std::string(what) + " must not be NULL");
  return text;
}

const hvw_model& require_model(const hvw_model* model) {
  if (!model) throw hvwork::ArgumentError("model handle must not be NULL");
  return *model;
}

hvwork::composer::CompositeModel require_composite(const hvw_model* model) {
  const hvw_model& m = require_model(model);
  if (!m.file.composite) {
    throw hvwork::ArgumentError(
        "model carries no composite provenance; build it with a compose call "
        "or load a composite file");
  }
  return {m.file.model, *m.file.composite};
}

json parse_json_text(const char* text, const char* what) {
  try {
    return json::parse(require_cstr(text, what));
  } catch (const json::parse_error& e) {
    throw hvwork::ParseError(std::string(what) + ": " + e.what());
  }
}

hvwork::qcore::OutcomeSet outcome_set_from_json(const char* text) {
  const json j = parse_json_text(text, "outcome set");
  if (!j.is_array()) {
    throw hvwork::ParseError("outcome set must be a JSON array of labels");
  }
  hvwork::qcore::OutcomeSet out;
  for (const json& o : j) {
    if (!o.is_string()) {
      throw hvwork::ParseError("outcome set entries must be strings");
    }
    out.push_back(o.get<std::string>());
  }
  return out;
}

std::vector<hvwork::toymodels::NamedState> named_states_from_json(const char* text) {
  const json j = parse_json_text(text, "state list");
  if (!j.is_array()) {
    throw hvwork::ParseError("state list must be a JSON array");
  }
  std::vector<hvwork::toymodels::NamedState> out;
  for (const json& js : j) {
    if (!js.is_object() || !js.contains("id") || !js.contains("amplitudes")) {
      throw hvwork::ParseError("each state needs 'id' and 'amplitudes'");
    }
    std::vector<hvwork::qcore::Complex> amps;
    for (const json& pair : js["amplitudes"]) {
      if (!pair.is_array() || pair.size() != 2) {
        throw hvwork::ParseError("amplitudes must be [re, im] pairs");
      }
      amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    out.push_back({js["id"].get<std::string>(),
                   hvwork::qcore::PureState(std::move(amps))});
  }
  return out;
}

std::vector<hvwork::toymodels::ToyObservable> observables_from_json(const char* text) {
  const json j = parse_json_text(text, "observable list");
  if (!j.is_array()) {
    throw hvwork::ParseError("observable list must be a JSON array");
  }
  std::vector<hvwork::toymodels::ToyObservable> out;
  for (const json& jo : j) {
    if (!jo.is_object() || !jo.contains("id")) {
      throw hvwork::ParseError("each observable needs an 'id'");
    }
    out.emplace_back(jo["id"].get<std::string>(),
                     hvwork::model_io::parse_measurement_json(jo.dump()));
  }
  return out;
}

void emit(char** out, const std::string& text) {
  if (!out) throw hvwork::ArgumentError("output pointer must not be NULL");
  *out = dup_string(text);
  if (!*out) throw hvwork::InternalError("out of memory");
}

void emit_model(hvw_model** out, hvwork::model_io::ModelFile file) {
  if (!out) throw hvwork::ArgumentError("output pointer must not be NULL");
  *out = new hvw_model{std::move(file)};
}

json checks_to_json(const hvwork::demos::DemoReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"detail", c.detail},
                      {"residual", c.residual},
                      {"pass", c.pass}});
  }
  return json{{"demo", report.demo}, {"pass", report.pass}, {"checks", checks}};
}

}  // namespace

extern "C" {

const char* hvw_version(void) { return "1.0.0"; }

const char* hvw_status_name(hvw_status status) {
  switch (status) {
    case HVW_OK: return "ok";
    case HVW_ERR_ARGUMENT: return "argument-error";
    case HVW_ERR_LOOKUP: return "lookup-error";
    case HVW_ERR_PARSE: return "parse-error";
    case HVW_ERR_INVARIANT: return "invariant-error";
    case HVW_ERR_PRECONDITION: return "precondition-error";
    case HVW_ERR_WRONG_AUDIT: return "wrong-audit-error";
    case HVW_ERR_TOTAL_NO_SHOW: return "total-no-show-error";
    case HVW_ERR_NO_WITNESS: return "no-witness-error";
    case HVW_ERR_IO: return "io-error";
    case HVW_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* hvw_last_error(void) { return g_last_error.c_str(); }

void hvw_string_free(char* text) { std::free(text); }

void hvw_model_free(hvw_model* model) { delete model; }

hvw_status hvw_model_parse_json(const char* text, hvw_model** out) {
  return guarded([&] {
    emit_model(out, hvwork::model_io::parse_model_json(
                        require_cstr(text, "model JSON")));
  });
}

hvw_status hvw_model_load_file(const char* path, hvw_model** out) {
  return guarded([&] {
    emit_model(out, hvwork::model_io::load_model_file(
                        require_cstr(path, "model path")));
  });
}

hvw_status hvw_model_to_json(const hvw_model* model, char** out_json) {
  return guarded([&] {
    emit(out_json, hvwork::model_io::model_to_json(require_model(model).file));
  });
}

hvw_status hvw_model_save_file(const hvw_model* model, const char* path) {
  return guarded([&] {
    hvwork::model_io::save_model_file(require_model(model).file,
                                      require_cstr(path, "model path"));
  });
}

hvw_status hvw_model_describe(const hvw_model* model, char** out_json) {
  return guarded([&] {
    const auto& file = require_model(model).file;
    const auto c = hvwork::hvframe::classify(file.model);
    json j;
    j["label"] = file.model.label;
    j["classification"] = {{"mixture", hvwork::hvframe::mixture_name(c)},
                           {"dependence", hvwork::hvframe::dependence_name(c)},
                           {"determinism", hvwork::hvframe::determinism_name(c)}};
    j["cells"] = file.model.space.cells().size();
    j["states"] = file.model.states.size();
    j["observables"] = file.model.observables.size();
    j["space_total_measure"] = file.model.space.total_measure();
    json overlaps = json::array();
    for (auto i = file.model.states.begin(); i != file.model.states.end(); ++i) {
      for (auto k = std::next(i); k != file.model.states.end(); ++k) {
        const auto r = hvwork::hvframe::overlap_report(file.model, i->first, k->first);
        overlaps.push_back({{"pair", json::array({r.first, r.second})},
                            {"q_base", r.q_base},
                            {"q_under_first", r.q_under_first},
                            {"q_under_second", r.q_under_second}});
      }
    }
    j["overlaps"] = std::move(overlaps);
    if (file.composite) {
      j["composite"] = {{"L", file.composite->num_components},
                        {"rule", hvwork::composer::rule_name(file.composite->rule)},
                        {"pair", json::array({file.composite->first_state,
                                              file.composite->second_state})}};
    } else {
      j["composite"] = nullptr;
    }
    emit(out_json, j.dump(2) + "\n");
  });
}

hvw_status hvw_model_overlap(const hvw_model* model, const char* state_a,
                             const char* state_b, double* q_base,
                             double* q_under_first, double* q_under_second) {
  return guarded([&] {
    const auto r = hvwork::hvframe::overlap_report(
        require_model(model).file.model, require_cstr(state_a, "state id"),
        require_cstr(state_b, "state id"));
    if (q_base) *q_base = r.q_base;
    if (q_under_first) *q_under_first = r.q_under_first;
    if (q_under_second) *q_under_second = r.q_under_second;
  });
}

hvw_status hvw_check_born(const hvw_model* model, const char* state_id,
                          const char* observable_id, const char* outcomes_json,
                          double* residual) {
  return guarded([&] {
    const double r = hvwork::hvframe::check_born_reproduction(
        require_model(model).file.model, require_cstr(state_id, "state id"),
        require_cstr(observable_id, "observable id"),
        outcome_set_from_json(outcomes_json));
    if (residual) *residual = r;
  });
}

hvw_status hvw_check_conditional(const hvw_model* model, const char* state_id,
                                 const char* observable_id,
                                 const char* outcomes_json, double* residual) {
  return guarded([&] {
    const double r = hvwork::hvframe::check_conditional_reproduction(
        require_model(model).file.model, require_cstr(state_id, "state id"),
        require_cstr(observable_id, "observable id"),
        outcome_set_from_json(outcomes_json));
    if (residual) *residual = r;
  });
}

hvw_status hvw_reproduced_probability(const hvw_model* model,
                                      const char* state_id,
                                      const char* observable_id,
                                      const char* outcomes_json,
                                      double* probability) {
  return guarded([&] {
    const double p = hvwork::hvframe::reproduced_probability(
        require_model(model).file.model, require_cstr(state_id, "state id"),
        require_cstr(observable_id, "observable id"),
        outcome_set_from_json(outcomes_json));
    if (probability) *probability = p;
  });
}

hvw_status hvw_build_mixed_toy(const char* states_json,
                               const char* observables_json, hvw_model** out) {
  return guarded([&] {
    emit_model(out, {hvwork::toymodels::build_mixed_toy(
                         named_states_from_json(states_json),
                         observables_from_json(observables_json)),
                     std::nullopt});
  });
}

hvw_status hvw_build_segregated_toy(const char* states_json,
                                    const char* observables_json,
                                    const char* geometry, hvw_model** out) {
  return guarded([&] {
    emit_model(out, {hvwork::toymodels::build_segregated_toy(
                         named_states_from_json(states_json),
                         observables_from_json(observables_json),
                         hvwork::toymodels::geometry_from_name(
                             require_cstr(geometry, "geometry"))),
                     std::nullopt});
  });
}

hvw_status hvw_build_uniform_state_dependent(const char* measurement_json,
                                             const char* observable_id,
                                             const char* states_json,
                                             hvw_model** out) {
  return guarded([&] {
    emit_model(out, {hvwork::toymodels::build_uniform_state_dependent(
                         hvwork::model_io::parse_measurement_json(
                             require_cstr(measurement_json, "measurement JSON")),
                         require_cstr(observable_id, "observable id"),
                         named_states_from_json(states_json)),
                     std::nullopt});
  });
}

hvw_status hvw_segregate(const hvw_model* model, hvw_model** out) {
  return guarded([&] {
    emit_model(out, {hvwork::transforms::segregate(require_model(model).file.model),
                     std::nullopt});
  });
}

hvw_status hvw_mix(const hvw_model* model, hvw_model** out) {
  return guarded([&] {
    emit_model(out, {hvwork::transforms::mix(require_model(model).file.model),
                     std::nullopt});
  });
}

hvw_status hvw_equivalence(const hvw_model* a, const hvw_model* b,
                           const char* suite_json, char** report_json) {
  return guarded([&] {
    const auto& ma = require_model(a).file.model;
    const auto& mb = require_model(b).file.model;
    const hvwork::transforms::EquivalenceSuite suite =
        suite_json ? hvwork::model_io::parse_suite_json(suite_json)
                   : hvwork::transforms::full_suite(ma);
    const auto report = hvwork::transforms::assert_equivalent(ma, mb, suite);
    json triples = json::array();
    for (const auto& r : report.results) {
      triples.push_back({{"state", r.triple.state},
                         {"observable", r.triple.observable},
                         {"outcomes", r.triple.outcomes},
                         {"probability_a", r.probability_a},
                         {"probability_b", r.probability_b},
                         {"delta", r.delta}});
    }
    emit(report_json, json{{"tolerance", report.tolerance},
                           {"max_delta", report.max_delta},
                           {"pass", report.pass},
                           {"triples", triples}}
                          .dump(2) +
                          "\n");
  });
}

hvw_status hvw_compose(const hvw_model* component, const char* rule,
                       const char* state_a, const char* state_b, int L,
                       hvw_model** out) {
  return guarded([&] {
    auto composite = hvwork::composer::compose(
        require_model(component).file.model,
        require_cstr(state_a, "state id"), require_cstr(state_b, "state id"),
        L, hvwork::composer::rule_from_name(require_cstr(rule, "rule")));
    emit_model(out, {std::move(composite.base), std::move(composite.info)});
  });
}

hvw_status hvw_compose_prism(const hvw_model* component, const char* state_a,
                             const char* state_b, int L,
                             const char* measurement_json,
                             const char* observable_id, hvw_model** out) {
  return guarded([&] {
    auto composite = hvwork::composer::build_prism_composite(
        require_model(component).file.model,
        require_cstr(state_a, "state id"), require_cstr(state_b, "state id"),
        L,
        hvwork::model_io::parse_measurement_json(
            require_cstr(measurement_json, "measurement JSON")),
        require_cstr(observable_id, "observable id"));
    emit_model(out, {std::move(composite.base), std::move(composite.info)});
  });
}

hvw_status hvw_compose_forced(const hvw_model* component, const char* state_a,
                              const char* state_b, int L,
                              const char* measurement_json,
                              const char* observable_id, hvw_model** out) {
  return guarded([&] {
    const auto& comp = require_model(component).file.model;
    const std::string a = require_cstr(state_a, "state id");
    const std::string b = require_cstr(state_b, "state id");
    const hvwork::pbrcheck::PbrScenario scenario(
        comp.state(a), comp.state(b), L,
        hvwork::model_io::parse_measurement_json(
            require_cstr(measurement_json, "measurement JSON")));
    auto composite = hvwork::composer::compose_independent(comp, a, b, L);
    hvwork::pbrcheck::attach_forced_state_independent_table(
        composite, scenario, require_cstr(observable_id, "observable id"));
    emit_model(out, {std::move(composite.base), std::move(composite.info)});
  });
}

hvw_status hvw_check_compatibility(const hvw_model* composite,
                                   const hvw_model* component,
                                   const char* state_a, const char* state_b,
                                   char** report_json) {
  return guarded([&] {
    const auto result = hvwork::composer::check_compatibility(
        require_composite(composite), require_model(component).file.model,
        require_cstr(state_a, "state id"), require_cstr(state_b, "state id"));
    json j{{"holds", result.holds}};
    j["counterexample_cell"] = result.counterexample_cell
                                   ? json(*result.counterexample_cell)
                                   : json(nullptr);
    emit(report_json, j.dump(2) + "\n");
  });
}

hvw_status hvw_check_compactness(const hvw_model* composite,
                                 const hvw_model* component,
                                 const char* state_a, const char* state_b,
                                 char** report_json) {
  return guarded([&] {
    const auto result = hvwork::composer::check_compactness(
        require_composite(composite), require_model(component).file.model,
        require_cstr(state_a, "state id"), require_cstr(state_b, "state id"));
    const char* kind = result.kind == hvwork::composer::CompactnessKind::kWitness
                           ? "witness"
                           : result.kind ==
                                     hvwork::composer::CompactnessKind::kNoneVacuous
                                 ? "vacuous"
                                 : "violated";
    json j{{"kind", kind}, {"holds", result.holds()}};
    j["witness_cell"] =
        result.witness_cell ? json(*result.witness_cell) : json(nullptr);
    emit(report_json, j.dump(2) + "\n");
  });
}

hvw_status hvw_common_support_measure(const hvw_model* composite,
                                      double* measure) {
  return guarded([&] {
    const double m = hvwork::composer::common_support_base_measure(
        require_composite(composite));
    if (measure) *measure = m;
  });
}

hvw_status hvw_pbr_basis_l2(char** measurement_json) {
  return guarded([&] {
    emit(measurement_json,
         hvwork::model_io::measurement_to_json(hvwork::pbrcheck::pbr_basis_l2()));
  });
}

hvw_status hvw_pbr_verify(const char* scenario_json, char** report_json) {
  return guarded([&] {
    const auto scenario = hvwork::model_io::parse_scenario_json(
        require_cstr(scenario_json, "scenario JSON"));
    hvwork::demos::DemoReport report;
    report.demo = "pbr-verify";
    const auto& meas = scenario.measurement();
    const double gram = hvwork::qcore::orthonormality_residual(
        std::span<const hvwork::qcore::PureState>(meas.basis().data(),
                                                  meas.basis().size()));
    report.add("joint basis orthonormal", "largest Gram-matrix deviation",
               gram, gram <= hvwork::kTolerance);
    const double identity = hvwork::qcore::identity_resolution_residual(meas);
    report.add("joint basis resolves the identity",
               "largest deviation of the projector sum", identity,
               identity <= hvwork::kTolerance);
    const auto residuals = hvwork::pbrcheck::verify_antidistinguishing(
        meas, std::span<const hvwork::qcore::PureState>(
                  scenario.products().data(), scenario.products().size()));
    for (size_t j = 0; j < residuals.size(); ++j) {
      report.add("antidistinguishing outcome " + meas.outcomes()[j],
                 "Born probability of the matching product state",
                 residuals[j], residuals[j] <= hvwork::kTolerance);
    }
    emit(report_json, checks_to_json(report).dump(2) + "\n");
  });
}

hvw_status hvw_pbr_detect(const hvw_model* composite, const char* scenario_json,
                          char** verdict_json) {
  return guarded([&] {
    const auto verdict = hvwork::pbrcheck::detect_lemma_contradiction(
        require_composite(composite),
        hvwork::model_io::parse_scenario_json(
            require_cstr(scenario_json, "scenario JSON")));
    emit(verdict_json,
         json{{"kind", hvwork::pbrcheck::lemma_kind_name(verdict.kind)},
              {"witness_cell", verdict.witness_cell},
              {"chain", verdict.chain},
              {"totality", verdict.totality},
              {"theta_weight", verdict.theta_weight}}
             .dump(2) +
             "\n");
  });
}

hvw_status hvw_pbr_inefficiency(const hvw_model* composite, char** report_json) {
  return guarded([&] {
    const auto report =
        hvwork::pbrcheck::builtin_inefficiency(require_composite(composite));
    json theta = json::array();
    for (const auto& [cell, w] : report.theta_by_cell) {
      theta.push_back(json::array({cell, w}));
    }
    json aggregates = json::array();
    for (const auto& [prep, value] : report.aggregate_by_preparation) {
      aggregates.push_back(json::array({prep, value}));
    }
    emit(report_json, json{{"note", report.note},
                           {"worst_case", report.worst_case},
                           {"theta_by_cell", theta},
                           {"aggregate_by_preparation", aggregates}}
                          .dump(2) +
                          "\n");
  });
}

hvw_status hvw_pbr_additivity(const hvw_model* composite, const char* cell_id,
                              char** report_json) {
  return guarded([&] {
    const auto audit = hvwork::pbrcheck::additivity_audit(
        require_composite(composite), require_cstr(cell_id, "cell id"));
    emit(report_json, json{{"cell", audit.cell},
                           {"projector_values", audit.projector_values},
                           {"value_sum", audit.value_sum},
                           {"identity_value", audit.identity_value},
                           {"mismatch", audit.mismatch},
                           {"operator_residual", audit.operator_residual}}
                          .dump(2) +
                          "\n");
  });
}

hvw_status hvw_run_demo(const char* name, double tolerance, char** report_json) {
  return guarded([&] {
    const auto report =
        hvwork::demos::run_demo(require_cstr(name, "demo name"), tolerance);
    emit(report_json, checks_to_json(report).dump(2) + "\n");
  });
}

hvw_status hvw_demo_models(const char* name, char** files_json) {
  return guarded([&] {
    const auto fixtures =
        hvwork::demos::demo_models(require_cstr(name, "demo name"));
    json files = json::object();
    for (const auto& [file_name, model_file] : fixtures.models) {
      files[file_name] = hvwork::model_io::model_to_json(model_file);
    }
    for (const auto& [file_name, text] : fixtures.documents) {
      files[file_name] = text;
    }
    emit(files_json, files.dump(2) + "\n");
  });
}

hvw_status hvw_property_suite(uint64_t seed, int count, char** report_json) {
  return guarded([&] {
    const auto report = hvwork::composer::strictness_property_suite(seed, count);
    emit(report_json,
         json{{"fixtures", report.fixtures},
              {"compatible_count", report.compatible_count},
              {"compact_count", report.compact_count},
              {"compact_without_compatibility", report.compact_without_compatibility},
              {"implication_violations", report.implication_violations},
              {"canonical_gap_fixture", report.canonical_gap_fixture},
              {"pass", report.pass}}
             .dump(2) +
             "\n");
  });
}

}  // extern "C"
