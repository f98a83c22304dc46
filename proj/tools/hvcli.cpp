// Command-line front end for the hidden-variables workbench. Talks to the
// shared library exclusively through the C API and renders its JSON
// payloads as human, structured, or csv reports.
//
// Exit status: 0 when every reported check passes, 1 when any fails,
// 2 for usage or runtime errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hvwork/hvwork.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

struct ModelHandle {
  hvw_model* ptr = nullptr;
  ModelHandle() = default;
  ModelHandle(const ModelHandle&) = delete;
  ModelHandle& operator=(const ModelHandle&) = delete;
  ~ModelHandle() { hvw_model_free(ptr); }
};

[[noreturn]] void fail(hvw_status status) {
  std::cerr << "error (" << hvw_status_name(status) << "): " << hvw_last_error()
            << "\n";
  std::exit(2);
}

void check_status(hvw_status status) {
  if (status != HVW_OK) fail(status);
}

std::string take_string(char* text) {
  std::string out = text ? text : "";
  hvw_string_free(text);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error (io-error): cannot open '" << path << "'\n";
    std::exit(2);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error (io-error): cannot open '" << path << "' for writing\n";
    std::exit(2);
  }
  out << content;
}

struct OutputOptions {
  std::string format = "human";
  std::string out_path;
  double tolerance = 1e-12;
  bool tolerance_set = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--format", opts.format, "Report format")
      ->check(CLI::IsMember({"human", "structured", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", opts.out_path, "Write the report to this file");
  cmd->add_option("--tolerance", opts.tolerance,
                  "Audit tolerance (absolute)")
      ->capture_default_str()
      ->each([&opts](const std::string&) { opts.tolerance_set = true; });
}

std::string fmt_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

// report: {"command", "checks": [{"name","detail","residual","pass"}], ...}
std::string render_report(const json& report, const std::string& format) {
  if (format == "structured") {
    return report.dump(2) + "\n";
  }
  if (format == "csv") {
    std::ostringstream os;
    os << "name,residual,verdict,detail\n";
    for (const json& check : report["checks"]) {
      os << csv_quote(check["name"].get<std::string>()) << ","
         << check["residual"].dump() << ","
         << (check["pass"].get<bool>() ? "pass" : "fail") << ","
         << csv_quote(check["detail"].get<std::string>()) << "\n";
    }
    return os.str();
  }
  std::ostringstream os;
  os << "# " << report["command"].get<std::string>() << "\n";
  for (const json& check : report["checks"]) {
    os << (check["pass"].get<bool>() ? "[PASS] " : "[FAIL] ")
       << check["name"].get<std::string>();
    const std::string detail = check["detail"].get<std::string>();
    if (!detail.empty()) os << " — " << detail;
    const double residual = check["residual"].get<double>();
    if (residual != 0.0) {
      os << " (residual " << check["residual"].dump() << ")";
    }
    os << "\n";
  }
  const bool pass = report["verdict"] == "pass";
  os << "verdict: " << (pass ? "pass (exit status 0)" : "fail (exit status 1)")
     << "\n";
  return os.str();
}

// Wraps a check list into the versioned report envelope, emits it in the
// requested format, and exits with the verdict.
[[noreturn]] void finish(const std::string& command, json checks,
                         const OutputOptions& opts) {
  bool pass = true;
  for (const json& check : checks) pass = pass && check["pass"].get<bool>();
  json report{{"schema_version", kSchemaVersion},
              {"command", command},
              {"tolerance", opts.tolerance},
              {"checks", std::move(checks)},
              {"verdict", pass ? "pass" : "fail"}};
  const std::string text = render_report(report, opts.format);
  if (opts.out_path.empty()) {
    std::cout << text;
  } else {
    write_file(opts.out_path, text);
  }
  std::exit(pass ? 0 : 1);
}

json check_entry(const std::string& name, const std::string& detail,
                 double residual, bool pass) {
  return json{{"name", name}, {"detail", detail}, {"residual", residual},
              {"pass", pass}};
}

std::pair<std::string, std::string> parse_pair(const std::string& pair) {
  const auto comma = pair.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 >= pair.size()) {
    std::cerr << "error (argument-error): --pair expects 'first,second'\n";
    std::exit(2);
  }
  return {pair.substr(0, comma), pair.substr(comma + 1)};
}

void save_demo_models(const std::string& demo, const std::string& dir) {
  char* files_text = nullptr;
  check_status(hvw_demo_models(demo.c_str(), &files_text));
  const json files = json::parse(take_string(files_text));
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files.items()) {
    write_file((std::filesystem::path(dir) / name).string(),
               content.get<std::string>());
  }
  std::cerr << "wrote " << files.size() << " fixture files to " << dir << "\n";
}

[[noreturn]] void run_demo_command(const std::string& name,
                                   const OutputOptions& opts,
                                   const std::string& save_dir) {
  if (!save_dir.empty()) save_demo_models(name, save_dir);
  char* report_text = nullptr;
  check_status(hvw_run_demo(name.c_str(), opts.tolerance, &report_text));
  const json demo_report = json::parse(take_string(report_text));
  finish("demo " + name, demo_report["checks"], opts);
}

[[noreturn]] void run_check_command(const std::string& path,
                                    const OutputOptions& opts) {
  ModelHandle model;
  const hvw_status status = hvw_model_load_file(path.c_str(), &model.ptr);
  json checks = json::array();
  if (status != HVW_OK) {
    checks.push_back(check_entry(
        "load and validate " + path,
        std::string(hvw_status_name(status)) + ": " + hvw_last_error(), 0.0,
        false));
    finish("check " + path, std::move(checks), opts);
  }
  checks.push_back(check_entry("load and validate " + path,
                               "all model invariants hold", 0.0, true));

  char* describe_text = nullptr;
  check_status(hvw_model_describe(model.ptr, &describe_text));
  const json info = json::parse(take_string(describe_text));
  const double space_residual =
      std::abs(info["space_total_measure"].get<double>() - 1.0);
  checks.push_back(check_entry("space has unit measure", "", space_residual,
                               space_residual <= opts.tolerance));
  const auto& c = info["classification"];
  checks.push_back(check_entry(
      "classification",
      c["mixture"].get<std::string>() + ", " +
          c["dependence"].get<std::string>() + ", " +
          c["determinism"].get<std::string>(),
      0.0, true));
  for (const json& overlap : info["overlaps"]) {
    checks.push_back(check_entry(
        "support overlap " + overlap["pair"][0].get<std::string>() + " / " +
            overlap["pair"][1].get<std::string>(),
        "q_base " + overlap["q_base"].dump() + ", under first " +
            overlap["q_under_first"].dump() + ", under second " +
            overlap["q_under_second"].dump(),
        0.0, true));
  }
  if (!info["composite"].is_null()) {
    checks.push_back(check_entry(
        "composite provenance",
        "rule " + info["composite"]["rule"].get<std::string>() + ", L=" +
            info["composite"]["L"].dump(),
        0.0, true));
  }
  finish("check " + path, std::move(checks), opts);
}

[[noreturn]] void run_transform_command(const std::string& kind,
                                        const std::string& in_path,
                                        const std::string& out_path,
                                        const OutputOptions& opts) {
  ModelHandle in;
  check_status(hvw_model_load_file(in_path.c_str(), &in.ptr));
  ModelHandle out;
  if (kind == "segregate") {
    check_status(hvw_segregate(in.ptr, &out.ptr));
  } else {
    check_status(hvw_mix(in.ptr, &out.ptr));
  }
  check_status(hvw_model_save_file(out.ptr, out_path.c_str()));

  char* describe_text = nullptr;
  check_status(hvw_model_describe(out.ptr, &describe_text));
  const json info = json::parse(take_string(describe_text));
  json checks = json::array();
  checks.push_back(check_entry(
      "transform " + kind,
      "wrote " + out_path + " (" +
          info["classification"]["mixture"].get<std::string>() + ")",
      0.0, true));
  finish("transform " + kind, std::move(checks), opts);
}

[[noreturn]] void run_equivalence_command(const std::string& a_path,
                                          const std::string& b_path,
                                          const std::string& suite,
                                          const OutputOptions& opts) {
  ModelHandle a;
  ModelHandle b;
  check_status(hvw_model_load_file(a_path.c_str(), &a.ptr));
  check_status(hvw_model_load_file(b_path.c_str(), &b.ptr));

  std::string suite_text;
  const char* suite_arg = nullptr;
  if (!suite.empty() && suite != "full") {
    suite_text = read_file(suite);
    suite_arg = suite_text.c_str();
  }
  char* report_text = nullptr;
  check_status(hvw_equivalence(a.ptr, b.ptr, suite_arg, &report_text));
  const json eq = json::parse(take_string(report_text));

  // The suite's own tolerance governs unless the flag was given explicitly.
  const double tol =
      opts.tolerance_set ? opts.tolerance : eq["tolerance"].get<double>();
  json checks = json::array();
  for (const json& triple : eq["triples"]) {
    std::string outcomes;
    for (const json& o : triple["outcomes"]) {
      outcomes += (outcomes.empty() ? "" : ",") + o.get<std::string>();
    }
    const double delta = triple["delta"].get<double>();
    checks.push_back(check_entry(
        "equivalence " + triple["state"].get<std::string>() + " " +
            triple["observable"].get<std::string>() + " {" + outcomes + "}",
        "p_a " + triple["probability_a"].dump() + ", p_b " +
            triple["probability_b"].dump(),
        delta, delta <= tol));
  }
  checks.push_back(check_entry("max delta", "over " +
                                   std::to_string(eq["triples"].size()) +
                                   " triples",
                               eq["max_delta"].get<double>(),
                               eq["max_delta"].get<double>() <= tol));
  finish("audit equivalence", std::move(checks), opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hvwork — a workbench for finite hidden-variables models"};
  app.require_subcommand(1);

  // demo
  auto* demo = app.add_subcommand("demo", "Run a canonical demonstration");
  std::string demo_name;
  std::string demo_save_dir;
  OutputOptions demo_opts;
  demo->add_option("name", demo_name, "toy, segregate, mix, pbr, or additivity")
      ->required();
  demo->add_option("--save-models", demo_save_dir,
                   "Also write the demo's fixture files to this directory");
  add_output_options(demo, demo_opts);

  // check
  auto* check = app.add_subcommand("check", "Load and validate a model file");
  std::string check_path;
  OutputOptions check_opts;
  check->add_option("model", check_path, "Model file")->required();
  add_output_options(check, check_opts);

  // transform
  auto* transform = app.add_subcommand("transform", "Segregate or mix a model");
  std::string transform_kind;
  std::string transform_in;
  std::string transform_out;
  OutputOptions transform_opts;
  transform->add_option("kind", transform_kind, "segregate or mix")
      ->required()
      ->check(CLI::IsMember({"segregate", "mix"}));
  transform->add_option("--in", transform_in, "Input model file")->required();
  transform->add_option("--out", transform_out, "Output model file")->required();
  transform->add_option("--format", transform_opts.format, "Report format")
      ->check(CLI::IsMember({"human", "structured", "csv"}));

  // audit
  auto* audit = app.add_subcommand("audit", "Statistical audits");
  auto* equivalence = audit->add_subcommand(
      "equivalence", "Compare audited probabilities of two models");
  std::string eq_a;
  std::string eq_b;
  std::string eq_suite = "full";
  OutputOptions eq_opts;
  equivalence->add_option("--a", eq_a, "First model file")->required();
  equivalence->add_option("--b", eq_b, "Second model file")->required();
  equivalence->add_option("--suite", eq_suite,
                          "Suite file, or 'full' for every singleton triple");
  add_output_options(equivalence, eq_opts);
  audit->require_subcommand(1);

  // compose
  auto* compose = app.add_subcommand("compose", "Build composite models");
  std::string compose_rule = "independent";
  std::string compose_component;
  std::string compose_pair;
  int compose_l = 2;
  std::string compose_out;
  compose->add_option("--rule", compose_rule,
                      "independent, compatible, or compact-native")
      ->check(CLI::IsMember({"independent", "compatible", "compact-native"}));
  compose->add_option("--component", compose_component, "Component model file");
  compose->add_option("--pair", compose_pair, "Component state ids: first,second");
  compose->add_option("--L", compose_l, "Number of component copies");
  compose->add_option("--out", compose_out, "Output composite file");

  auto* prism = compose->add_subcommand(
      "prism", "Attach the outcome-conditioned state-independent table");
  auto* forced = compose->add_subcommand(
      "forced",
      "Attach the deterministic state-independent table consistent with the "
      "antidistinguishing Born zeros");
  std::string special_component;
  std::string special_pair;
  int special_l = 2;
  std::string special_measurement;
  std::string special_observable = "M";
  std::string special_out;
  for (CLI::App* sub : {prism, forced}) {
    sub->add_option("--component", special_component, "Component model file")
        ->required();
    sub->add_option("--pair", special_pair, "Component state ids: first,second")
        ->required();
    sub->add_option("--L", special_l, "Number of component copies");
    sub->add_option("--measurement", special_measurement,
                    "Measurement file (omit for the canonical L=2 basis)");
    sub->add_option("--observable-id", special_observable,
                    "Observable id for the attached table");
    sub->add_option("--out", special_out, "Output composite file")->required();
  }

  // pbr
  auto* pbr = app.add_subcommand("pbr", "Antidistinguishing scenario commands");
  pbr->require_subcommand(1);
  auto* pbr_demo = pbr->add_subcommand("demo", "Canonical end-to-end run");
  OutputOptions pbr_demo_opts;
  add_output_options(pbr_demo, pbr_demo_opts);
  auto* pbr_verify = pbr->add_subcommand("verify", "Certify a scenario file");
  std::string pbr_scenario_path;
  OutputOptions pbr_verify_opts;
  pbr_verify->add_option("--scenario", pbr_scenario_path, "Scenario file")
      ->required();
  add_output_options(pbr_verify, pbr_verify_opts);
  auto* pbr_additivity =
      pbr->add_subcommand("additivity", "Value-assignment audit at one cell");
  std::string additivity_composite;
  std::string additivity_cell;
  OutputOptions additivity_opts;
  pbr_additivity->add_option("--composite", additivity_composite,
                             "Composite model file")
      ->required();
  pbr_additivity->add_option("--cell", additivity_cell, "Cell id")->required();
  add_output_options(pbr_additivity, additivity_opts);

  // property
  auto* property = app.add_subcommand(
      "property", "Seeded random strictness suite (compatibility vs compactness)");
  std::uint64_t property_seed = 20120802;
  int property_count = 128;
  OutputOptions property_opts;
  property->add_option("--seed", property_seed, "Random seed")
      ->capture_default_str();
  property->add_option("--count", property_count, "Number of random fixtures")
      ->capture_default_str();
  add_output_options(property, property_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (demo->parsed()) run_demo_command(demo_name, demo_opts, demo_save_dir);
  if (check->parsed()) run_check_command(check_path, check_opts);
  if (transform->parsed()) {
    run_transform_command(transform_kind, transform_in, transform_out,
                          transform_opts);
  }
  if (equivalence->parsed()) {
    run_equivalence_command(eq_a, eq_b, eq_suite, eq_opts);
  }

  if (compose->parsed()) {
    const bool special = prism->parsed() || forced->parsed();
    OutputOptions opts;
    if (!special) {
      if (compose_component.empty() || compose_pair.empty() ||
          compose_out.empty()) {
        std::cerr << "error (argument-error): compose needs --component, "
                     "--pair, and --out\n";
        return 2;
      }
      const auto [first, second] = parse_pair(compose_pair);
      ModelHandle component;
      check_status(
          hvw_model_load_file(compose_component.c_str(), &component.ptr));
      ModelHandle composite;
      check_status(hvw_compose(component.ptr, compose_rule.c_str(),
                               first.c_str(), second.c_str(), compose_l,
                               &composite.ptr));
      check_status(hvw_model_save_file(composite.ptr, compose_out.c_str()));
      json checks = json::array();
      checks.push_back(check_entry("compose --rule " + compose_rule,
                                   "wrote " + compose_out, 0.0, true));
      finish("compose", std::move(checks), opts);
    }
    const auto [first, second] = parse_pair(special_pair);
    ModelHandle component;
    check_status(
        hvw_model_load_file(special_component.c_str(), &component.ptr));
    std::string measurement_text;
    if (special_measurement.empty()) {
      char* basis_text = nullptr;
      check_status(hvw_pbr_basis_l2(&basis_text));
      measurement_text = take_string(basis_text);
    } else {
      measurement_text = read_file(special_measurement);
    }
    ModelHandle composite;
    if (prism->parsed()) {
      check_status(hvw_compose_prism(component.ptr, first.c_str(),
                                     second.c_str(), special_l,
                                     measurement_text.c_str(),
                                     special_observable.c_str(),
                                     &composite.ptr));
    } else {
      check_status(hvw_compose_forced(component.ptr, first.c_str(),
                                      second.c_str(), special_l,
                                      measurement_text.c_str(),
                                      special_observable.c_str(),
                                      &composite.ptr));
    }
    check_status(hvw_model_save_file(composite.ptr, special_out.c_str()));
    json checks = json::array();
    checks.push_back(check_entry(
        std::string("compose ") + (prism->parsed() ? "prism" : "forced"),
        "wrote " + special_out, 0.0, true));
    finish("compose", std::move(checks), opts);
  }

  if (pbr_demo->parsed()) run_demo_command("pbr", pbr_demo_opts, "");
  if (pbr_verify->parsed()) {
    const std::string scenario_text = read_file(pbr_scenario_path);
    char* report_text = nullptr;
    check_status(hvw_pbr_verify(scenario_text.c_str(), &report_text));
    const json report = json::parse(take_string(report_text));
    finish("pbr verify", report["checks"], pbr_verify_opts);
  }
  if (pbr_additivity->parsed()) {
    ModelHandle composite;
    check_status(
        hvw_model_load_file(additivity_composite.c_str(), &composite.ptr));
    char* report_text = nullptr;
    check_status(hvw_pbr_additivity(composite.ptr, additivity_cell.c_str(),
                                    &report_text));
    const json audit_json = json::parse(take_string(report_text));
    json checks = json::array();
    std::string values;
    for (const json& v : audit_json["projector_values"]) {
      values += (values.empty() ? "" : ",") + fmt_number(v.get<double>());
    }
    checks.push_back(check_entry(
        "value assignment at cell " + audit_json["cell"].get<std::string>(),
        "projector values (" + values + "), sum of values " +
            fmt_number(audit_json["value_sum"].get<double>()) +
            ", value of sum " +
            fmt_number(audit_json["identity_value"].get<double>()),
        0.0, true));
    checks.push_back(check_entry(
        "additivity of the value assignment",
        audit_json["mismatch"].get<bool>()
            ? "mismatch: the value of the sum differs from the sum of values"
            : "additive at this cell",
        0.0, true));
    const double op_residual = audit_json["operator_residual"].get<double>();
    checks.push_back(check_entry("projectors resolve the identity", "",
                                 op_residual,
                                 op_residual <= additivity_opts.tolerance));
    finish("pbr additivity", std::move(checks), additivity_opts);
  }
  if (property->parsed()) {
    char* report_text = nullptr;
    check_status(
        hvw_property_suite(property_seed, property_count, &report_text));
    const json report = json::parse(take_string(report_text));
    json checks = json::array();
    checks.push_back(check_entry(
        "compatibility implies compactness",
        report["implication_violations"].dump() + " violations over " +
            report["fixtures"].dump() + " fixtures",
        0.0, report["implication_violations"].get<int>() == 0));
    checks.push_back(check_entry(
        "compactness does not imply compatibility",
        report["compact_without_compatibility"].dump() +
            " random gap fixtures; canonical compact-native fixture " +
            (report["canonical_gap_fixture"].get<bool>() ? "confirms"
                                                         : "missing"),
        0.0,
        report["canonical_gap_fixture"].get<bool>() &&
            report["compact_without_compatibility"].get<int>() >= 1));
    checks.push_back(check_entry(
        "fixture coverage",
        report["compatible_count"].dump() + " compatible, " +
            report["compact_count"].dump() + " compact",
        0.0, report["fixtures"].get<int>() >= property_count));
    finish("property", std::move(checks), property_opts);
  }

  return 2;  // unreachable with require_subcommand(1)
}
