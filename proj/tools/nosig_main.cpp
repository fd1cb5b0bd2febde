// nosig: decide no-signalling for empirical measurement tables and construct
// signed canonical hidden-variable realizations, exactly.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "nosig/analysis.hpp"
#include "nosig/generators.hpp"
#include "nosig/io.hpp"

namespace {

using nosig::OrderedJson;
using nosig::Rational;

constexpr int kExitSuccess = 0;
constexpr int kExitFailed = 1;   // property fails / infeasible
constexpr int kExitInput = 2;    // parse or validation error
constexpr int kExitCap = 3;      // enumeration cap exceeded

struct Output {
  std::string format = "human";
  std::ostream& out = std::cout;
};

std::string join_labels(const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& label : labels) {
    if (!out.empty()) out += ",";
    out += label;
  }
  return out;
}

std::string section_text(const nosig::Scenario& sc, const nosig::Section& s) {
  std::string out;
  for (const auto& [m, o] : s.entries()) {
    if (!out.empty()) out += " ";
    out += sc.measurements()[static_cast<std::size_t>(m)] + "=" +
           sc.outcomes()[static_cast<std::size_t>(o)];
  }
  return out.empty() ? "(empty)" : out;
}

std::string global_text(const nosig::Scenario& sc,
                        const nosig::GlobalAssignment& g) {
  std::string out;
  for (int m = 0; m < sc.measurement_count(); ++m) {
    if (!out.empty()) out += " ";
    out += sc.measurements()[static_cast<std::size_t>(m)] + "=" +
           sc.outcomes()[static_cast<std::size_t>(
               g.outcomes[static_cast<std::size_t>(m)])];
  }
  return out;
}

OrderedJson section_json(const nosig::Scenario& sc, const nosig::Section& s) {
  OrderedJson j = OrderedJson::object();
  for (const auto& [m, o] : s.entries()) {
    j[sc.measurements()[static_cast<std::size_t>(m)]] =
        sc.outcomes()[static_cast<std::size_t>(o)];
  }
  return j;
}

OrderedJson context_json(const nosig::Scenario& sc, int ctx) {
  OrderedJson j = OrderedJson::array();
  for (const auto& label : sc.context_labels(ctx)) j.push_back(label);
  return j;
}

// Machine reports carry the command echo, the scenario digest, the payload,
// and the exit status, in that fixed key order.
void emit_machine(const Output& output, const std::string& command,
                  const nosig::Scenario& scenario, OrderedJson result,
                  int exit_status) {
  OrderedJson doc;
  doc["command"] = command;
  doc["scenario_digest"] = nosig::scenario_digest(scenario);
  doc["result"] = std::move(result);
  doc["exit_status"] = exit_status;
  output.out << nosig::dump_document(doc);
}

const nosig::EmpiricalModel& require_empirical(const nosig::ParsedModel& model) {
  if (model.kind != nosig::ModelKind::kEmpirical) {
    throw nosig::ParseError("model kind mismatch: this command needs an "
                            "empirical model");
  }
  return *model.empirical;
}

// ---------------------------------------------------------------------------
// check-ns
// ---------------------------------------------------------------------------

int run_check_ns(const Output& output, const std::string& path,
                 std::size_t cap) {
  const nosig::ParsedModel parsed = nosig::load_model(path, cap);
  const nosig::EmpiricalModel& model = require_empirical(parsed);
  const nosig::NsReport report = nosig::check_no_signalling(model);
  const int status = report.is_no_signalling ? kExitSuccess : kExitFailed;
  const nosig::Scenario& sc = model.scenario();

  if (output.format == "machine") {
    OrderedJson result;
    result["no_signalling"] = report.is_no_signalling;
    OrderedJson rows = OrderedJson::array();
    for (const auto& v : report.violations) {
      OrderedJson row;
      row["context_a"] = context_json(sc, v.context_a);
      row["context_b"] = context_json(sc, v.context_b);
      row["section"] = section_json(sc, v.common);
      row["lhs"] = nosig::to_string(v.lhs);
      row["rhs"] = nosig::to_string(v.rhs);
      rows.push_back(std::move(row));
    }
    result["violations"] = std::move(rows);
    emit_machine(output, "check-ns", sc, std::move(result), status);
  } else {
    output.out << "scenario digest: " << nosig::scenario_digest(sc) << "\n";
    if (report.is_no_signalling) {
      output.out << "no-signalling: yes\n";
    } else {
      output.out << "no-signalling: NO (" << report.violations.size()
                 << " violated marginal equations)\n";
      for (const auto& v : report.violations) {
        output.out << "  {" << join_labels(sc.context_labels(v.context_a))
                   << "} vs {" << join_labels(sc.context_labels(v.context_b))
                   << "} at " << section_text(sc, v.common) << ": "
                   << nosig::to_string(v.lhs) << " != "
                   << nosig::to_string(v.rhs) << "\n";
      }
    }
  }
  return status;
}

// ---------------------------------------------------------------------------
// realize
// ---------------------------------------------------------------------------

int run_realize(const Output& output, const std::string& path,
                const std::string& method_name, bool require_nonneg,
                const std::string& out_path, std::size_t cap) {
  const nosig::ParsedModel parsed = nosig::load_model(path, cap);
  const nosig::EmpiricalModel& model = require_empirical(parsed);
  const nosig::Scenario& sc = model.scenario();

  nosig::RealizationResult result;
  std::string method_label;
  if (require_nonneg) {
    result = nosig::realize_nonneg(model, cap);
    method_label = "nonneg";
  } else if (method_name == "min-negativity") {
    result = nosig::realize_signed_li(model, nosig::RealizeMethod::kMinNegativity,
                                      cap);
    method_label = "min-negativity";
  } else {
    result = nosig::realize_signed_li(model, nosig::RealizeMethod::kSolveAny, cap);
    method_label = "any";
  }

  const bool realized = result.status == nosig::RealizeStatus::kRealized;
  const int status = realized ? kExitSuccess : kExitFailed;

  OrderedJson model_doc;
  if (realized) {
    const nosig::SchvModel assembled = nosig::assemble_product_model(
        sc, result.hidden_dist, result.context_dist, cap);
    model_doc = nosig::schv_to_json(assembled);
    if (!out_path.empty()) {
      nosig::write_text_file(out_path, nosig::dump_document(model_doc));
    }
  }

  if (output.format == "machine") {
    OrderedJson payload;
    payload["status"] = realized ? "realized" : "infeasible";
    payload["method"] = method_label;
    if (realized) {
      payload["negativity"] = nosig::to_string(result.negativity);
      payload["model"] = std::move(model_doc);
    }
    emit_machine(output, "realize", sc, std::move(payload), status);
  } else {
    output.out << "scenario digest: " << nosig::scenario_digest(sc) << "\n";
    output.out << "method: " << method_label << "\n";
    if (realized) {
      output.out << "realized: yes\n";
      output.out << "negativity: " << nosig::to_string(result.negativity)
                 << "\n";
      if (!out_path.empty()) {
        output.out << "model written to " << out_path << "\n";
      }
    } else if (require_nonneg) {
      output.out << "realized: no (no local hidden-variable model)\n";
    } else {
      output.out << "realized: no (the table is signalling)\n";
    }
  }
  return status;
}

// ---------------------------------------------------------------------------
// check-independence
// ---------------------------------------------------------------------------

OrderedJson witness_json(const nosig::Scenario& sc,
                         const nosig::GeneralHvModel* general,
                         const nosig::IndependenceWitness& witness) {
  OrderedJson j;
  if (const auto* w = std::get_if<nosig::ProductWitness>(&witness)) {
    j["type"] = "product-cell";
    j["global"] = global_text(sc, nosig::global_at(sc, w->global));
    j["context"] = context_json(sc, w->context);
    j["weight"] = nosig::to_string(w->actual);
    j["expected"] = nosig::to_string(w->expected);
  } else if (const auto* w = std::get_if<nosig::HiddenMassWitness>(&witness)) {
    const auto [ctx, rank] = general->events().context_and_rank(w->event);
    j["type"] = "null-lambda-mass";
    j["context"] = context_json(sc, ctx);
    j["section"] = section_json(sc, nosig::section_at(sc, sc.cover()[ctx], rank));
    j["lambda"] = general->hidden_values()[static_cast<std::size_t>(w->lambda)];
    j["weight"] = nosig::to_string(w->weight);
  } else if (const auto* w = std::get_if<nosig::ConditionalWitness>(&witness)) {
    j["type"] = "conditional-mismatch";
    j["context_a"] = context_json(sc, w->context_a);
    j["context_b"] = context_json(sc, w->context_b);
    j["section"] = section_json(sc, w->common);
    j["lambda"] = general->hidden_values()[static_cast<std::size_t>(w->lambda)];
    j["lhs"] = nosig::to_string(w->lhs);
    j["rhs"] = nosig::to_string(w->rhs);
  }
  return j;
}

std::string witness_text(const nosig::Scenario& sc,
                         const nosig::GeneralHvModel* general,
                         const nosig::IndependenceWitness& witness) {
  if (const auto* w = std::get_if<nosig::ProductWitness>(&witness)) {
    return "cell (" + global_text(sc, nosig::global_at(sc, w->global)) +
           "; {" + join_labels(sc.context_labels(w->context)) + "}) has weight " +
           nosig::to_string(w->actual) + ", product of marginals " +
           nosig::to_string(w->expected);
  }
  if (const auto* w = std::get_if<nosig::HiddenMassWitness>(&witness)) {
    const auto [ctx, rank] = general->events().context_and_rank(w->event);
    return "lambda " +
           general->hidden_values()[static_cast<std::size_t>(w->lambda)] +
           " has zero marginal but weight " + nosig::to_string(w->weight) +
           " at ({" + join_labels(sc.context_labels(ctx)) + "}; " +
           section_text(sc, nosig::section_at(sc, sc.cover()[ctx], rank)) + ")";
  }
  const auto& w = std::get<nosig::ConditionalWitness>(witness);
  return "given lambda " +
         general->hidden_values()[static_cast<std::size_t>(w.lambda)] +
         ", section " + section_text(sc, w.common) + " has probability " +
         nosig::to_string(w.lhs) + " under {" +
         join_labels(sc.context_labels(w.context_a)) + "} but " +
         nosig::to_string(w.rhs) + " under {" +
         join_labels(sc.context_labels(w.context_b)) + "}";
}

int run_check_independence(const Output& output, const std::string& path,
                           const std::string& which, std::size_t cap) {
  const nosig::ParsedModel parsed = nosig::load_model(path, cap);
  if (parsed.kind == nosig::ModelKind::kEmpirical) {
    throw nosig::ParseError(
        "model kind mismatch: independence checks need an schv or general "
        "model");
  }
  const bool want_lambda = which == "lambda" || which == "both";
  const bool want_parameter = which == "parameter" || which == "both";

  // Parameter-Independence is a statement about general models; an schv
  // model is checked through its canonical embedding.
  std::optional<nosig::GeneralHvModel> embedded;
  const nosig::GeneralHvModel* general = nullptr;
  if (parsed.kind == nosig::ModelKind::kGeneral) {
    general = &*parsed.general;
  } else if (want_parameter) {
    embedded = nosig::embed_canonical(*parsed.schv, cap);
    general = &*embedded;
  }
  const nosig::Scenario& sc = parsed.scenario();

  struct CheckRow {
    std::string which;
    nosig::IndependenceReport report;
    bool embedded = false;
  };
  std::vector<CheckRow> rows;
  if (want_lambda) {
    if (parsed.kind == nosig::ModelKind::kSchv) {
      rows.push_back({"lambda", nosig::check_lambda_independence(*parsed.schv),
                      false});
    } else {
      rows.push_back({"lambda", nosig::check_lambda_independence(*general),
                      false});
    }
  }
  if (want_parameter) {
    rows.push_back({"parameter", nosig::check_parameter_independence(*general),
                    parsed.kind == nosig::ModelKind::kSchv});
  }

  bool all_hold = true;
  for (const auto& row : rows) all_hold = all_hold && row.report.holds;
  const int status = all_hold ? kExitSuccess : kExitFailed;

  if (output.format == "machine") {
    OrderedJson checks = OrderedJson::array();
    for (const auto& row : rows) {
      OrderedJson r;
      r["which"] = row.which;
      if (row.embedded) r["via"] = "canonical-embedding";
      r["holds"] = row.report.holds;
      if (row.report.witness) {
        r["witness"] = witness_json(sc, general, *row.report.witness);
      }
      if (row.which == "parameter") {
        r["vacuous_conditionals"] = row.report.vacuous.size();
      }
      checks.push_back(std::move(r));
    }
    OrderedJson result;
    result["checks"] = std::move(checks);
    emit_machine(output, "check-independence", sc, std::move(result), status);
  } else {
    output.out << "scenario digest: " << nosig::scenario_digest(sc) << "\n";
    for (const auto& row : rows) {
      output.out << row.which << "-independence"
                 << (row.embedded ? " (canonical embedding)" : "") << ": "
                 << (row.report.holds ? "holds" : "FAILS") << "\n";
      if (row.report.witness) {
        output.out << "  " << witness_text(sc, general, *row.report.witness)
                   << "\n";
      }
      if (row.which == "parameter" && !row.report.vacuous.empty()) {
        output.out << "  (" << row.report.vacuous.size()
                   << " conditionals undefined, skipped)\n";
      }
    }
  }
  return status;
}

// ---------------------------------------------------------------------------
// dimension
// ---------------------------------------------------------------------------

int run_dimension(const Output& output, const std::string& path,
                  std::size_t cap) {
  const nosig::Scenario sc = nosig::load_scenario(path);
  const nosig::DimensionReport report = nosig::ns_dimension(sc, cap);
  const int status = report.consistent() ? kExitSuccess : kExitFailed;

  if (output.format == "machine") {
    OrderedJson result;
    result["combinatorial"] = report.combinatorial;
    result["rank"] = report.rank;
    result["basis_rank"] = report.basis_rank;
    result["consistent"] = report.consistent();
    emit_machine(output, "dimension", sc, std::move(result), status);
  } else {
    output.out << "scenario digest: " << nosig::scenario_digest(sc) << "\n";
    output.out << "D (counting formula): " << report.combinatorial << "\n";
    output.out << "rank of incidence map: " << report.rank << "\n";
    output.out << "distinguished basis rank: " << report.basis_rank << "\n";
    output.out << (report.consistent() ? "PASS" : "FAIL") << "\n";
  }
  return status;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

int run_generate(const Output& output, const std::string& name,
                 int parties, int settings, int outcomes, std::uint64_t seed,
                 bool no_perturb, const std::string& scenario_path,
                 const std::string& out_path, std::size_t cap) {
  const auto scenario_arg = [&]() -> nosig::Scenario {
    if (scenario_path.empty()) return nosig::bell(2, 2, 2);
    return nosig::load_scenario(scenario_path);
  };

  OrderedJson doc;
  nosig::Scenario digest_scenario = nosig::bell(2, 2, 2);
  if (name == "bell") {
    const nosig::Scenario sc = nosig::bell(parties, settings, outcomes);
    digest_scenario = sc;
    doc = nosig::scenario_to_json(sc);
  } else if (name == "triangle") {
    const nosig::Scenario sc = nosig::triangle();
    digest_scenario = sc;
    doc = nosig::scenario_to_json(sc);
  } else if (name == "pr-box") {
    const nosig::EmpiricalModel model = nosig::pr_box();
    digest_scenario = model.scenario();
    doc = nosig::empirical_to_json(model);
  } else if (name == "triangle-anticorrelated") {
    const nosig::EmpiricalModel model = nosig::triangle_anticorrelated();
    digest_scenario = model.scenario();
    doc = nosig::empirical_to_json(model);
  } else if (name == "section3-counterexample") {
    const nosig::GeneralHvModel model = nosig::section3_counterexample();
    digest_scenario = model.scenario();
    doc = nosig::general_to_json(model);
  } else if (name == "random-ns") {
    const nosig::Scenario sc = scenario_arg();
    digest_scenario = sc;
    doc = nosig::empirical_to_json(
        nosig::random_ns_model(sc, seed, !no_perturb, cap));
  } else if (name == "random-signalling") {
    const nosig::Scenario sc = scenario_arg();
    digest_scenario = sc;
    doc = nosig::empirical_to_json(
        nosig::random_signalling_model(sc, seed, cap));
  } else if (name == "random-schv") {
    const nosig::Scenario sc = scenario_arg();
    digest_scenario = sc;
    doc = nosig::schv_to_json(nosig::random_schv_model(sc, seed, cap));
  } else {
    throw nosig::ParseError(
        "unknown generator \"" + name +
        "\"; registered: bell, triangle, pr-box, triangle-anticorrelated, "
        "section3-counterexample, random-ns, random-signalling, random-schv");
  }

  const std::string text = nosig::dump_document(doc);
  if (!out_path.empty()) {
    nosig::write_text_file(out_path, text);
  }

  if (output.format == "machine") {
    OrderedJson result;
    result["generator"] = name;
    if (out_path.empty()) {
      result["document"] = std::move(doc);
    } else {
      result["written"] = out_path;
    }
    emit_machine(output, "generate", digest_scenario, std::move(result),
                 kExitSuccess);
  } else if (out_path.empty()) {
    output.out << text;
  } else {
    output.out << "written to " << out_path << "\n";
  }
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact no-signalling analysis and signed hidden-variable realization "
      "for empirical measurement tables"};
  app.require_subcommand(1);

  Output output;
  std::size_t cap = nosig::kDefaultEnumerationCap;
  app.add_option("--format", output.format, "Report format")
      ->check(CLI::IsMember({"human", "machine"}))
      ->capture_default_str();
  app.add_option("--enumeration-cap", cap,
                 "Largest global-assignment count that will be enumerated")
      ->capture_default_str();

  auto* check_ns = app.add_subcommand(
      "check-ns", "Decide no-signalling for an empirical model");
  std::string check_ns_path;
  check_ns->add_option("model", check_ns_path, "Empirical ModelFile")
      ->required();

  auto* realize = app.add_subcommand(
      "realize",
      "Construct a Lambda-Independent signed realization of an empirical "
      "model");
  std::string realize_path;
  std::string realize_method = "any";
  bool require_nonneg = false;
  std::string realize_out;
  realize->add_option("model", realize_path, "Empirical ModelFile")->required();
  realize->add_option("--method", realize_method, "Solution selection")
      ->check(CLI::IsMember({"any", "min-negativity"}))
      ->capture_default_str();
  realize->add_flag("--require-nonneg", require_nonneg,
                    "Demand a nonnegative (local) realization");
  realize->add_option("--out", realize_out, "Write the schv ModelFile here");

  auto* check_independence = app.add_subcommand(
      "check-independence",
      "Check Lambda-Independence / Parameter-Independence of a "
      "hidden-variable model");
  std::string independence_path;
  std::string which = "both";
  check_independence
      ->add_option("model", independence_path, "schv or general ModelFile")
      ->required();
  check_independence->add_option("--which", which, "Which independence")
      ->check(CLI::IsMember({"lambda", "parameter", "both"}))
      ->capture_default_str();

  auto* dimension = app.add_subcommand(
      "dimension", "Dimension of the no-signalling span of a scenario");
  std::string dimension_path;
  dimension->add_option("scenario", dimension_path, "ScenarioFile")->required();

  auto* generate =
      app.add_subcommand("generate", "Emit a built-in scenario or model");
  std::string generator_name;
  int parties = 2;
  int settings = 2;
  int outcomes = 2;
  std::uint64_t seed = 0;
  bool no_perturb = false;
  std::string scenario_path;
  std::string generate_out;
  generate->add_option("name", generator_name, "Generator name")->required();
  generate->add_option("--parties", parties)->capture_default_str();
  generate->add_option("--settings", settings)->capture_default_str();
  generate->add_option("--outcomes", outcomes)->capture_default_str();
  generate->add_option("--seed", seed)->capture_default_str();
  generate->add_flag("--no-perturb", no_perturb,
                     "random-ns: plain convex mixture (always local)");
  generate->add_option("--scenario", scenario_path,
                       "ScenarioFile for the random generators "
                       "(default: bell 2 2 2)");
  generate->add_option("--out", generate_out, "Write the document here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitInput;
  }

  try {
    if (app.got_subcommand(check_ns)) {
      return run_check_ns(output, check_ns_path, cap);
    }
    if (app.got_subcommand(realize)) {
      return run_realize(output, realize_path, realize_method, require_nonneg,
                         realize_out, cap);
    }
    if (app.got_subcommand(check_independence)) {
      return run_check_independence(output, independence_path, which, cap);
    }
    if (app.got_subcommand(dimension)) {
      return run_dimension(output, dimension_path, cap);
    }
    if (app.got_subcommand(generate)) {
      return run_generate(output, generator_name, parties, settings, outcomes,
                          seed, no_perturb, scenario_path, generate_out, cap);
    }
  } catch (const nosig::EnumerationCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const nosig::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nosig::UnsupportedScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
