#include "nosig/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>
#include <vector>

namespace nosig {

namespace {

const OrderedJson& require_key(const OrderedJson& j, const char* key,
                               const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(where + ": missing key \"" + key + "\"");
  }
  return *it;
}

std::vector<std::string> string_list(const OrderedJson& j,
                                     const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) {
      throw ParseError(where + ": expected strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

int resolve_measurement(const Scenario& sc, const std::string& label,
                        const std::string& where) {
  const auto idx = sc.measurement_index(label);
  if (!idx) throw ParseError(where + ": unknown measurement \"" + label + "\"");
  return *idx;
}

int resolve_outcome(const Scenario& sc, const std::string& label,
                    const std::string& where) {
  const auto idx = sc.outcome_index(label);
  if (!idx) throw ParseError(where + ": unknown outcome \"" + label + "\"");
  return *idx;
}

int resolve_context(const Scenario& sc, const OrderedJson& j,
                    const std::string& where) {
  std::vector<int> ids;
  for (const auto& label : string_list(j, where)) {
    ids.push_back(resolve_measurement(sc, label, where));
  }
  std::sort(ids.begin(), ids.end());
  const auto ctx = sc.context_index(ids);
  if (!ctx) throw ParseError(where + ": not a context of the cover");
  return *ctx;
}

// Section object {measurement: outcome}; must assign exactly the given
// domain.
Section resolve_section(const Scenario& sc, const OrderedJson& j,
                        const std::vector<int>& domain,
                        const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  std::vector<std::pair<int, int>> entries;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) {
      throw ParseError(where + ": outcomes must be strings");
    }
    entries.emplace_back(resolve_measurement(sc, key, where),
                         resolve_outcome(sc, value.get<std::string>(), where));
  }
  Section section;
  try {
    section = Section(std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (section.domain() != domain) {
    throw ParseError(where + ": section domain does not match its context");
  }
  return section;
}

GlobalAssignment resolve_global(const Scenario& sc, const OrderedJson& j,
                                const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  std::vector<int> outcomes(
      static_cast<std::size_t>(sc.measurement_count()), -1);
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) {
      throw ParseError(where + ": outcomes must be strings");
    }
    const int m = resolve_measurement(sc, key, where);
    if (outcomes[static_cast<std::size_t>(m)] != -1) {
      throw ParseError(where + ": repeated measurement \"" + key + "\"");
    }
    outcomes[static_cast<std::size_t>(m)] =
        resolve_outcome(sc, value.get<std::string>(), where);
  }
  for (std::size_t m = 0; m < outcomes.size(); ++m) {
    if (outcomes[m] == -1) {
      throw ParseError(where + ": global assignment misses \"" +
                       sc.measurements()[m] + "\"");
    }
  }
  return GlobalAssignment{std::move(outcomes)};
}

Rational resolve_weight(const OrderedJson& j, const std::string& where) {
  if (!j.is_string()) {
    throw ParseError(where +
                     ": weights must be rational strings like \"1/2\"");
  }
  const auto value = parse_rational(j.get<std::string>());
  if (!value) {
    throw ParseError(where + ": \"" + j.get<std::string>() +
                     "\" is not a canonical rational");
  }
  return *value;
}

OrderedJson section_to_json(const Scenario& sc, const Section& section) {
  OrderedJson j = OrderedJson::object();
  for (const auto& [m, o] : section.entries()) {
    j[sc.measurements()[static_cast<std::size_t>(m)]] =
        sc.outcomes()[static_cast<std::size_t>(o)];
  }
  return j;
}

OrderedJson context_to_json(const Scenario& sc, int ctx) {
  OrderedJson j = OrderedJson::array();
  for (const std::string& label : sc.context_labels(ctx)) j.push_back(label);
  return j;
}

}  // namespace

OrderedJson scenario_to_json(const Scenario& scenario) {
  OrderedJson j;
  j["measurements"] = scenario.measurements();
  OrderedJson cover = OrderedJson::array();
  for (int ctx = 0; ctx < scenario.context_count(); ++ctx) {
    cover.push_back(context_to_json(scenario, ctx));
  }
  j["cover"] = std::move(cover);
  j["outcomes"] = scenario.outcomes();
  return j;
}

Scenario scenario_from_json(const OrderedJson& j) {
  if (!j.is_object()) throw ParseError("scenario: expected an object");
  const auto measurements =
      string_list(require_key(j, "measurements", "scenario"), "scenario.measurements");
  const auto& cover_json = require_key(j, "cover", "scenario");
  if (!cover_json.is_array()) {
    throw ParseError("scenario.cover: expected an array");
  }
  std::vector<std::vector<std::string>> cover;
  for (std::size_t i = 0; i < cover_json.size(); ++i) {
    cover.push_back(string_list(cover_json[i],
                                "scenario.cover[" + std::to_string(i) + "]"));
  }
  const auto outcomes =
      string_list(require_key(j, "outcomes", "scenario"), "scenario.outcomes");

  Scenario scenario = [&] {
    try {
      return Scenario(measurements, cover, outcomes);
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("scenario: ") + e.what());
    }
  }();
  const auto violations = validate(scenario);
  if (!violations.empty()) {
    throw ParseError("scenario: " + violations.front());
  }
  return scenario;
}

const Scenario& ParsedModel::scenario() const {
  switch (kind) {
    case ModelKind::kEmpirical: return empirical->scenario();
    case ModelKind::kSchv: return schv->scenario();
    case ModelKind::kGeneral: return general->scenario();
  }
  throw std::logic_error("ParsedModel: bad kind");
}

OrderedJson empirical_to_json(const EmpiricalModel& model) {
  const Scenario& sc = model.scenario();
  OrderedJson j;
  j["scenario"] = scenario_to_json(sc);
  j["kind"] = "empirical";
  OrderedJson entries = OrderedJson::array();
  for (std::size_t e = 0; e < model.events().count(); ++e) {
    if (model.weight(e) == 0) continue;
    const auto [ctx, rank] = model.events().context_and_rank(e);
    OrderedJson entry;
    entry["context"] = context_to_json(sc, ctx);
    entry["section"] =
        section_to_json(sc, section_at(sc, sc.cover()[ctx], rank));
    entry["weight"] = to_string(model.weight(e));
    entries.push_back(std::move(entry));
  }
  j["entries"] = std::move(entries);
  return j;
}

OrderedJson schv_to_json(const SchvModel& model) {
  const Scenario& sc = model.scenario();
  OrderedJson j;
  j["scenario"] = scenario_to_json(sc);
  j["kind"] = "schv";
  OrderedJson entries = OrderedJson::array();
  for (std::size_t g = 0; g < model.global_count(); ++g) {
    const GlobalAssignment assignment = global_at(sc, g);
    for (int ctx = 0; ctx < sc.context_count(); ++ctx) {
      if (model.weight(g, ctx) == 0) continue;
      OrderedJson global = OrderedJson::object();
      for (int m = 0; m < sc.measurement_count(); ++m) {
        global[sc.measurements()[static_cast<std::size_t>(m)]] =
            sc.outcomes()[static_cast<std::size_t>(
                assignment.outcomes[static_cast<std::size_t>(m)])];
      }
      OrderedJson entry;
      entry["global"] = std::move(global);
      entry["context"] = context_to_json(sc, ctx);
      entry["weight"] = to_string(model.weight(g, ctx));
      entries.push_back(std::move(entry));
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

OrderedJson general_to_json(const GeneralHvModel& model) {
  const Scenario& sc = model.scenario();
  OrderedJson j;
  j["scenario"] = scenario_to_json(sc);
  j["kind"] = "general";
  j["hidden"] = model.hidden_values();
  OrderedJson entries = OrderedJson::array();
  for (std::size_t e = 0; e < model.events().count(); ++e) {
    const auto [ctx, rank] = model.events().context_and_rank(e);
    for (int lam = 0; lam < model.hidden_count(); ++lam) {
      if (model.weight(e, lam) == 0) continue;
      OrderedJson entry;
      entry["context"] = context_to_json(sc, ctx);
      entry["section"] =
          section_to_json(sc, section_at(sc, sc.cover()[ctx], rank));
      entry["lambda"] = model.hidden_values()[static_cast<std::size_t>(lam)];
      entry["weight"] = to_string(model.weight(e, lam));
      entries.push_back(std::move(entry));
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

ParsedModel model_from_json(const OrderedJson& j,
                            const std::filesystem::path& base_dir,
                            std::size_t cap) {
  if (!j.is_object()) throw ParseError("model: expected an object");
  const auto& scenario_json = require_key(j, "scenario", "model");
  Scenario scenario = [&] {
    if (scenario_json.is_string()) {
      return load_scenario(base_dir / scenario_json.get<std::string>());
    }
    return scenario_from_json(scenario_json);
  }();

  const auto& kind_json = require_key(j, "kind", "model");
  if (!kind_json.is_string()) throw ParseError("model.kind: expected a string");
  const std::string kind = kind_json.get<std::string>();

  const auto& entries = require_key(j, "entries", "model");
  if (!entries.is_array()) throw ParseError("model.entries: expected an array");

  const EventIndex events(scenario);
  const auto entry_name = [](std::size_t i) {
    return "entries[" + std::to_string(i) + "]";
  };

  ParsedModel parsed;
  try {
    if (kind == "empirical") {
      parsed.kind = ModelKind::kEmpirical;
      Vec table = Vec::Zero(static_cast<Index>(events.count()));
      std::vector<bool> seen(events.count(), false);
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string where = entry_name(i);
        const auto& entry = entries[i];
        const int ctx =
            resolve_context(scenario, require_key(entry, "context", where), where);
        const Section section =
            resolve_section(scenario, require_key(entry, "section", where),
                            scenario.cover()[ctx], where);
        const std::size_t e =
            events.index_of(ctx, section_rank(scenario, section));
        if (seen[e]) throw ParseError(where + ": duplicate event");
        seen[e] = true;
        table(static_cast<Index>(e)) =
            resolve_weight(require_key(entry, "weight", where), where);
      }
      parsed.empirical.emplace(std::move(scenario), std::move(table));
    } else if (kind == "schv") {
      parsed.kind = ModelKind::kSchv;
      const BigInt count = global_count(scenario);
      if (count > BigInt(cap)) {
        throw EnumerationCapError(count, cap);
      }
      const std::size_t globals = count.convert_to<std::size_t>();
      const std::size_t contexts =
          static_cast<std::size_t>(scenario.context_count());
      Vec weights = Vec::Zero(static_cast<Index>(globals * contexts));
      std::vector<bool> seen(globals * contexts, false);
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string where = entry_name(i);
        const auto& entry = entries[i];
        const GlobalAssignment g =
            resolve_global(scenario, require_key(entry, "global", where), where);
        const int ctx =
            resolve_context(scenario, require_key(entry, "context", where), where);
        const std::size_t flat =
            global_index(scenario, g) * contexts + static_cast<std::size_t>(ctx);
        if (seen[flat]) throw ParseError(where + ": duplicate cell");
        seen[flat] = true;
        weights(static_cast<Index>(flat)) =
            resolve_weight(require_key(entry, "weight", where), where);
      }
      parsed.schv.emplace(std::move(scenario), std::move(weights), cap);
    } else if (kind == "general") {
      parsed.kind = ModelKind::kGeneral;
      const auto hidden =
          string_list(require_key(j, "hidden", "model"), "model.hidden");
      Vec weights =
          Vec::Zero(static_cast<Index>(events.count() * hidden.size()));
      std::vector<bool> seen(events.count() * hidden.size(), false);
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string where = entry_name(i);
        const auto& entry = entries[i];
        const int ctx =
            resolve_context(scenario, require_key(entry, "context", where), where);
        const Section section =
            resolve_section(scenario, require_key(entry, "section", where),
                            scenario.cover()[ctx], where);
        const auto& lambda_json = require_key(entry, "lambda", where);
        if (!lambda_json.is_string()) {
          throw ParseError(where + ": lambda must be a string");
        }
        const auto lam = std::find(hidden.begin(), hidden.end(),
                                   lambda_json.get<std::string>());
        if (lam == hidden.end()) {
          throw ParseError(where + ": unknown lambda \"" +
                           lambda_json.get<std::string>() + "\"");
        }
        const std::size_t flat =
            events.index_of(ctx, section_rank(scenario, section)) *
                hidden.size() +
            static_cast<std::size_t>(lam - hidden.begin());
        if (seen[flat]) throw ParseError(where + ": duplicate cell");
        seen[flat] = true;
        weights(static_cast<Index>(flat)) =
            resolve_weight(require_key(entry, "weight", where), where);
      }
      parsed.general.emplace(std::move(scenario), hidden, std::move(weights));
    } else {
      throw ParseError("model.kind: \"" + kind +
                       "\" is not one of empirical, schv, general");
    }
  } catch (const std::invalid_argument& e) {
    // Model invariant failures (mass, nonnegativity) surface as parse errors
    // so the CLI can report them uniformly.
    throw ParseError(std::string("model: ") + e.what());
  }
  return parsed;
}

Scenario load_scenario(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ParsedModel load_model(const std::filesystem::path& path, std::size_t cap) {
  const std::string text = read_text_file(path);
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return model_from_json(j, path.parent_path(), cap);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string scenario_digest(const Scenario& scenario) {
  const std::string bytes = scenario_to_json(scenario).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::string dump_document(const OrderedJson& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace nosig
