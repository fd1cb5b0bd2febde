#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nosig/models.hpp"
#include "nosig/scenario.hpp"

namespace nosig {

using OrderedJson = nlohmann::ordered_json;

// Any malformed input: JSON syntax, missing keys, unknown labels, weight
// strings that are not canonical rationals, model invariant failures. The
// message carries the offending location (byte offset or entry index).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Scenario documents
// ---------------------------------------------------------------------------

OrderedJson scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const OrderedJson& j);

// ---------------------------------------------------------------------------
// Model documents
// ---------------------------------------------------------------------------

enum class ModelKind { kEmpirical, kSchv, kGeneral };

// Exactly one member is engaged, matching `kind`.
struct ParsedModel {
  ModelKind kind = ModelKind::kEmpirical;
  std::optional<EmpiricalModel> empirical;
  std::optional<SchvModel> schv;
  std::optional<GeneralHvModel> general;

  const Scenario& scenario() const;
};

// Emitters inline the scenario, write weights as canonical rational strings,
// and omit zero entries. Entry order follows the model's flat indexing, so
// emission is deterministic.
OrderedJson empirical_to_json(const EmpiricalModel& model);
OrderedJson schv_to_json(const SchvModel& model);
OrderedJson general_to_json(const GeneralHvModel& model);

// `base_dir` resolves a scenario given as a path string instead of an inline
// object.
ParsedModel model_from_json(const OrderedJson& j,
                            const std::filesystem::path& base_dir,
                            std::size_t cap = kDefaultEnumerationCap);

Scenario load_scenario(const std::filesystem::path& path);
ParsedModel load_model(const std::filesystem::path& path,
                       std::size_t cap = kDefaultEnumerationCap);

// ---------------------------------------------------------------------------
// Canonical bytes
// ---------------------------------------------------------------------------

// FNV-1a 64 over the canonical scenario document, 16 hex digits. Stable
// identifier quoted in reports.
std::string scenario_digest(const Scenario& scenario);

// Canonical on-disk form: two-space indent plus trailing newline.
std::string dump_document(const OrderedJson& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace nosig
