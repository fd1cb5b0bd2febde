#include "nosig/scenario.hpp"

#include <algorithm>
#include <set>

namespace nosig {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out;
}

}  // namespace

EnumerationCapError::EnumerationCapError(BigInt required, std::size_t cap)
    : std::runtime_error("enumeration cap exceeded: " + required.str() +
                         " global assignments required, cap is " +
                         std::to_string(cap)),
      required_(std::move(required)),
      cap_(cap) {}

Scenario::Scenario(std::vector<std::string> measurements,
                   std::vector<std::vector<std::string>> cover,
                   std::vector<std::string> outcomes)
    : measurements_(std::move(measurements)), outcomes_(std::move(outcomes)) {
  {
    std::set<std::string> seen;
    for (const auto& m : measurements_) {
      if (!seen.insert(m).second) {
        throw std::invalid_argument("duplicate measurement label: " + m);
      }
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& o : outcomes_) {
      if (!seen.insert(o).second) {
        throw std::invalid_argument("duplicate outcome label: " + o);
      }
    }
  }
  cover_.reserve(cover.size());
  for (const auto& context : cover) {
    std::vector<int> ids;
    ids.reserve(context.size());
    for (const auto& label : context) {
      auto id = measurement_index(label);
      if (!id) {
        throw std::invalid_argument("context [" + join(context) +
                                    "] names unknown measurement: " + label);
      }
      ids.push_back(*id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw std::invalid_argument("context [" + join(context) +
                                  "] repeats a measurement");
    }
    cover_.push_back(std::move(ids));
  }
}

std::optional<int> Scenario::measurement_index(std::string_view label) const {
  for (std::size_t i = 0; i < measurements_.size(); ++i) {
    if (measurements_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> Scenario::outcome_index(std::string_view label) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> Scenario::context_index(std::span<const int> sorted_ids) const {
  for (std::size_t i = 0; i < cover_.size(); ++i) {
    if (cover_[i].size() == sorted_ids.size() &&
        std::equal(cover_[i].begin(), cover_[i].end(), sorted_ids.begin())) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

std::vector<std::string> Scenario::context_labels(int context) const {
  std::vector<std::string> out;
  for (int m : cover_.at(static_cast<std::size_t>(context))) {
    out.push_back(measurements_[static_cast<std::size_t>(m)]);
  }
  return out;
}

std::vector<std::string> validate(const Scenario& scenario) {
  std::vector<std::string> violations;
  const auto& cover = scenario.cover();

  if (scenario.outcome_count() < 2) {
    violations.push_back("outcome set has fewer than two elements");
  }
  if (cover.empty()) {
    violations.push_back("cover is empty");
  }
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (cover[i].empty()) {
      violations.push_back("context #" + std::to_string(i) + " is empty");
    }
  }
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (std::size_t j = 0; j < cover.size(); ++j) {
      if (i == j) continue;
      if (std::includes(cover[j].begin(), cover[j].end(), cover[i].begin(),
                        cover[i].end()) &&
          cover[i] != cover[j]) {
        violations.push_back(
            "cover is not an antichain: [" + join(scenario.context_labels(
                                                 static_cast<int>(i))) +
            "] is contained in [" +
            join(scenario.context_labels(static_cast<int>(j))) + "]");
      }
    }
  }
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (std::size_t j = i + 1; j < cover.size(); ++j) {
      if (cover[i] == cover[j]) {
        violations.push_back("context #" + std::to_string(i) +
                             " duplicates context #" + std::to_string(j));
      }
    }
  }
  for (int m = 0; m < scenario.measurement_count(); ++m) {
    bool covered = false;
    for (const auto& U : cover) {
      if (std::binary_search(U.begin(), U.end(), m)) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      violations.push_back("measurement " +
                           scenario.measurements()[static_cast<std::size_t>(m)] +
                           " appears in no context");
    }
  }
  return violations;
}

Section::Section(std::vector<std::pair<int, int>> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i - 1].first == entries_[i].first) {
      throw std::invalid_argument("section assigns measurement #" +
                                  std::to_string(entries_[i].first) + " twice");
    }
  }
}

std::vector<int> Section::domain() const {
  std::vector<int> out;
  out.reserve(entries_.size());
  for (const auto& [m, o] : entries_) out.push_back(m);
  return out;
}

std::optional<int> Section::outcome_for(int measurement) const {
  for (const auto& [m, o] : entries_) {
    if (m == measurement) return o;
  }
  return std::nullopt;
}

Section Section::restricted_to(std::span<const int> domain) const {
  std::vector<std::pair<int, int>> kept;
  for (const auto& e : entries_) {
    if (std::find(domain.begin(), domain.end(), e.first) != domain.end()) {
      kept.push_back(e);
    }
  }
  return Section(std::move(kept));
}

Section restriction(const GlobalAssignment& global, std::span<const int> domain) {
  std::vector<std::pair<int, int>> entries;
  entries.reserve(domain.size());
  for (int m : domain) {
    entries.emplace_back(m, global.outcomes.at(static_cast<std::size_t>(m)));
  }
  return Section(std::move(entries));
}

BigInt global_count(const Scenario& scenario) {
  BigInt total = 1;
  for (int i = 0; i < scenario.measurement_count(); ++i) {
    total *= scenario.outcome_count();
  }
  return total;
}

namespace {

std::size_t checked_global_count(const Scenario& scenario, std::size_t cap) {
  const BigInt total = global_count(scenario);
  if (total > BigInt(cap)) throw EnumerationCapError(total, cap);
  return static_cast<std::size_t>(total);
}

}  // namespace

std::vector<GlobalAssignment> enumerate_globals(const Scenario& scenario,
                                                std::size_t cap) {
  const std::size_t total = checked_global_count(scenario, cap);
  const int n = scenario.measurement_count();
  const int l = scenario.outcome_count();
  std::vector<GlobalAssignment> out;
  out.reserve(total);
  GlobalAssignment current{std::vector<int>(static_cast<std::size_t>(n), 0)};
  for (std::size_t k = 0; k < total; ++k) {
    out.push_back(current);
    for (int m = n - 1; m >= 0; --m) {  // last measurement varies fastest
      auto& digit = current.outcomes[static_cast<std::size_t>(m)];
      if (++digit < l) break;
      digit = 0;
    }
  }
  return out;
}

std::size_t global_index(const Scenario& scenario, const GlobalAssignment& g) {
  const int l = scenario.outcome_count();
  std::size_t idx = 0;
  for (int o : g.outcomes) {
    idx = idx * static_cast<std::size_t>(l) + static_cast<std::size_t>(o);
  }
  return idx;
}

GlobalAssignment global_at(const Scenario& scenario, std::size_t index) {
  const int n = scenario.measurement_count();
  const auto l = static_cast<std::size_t>(scenario.outcome_count());
  GlobalAssignment g{std::vector<int>(static_cast<std::size_t>(n), 0)};
  for (int m = n - 1; m >= 0; --m) {
    g.outcomes[static_cast<std::size_t>(m)] = static_cast<int>(index % l);
    index /= l;
  }
  return g;
}

std::vector<std::size_t> consistent_global_indices(const Scenario& scenario,
                                                   const Section& section,
                                                   std::size_t cap) {
  checked_global_count(scenario, cap);
  const int n = scenario.measurement_count();
  const int l = scenario.outcome_count();
  std::vector<int> free;  // measurements outside the section's domain
  std::vector<int> fixed(static_cast<std::size_t>(n), -1);
  for (const auto& [m, o] : section.entries()) {
    if (m < 0 || m >= n) {
      throw std::invalid_argument("section measurement index out of range");
    }
    fixed[static_cast<std::size_t>(m)] = o;
  }
  for (int m = 0; m < n; ++m) {
    if (fixed[static_cast<std::size_t>(m)] < 0) free.push_back(m);
  }

  std::vector<std::size_t> out;
  GlobalAssignment g{std::vector<int>(static_cast<std::size_t>(n), 0)};
  for (int m = 0; m < n; ++m) {
    if (fixed[static_cast<std::size_t>(m)] >= 0) {
      g.outcomes[static_cast<std::size_t>(m)] = fixed[static_cast<std::size_t>(m)];
    }
  }
  std::size_t combos = 1;
  for (std::size_t i = 0; i < free.size(); ++i) combos *= static_cast<std::size_t>(l);
  out.reserve(combos);
  for (std::size_t k = 0; k < combos; ++k) {
    out.push_back(global_index(scenario, g));
    for (auto it = free.rbegin(); it != free.rend(); ++it) {
      auto& digit = g.outcomes[static_cast<std::size_t>(*it)];
      if (++digit < l) break;
      digit = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GlobalAssignment> consistent_globals(const Scenario& scenario,
                                                 const Section& section,
                                                 std::size_t cap) {
  std::vector<GlobalAssignment> out;
  for (std::size_t idx : consistent_global_indices(scenario, section, cap)) {
    out.push_back(global_at(scenario, idx));
  }
  return out;
}

std::vector<std::vector<int>> partial_contexts(const Scenario& scenario) {
  std::set<std::vector<int>> sigma;
  for (const auto& context : scenario.cover()) {
    const std::size_t n = context.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<int> subset;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) subset.push_back(context[i]);
      }
      sigma.insert(std::move(subset));
    }
  }
  std::vector<std::vector<int>> out(sigma.begin(), sigma.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::size_t section_count(const Scenario& scenario, std::span<const int> domain) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    total *= static_cast<std::size_t>(scenario.outcome_count());
  }
  return total;
}

std::vector<Section> sections_on(const Scenario& scenario,
                                 std::span<const int> domain) {
  const int l = scenario.outcome_count();
  const std::size_t total = section_count(scenario, domain);
  std::vector<Section> out;
  out.reserve(total);
  std::vector<int> digits(domain.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<std::pair<int, int>> entries;
    entries.reserve(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) {
      entries.emplace_back(domain[i], digits[i]);
    }
    out.push_back(Section(std::move(entries)));
    for (std::size_t i = domain.size(); i-- > 0;) {
      if (++digits[i] < l) break;
      digits[i] = 0;
    }
  }
  return out;
}

std::size_t section_rank(const Scenario& scenario, const Section& section) {
  const auto l = static_cast<std::size_t>(scenario.outcome_count());
  std::size_t rank = 0;
  for (const auto& [m, o] : section.entries()) {
    rank = rank * l + static_cast<std::size_t>(o);
  }
  return rank;
}

Section section_at(const Scenario& scenario, std::span<const int> domain,
                   std::size_t rank) {
  const auto l = static_cast<std::size_t>(scenario.outcome_count());
  std::vector<std::pair<int, int>> entries(domain.size());
  for (std::size_t i = domain.size(); i-- > 0;) {
    entries[i] = {domain[i], static_cast<int>(rank % l)};
    rank /= l;
  }
  return Section(std::move(entries));
}

std::vector<Section> bounded_sections(const Scenario& scenario,
                                      std::span<const int> domain,
                                      int max_distinguished) {
  std::vector<Section> out;
  for (auto& s : sections_on(scenario, domain)) {
    int distinguished = 0;
    for (const auto& [m, o] : s.entries()) {
      if (o == 0) ++distinguished;
    }
    if (distinguished <= max_distinguished) out.push_back(std::move(s));
  }
  return out;
}

Section override_outcome(const Section& section, int measurement, int outcome) {
  auto entries = section.entries();
  for (auto& [m, o] : entries) {
    if (m == measurement) {
      o = outcome;
      return Section(std::move(entries));
    }
  }
  throw std::invalid_argument("override_outcome: measurement #" +
                              std::to_string(measurement) +
                              " is outside the section's domain");
}

EventIndex::EventIndex(const Scenario& scenario) {
  offsets_.reserve(scenario.cover().size());
  sizes_.reserve(scenario.cover().size());
  for (const auto& context : scenario.cover()) {
    offsets_.push_back(total_);
    std::size_t n = 1;
    for (std::size_t i = 0; i < context.size(); ++i) {
      n *= static_cast<std::size_t>(scenario.outcome_count());
    }
    sizes_.push_back(n);
    total_ += n;
  }
}

std::size_t EventIndex::index_of(int context, std::size_t rank) const {
  return offsets_.at(static_cast<std::size_t>(context)) + rank;
}

std::pair<int, std::size_t> EventIndex::context_and_rank(std::size_t event) const {
  for (std::size_t c = offsets_.size(); c-- > 0;) {
    if (event >= offsets_[c]) {
      return {static_cast<int>(c), event - offsets_[c]};
    }
  }
  throw std::out_of_range("event index out of range");
}

std::size_t EventIndex::sections_in(int context) const {
  return sizes_.at(static_cast<std::size_t>(context));
}

std::size_t EventIndex::offset_of(int context) const {
  return offsets_.at(static_cast<std::size_t>(context));
}

}  // namespace nosig
