#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nosig/rational.hpp"

namespace nosig {

// Global assignments are enumerated explicitly, so their count is capped.
inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

class EnumerationCapError : public std::runtime_error {
 public:
  EnumerationCapError(BigInt required, std::size_t cap);
  const BigInt& required() const { return required_; }
  std::size_t cap() const { return cap_; }

 private:
  BigInt required_;
  std::size_t cap_;
};

// A measurement cover: labels X, a family of contexts (subsets of X that can
// be measured jointly), and an ordered outcome set O. Labels are opaque
// strings; all ordering (and hence all matrix indexing) follows declaration
// order. The first outcome plays the distinguished role in the
// bounded-section machinery.
class Scenario {
 public:
  Scenario(std::vector<std::string> measurements,
           std::vector<std::vector<std::string>> cover,
           std::vector<std::string> outcomes);

  bool operator==(const Scenario&) const = default;

  const std::vector<std::string>& measurements() const { return measurements_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  // Contexts as ascending measurement indices.
  const std::vector<std::vector<int>>& cover() const { return cover_; }

  int measurement_count() const { return static_cast<int>(measurements_.size()); }
  int outcome_count() const { return static_cast<int>(outcomes_.size()); }
  int context_count() const { return static_cast<int>(cover_.size()); }

  std::optional<int> measurement_index(std::string_view label) const;
  std::optional<int> outcome_index(std::string_view label) const;
  // Matches a context by set equality; `sorted_ids` must be ascending.
  std::optional<int> context_index(std::span<const int> sorted_ids) const;

  std::vector<std::string> context_labels(int context) const;

 private:
  std::vector<std::string> measurements_;
  std::vector<std::vector<int>> cover_;
  std::vector<std::string> outcomes_;
};

// Reports every violated scenario invariant (antichain cover, nonempty
// contexts, full coverage of the measurement set, at least two outcomes).
// An empty result means the scenario is well-formed.
std::vector<std::string> validate(const Scenario& scenario);

// Partial assignment of outcome indices to measurement indices; entries are
// kept sorted by measurement.
class Section {
 public:
  Section() = default;
  explicit Section(std::vector<std::pair<int, int>> entries);

  const std::vector<std::pair<int, int>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::vector<int> domain() const;
  std::optional<int> outcome_for(int measurement) const;
  Section restricted_to(std::span<const int> domain) const;

  bool operator==(const Section&) const = default;

 private:
  std::vector<std::pair<int, int>> entries_;
};

// Total assignment of outcomes to every measurement.
struct GlobalAssignment {
  std::vector<int> outcomes;  // outcomes[m] = outcome index chosen at m

  bool operator==(const GlobalAssignment&) const = default;
};

Section restriction(const GlobalAssignment& global, std::span<const int> domain);

struct AtomicEvent {
  int context = -1;
  Section section;  // domain equals the context

  bool operator==(const AtomicEvent&) const = default;
};

BigInt global_count(const Scenario& scenario);  // l^|X|, exact

// All global assignments, ordered lexicographically by (measurement order,
// outcome order): the last measurement varies fastest. This ordering defines
// the column indexing of the incidence map.
std::vector<GlobalAssignment> enumerate_globals(
    const Scenario& scenario, std::size_t cap = kDefaultEnumerationCap);

std::size_t global_index(const Scenario& scenario, const GlobalAssignment& g);
GlobalAssignment global_at(const Scenario& scenario, std::size_t index);

// Global assignments consistent with a section (agreeing on its domain).
std::vector<GlobalAssignment> consistent_globals(
    const Scenario& scenario, const Section& section,
    std::size_t cap = kDefaultEnumerationCap);
std::vector<std::size_t> consistent_global_indices(
    const Scenario& scenario, const Section& section,
    std::size_t cap = kDefaultEnumerationCap);

// Every subset of a cover context, deduplicated, ordered by (size, then
// lexicographic on the index lists). Downward closed by construction.
std::vector<std::vector<int>> partial_contexts(const Scenario& scenario);

// All sections on `domain` (ascending measurement indices), in the same
// lexicographic order used for globals.
std::vector<Section> sections_on(const Scenario& scenario,
                                 std::span<const int> domain);
std::size_t section_count(const Scenario& scenario, std::span<const int> domain);
std::size_t section_rank(const Scenario& scenario, const Section& section);
Section section_at(const Scenario& scenario, std::span<const int> domain,
                   std::size_t rank);

// Sections on `domain` assigning the distinguished (first) outcome to at
// most `max_distinguished` measurements.
std::vector<Section> bounded_sections(const Scenario& scenario,
                                      std::span<const int> domain,
                                      int max_distinguished);

// Copy of `section` with the entry at `measurement` replaced by `outcome`.
// The measurement must already lie in the section's domain.
Section override_outcome(const Section& section, int measurement, int outcome);

// Atomic events ordered by (context index, section rank within context).
// This is the row indexing of the incidence map and the carrier indexing of
// empirical tables.
class EventIndex {
 public:
  explicit EventIndex(const Scenario& scenario);

  std::size_t count() const { return total_; }
  std::size_t index_of(int context, std::size_t section_rank) const;
  std::pair<int, std::size_t> context_and_rank(std::size_t event) const;
  std::size_t sections_in(int context) const;
  std::size_t offset_of(int context) const;

 private:
  std::vector<std::size_t> offsets_;  // per context
  std::vector<std::size_t> sizes_;
  std::size_t total_ = 0;
};

}  // namespace nosig
