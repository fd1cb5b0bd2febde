#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nosig/dense.hpp"
#include "nosig/scenario.hpp"

namespace nosig {

// Finite-support signed measure with total mass exactly 1. The carrier is an
// indexed set owned by the model that holds the distribution (atomic events,
// global assignments, contexts, ...).
class SignedDist {
 public:
  explicit SignedDist(Vec weights);

  const Vec& weights() const { return weights_; }
  Index size() const { return weights_.size(); }
  const Rational& operator()(Index i) const { return weights_(i); }

  bool nonnegative() const;
  Rational negativity() const;  // total negative mass

 private:
  Vec weights_;
};

Rational total_mass(const Vec& weights);
Rational negativity(const Vec& weights);
bool is_nonnegative(const Vec& weights);

// Probability table over atomic events: nonnegative, mass one, and every
// context carries positive mass (so conditionals are always defined).
class EmpiricalModel {
 public:
  EmpiricalModel(Scenario scenario, Vec table);

  const Scenario& scenario() const { return scenario_; }
  const EventIndex& events() const { return events_; }
  const Vec& table() const { return table_.weights(); }

  const Rational& weight(std::size_t event) const;
  const Rational& weight(int context, std::size_t section_rank) const;
  Rational context_mass(int context) const;  // e(U)

  // Conditional distribution over the sections of one context; sums to 1.
  Vec conditional(int context) const;
  // All conditionals as one vector over atomic events (the model's point in
  // table space, with context weights divided out).
  Vec conditional_vector() const;

  bool operator==(const EmpiricalModel& other) const;

 private:
  Scenario scenario_;
  EventIndex events_;
  SignedDist table_;
};

// Signed measure over (global assignment, context) pairs. Flat index is
// global_index * context_count + context.
class SchvModel {
 public:
  SchvModel(Scenario scenario, Vec weights,
            std::size_t cap = kDefaultEnumerationCap);

  const Scenario& scenario() const { return scenario_; }
  const Vec& weights() const { return weights_.weights(); }
  std::size_t global_count() const { return globals_; }

  const Rational& weight(std::size_t global, int context) const;
  std::size_t flat_index(std::size_t global, int context) const;

 private:
  Scenario scenario_;
  std::size_t globals_;
  SignedDist weights_;
};

// Signed measure over (atomic event, hidden value) pairs, for an explicit
// ordered hidden set. Flat index is event_index * hidden_count + lambda.
class GeneralHvModel {
 public:
  GeneralHvModel(Scenario scenario, std::vector<std::string> hidden_values,
                 Vec weights);

  const Scenario& scenario() const { return scenario_; }
  const EventIndex& events() const { return events_; }
  const std::vector<std::string>& hidden_values() const { return hidden_; }
  int hidden_count() const { return static_cast<int>(hidden_.size()); }
  const Vec& weights() const { return weights_.weights(); }

  const Rational& weight(std::size_t event, int lambda) const;
  std::size_t flat_index(std::size_t event, int lambda) const;

 private:
  Scenario scenario_;
  EventIndex events_;
  std::vector<std::string> hidden_;
  SignedDist weights_;
};

// Conditioning on a hidden value of zero marginal mass is undefined.
class ConditionalUndefinedError : public std::domain_error {
 public:
  explicit ConditionalUndefinedError(const std::string& hidden_label);
};

// Marginalization over consistent hidden variables: the signed measure on
// atomic events induced by an schv model.
Vec schv_marginalize(const SchvModel& model);

// (marginal over global assignments, marginal over contexts)
std::pair<Vec, Vec> schv_marginals(const SchvModel& model);

// True when the induced event measure equals the empirical table entrywise.
// Models over structurally different scenarios never realize each other.
bool realizes(const SchvModel& model, const EmpiricalModel& empirical);

Vec hidden_marginal(const GeneralHvModel& model);  // over the hidden set
Vec event_marginal(const GeneralHvModel& model);   // over atomic events

// Conditional over atomic events given one hidden value; throws
// ConditionalUndefinedError when that value carries zero marginal mass.
Vec conditional_given_hidden(const GeneralHvModel& model, int lambda);

bool general_realizes(const GeneralHvModel& model, const EmpiricalModel& empirical);

// The canonical embedding: hidden set = global assignments; weight of
// (event, global) is the schv weight when the global is consistent with the
// event's section, zero otherwise.
GeneralHvModel embed_canonical(const SchvModel& model,
                               std::size_t cap = kDefaultEnumerationCap);

}  // namespace nosig
