#include "nosig/models.hpp"

#include <stdexcept>

namespace nosig {

Rational total_mass(const Vec& weights) {
  Rational sum = 0;
  for (Index i = 0; i < weights.size(); ++i) sum += weights(i);
  return sum;
}

Rational negativity(const Vec& weights) {
  Rational neg = 0;
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights(i) < 0) neg -= weights(i);
  }
  return neg;
}

bool is_nonnegative(const Vec& weights) {
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights(i) < 0) return false;
  }
  return true;
}

SignedDist::SignedDist(Vec weights) : weights_(std::move(weights)) {
  const Rational mass = total_mass(weights_);
  if (mass != 1) {
    throw std::invalid_argument("signed distribution has total mass " +
                                to_string(mass) + ", expected 1");
  }
}

bool SignedDist::nonnegative() const { return is_nonnegative(weights_); }

Rational SignedDist::negativity() const { return nosig::negativity(weights_); }

EmpiricalModel::EmpiricalModel(Scenario scenario, Vec table)
    : scenario_(std::move(scenario)),
      events_(scenario_),
      table_(std::move(table)) {
  if (static_cast<std::size_t>(table_.size()) != events_.count()) {
    throw std::invalid_argument(
        "empirical table has " + std::to_string(table_.size()) +
        " entries, expected one per atomic event (" +
        std::to_string(events_.count()) + ")");
  }
  if (!table_.nonnegative()) {
    throw std::invalid_argument("empirical table has a negative weight");
  }
  for (int c = 0; c < scenario_.context_count(); ++c) {
    if (!(context_mass(c) > 0)) {
      throw std::invalid_argument("context #" + std::to_string(c) +
                                  " has nonpositive total mass");
    }
  }
}

const Rational& EmpiricalModel::weight(std::size_t event) const {
  return table_(static_cast<Index>(event));
}

const Rational& EmpiricalModel::weight(int context, std::size_t rank) const {
  return table_(static_cast<Index>(events_.index_of(context, rank)));
}

Rational EmpiricalModel::context_mass(int context) const {
  Rational sum = 0;
  const std::size_t n = events_.sections_in(context);
  for (std::size_t r = 0; r < n; ++r) sum += weight(context, r);
  return sum;
}

Vec EmpiricalModel::conditional(int context) const {
  const std::size_t n = events_.sections_in(context);
  const Rational mass = context_mass(context);
  Vec out(static_cast<Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    out(static_cast<Index>(r)) = weight(context, r) / mass;
  }
  return out;
}

Vec EmpiricalModel::conditional_vector() const {
  Vec out(static_cast<Index>(events_.count()));
  for (int c = 0; c < scenario_.context_count(); ++c) {
    const Vec cond = conditional(c);
    for (std::size_t r = 0; r < events_.sections_in(c); ++r) {
      out(static_cast<Index>(events_.index_of(c, r))) =
          cond(static_cast<Index>(r));
    }
  }
  return out;
}

bool EmpiricalModel::operator==(const EmpiricalModel& other) const {
  return scenario_ == other.scenario_ && equal(table(), other.table());
}

SchvModel::SchvModel(Scenario scenario, Vec weights, std::size_t cap)
    : scenario_(std::move(scenario)),
      globals_([&] {
        const BigInt total = nosig::global_count(scenario_);
        if (total > BigInt(cap)) throw EnumerationCapError(total, cap);
        return static_cast<std::size_t>(total);
      }()),
      weights_(std::move(weights)) {
  const std::size_t expected = globals_ * static_cast<std::size_t>(
                                              scenario_.context_count());
  if (static_cast<std::size_t>(weights_.size()) != expected) {
    throw std::invalid_argument(
        "schv weights have " + std::to_string(weights_.size()) +
        " entries, expected globals x contexts = " + std::to_string(expected));
  }
}

std::size_t SchvModel::flat_index(std::size_t global, int context) const {
  return global * static_cast<std::size_t>(scenario_.context_count()) +
         static_cast<std::size_t>(context);
}

const Rational& SchvModel::weight(std::size_t global, int context) const {
  return weights_(static_cast<Index>(flat_index(global, context)));
}

GeneralHvModel::GeneralHvModel(Scenario scenario,
                               std::vector<std::string> hidden_values,
                               Vec weights)
    : scenario_(std::move(scenario)),
      events_(scenario_),
      hidden_(std::move(hidden_values)),
      weights_(std::move(weights)) {
  if (hidden_.empty()) {
    throw std::invalid_argument("hidden-variable set is empty");
  }
  const std::size_t expected = events_.count() * hidden_.size();
  if (static_cast<std::size_t>(weights_.size()) != expected) {
    throw std::invalid_argument(
        "hidden-variable weights have " + std::to_string(weights_.size()) +
        " entries, expected events x hidden = " + std::to_string(expected));
  }
}

std::size_t GeneralHvModel::flat_index(std::size_t event, int lambda) const {
  return event * hidden_.size() + static_cast<std::size_t>(lambda);
}

const Rational& GeneralHvModel::weight(std::size_t event, int lambda) const {
  return weights_(static_cast<Index>(flat_index(event, lambda)));
}

ConditionalUndefinedError::ConditionalUndefinedError(const std::string& label)
    : std::domain_error("conditional undefined: hidden value " + label +
                        " has zero marginal mass") {}

Vec schv_marginalize(const SchvModel& model) {
  const Scenario& sc = model.scenario();
  const EventIndex events(sc);
  Vec out = Vec::Zero(static_cast<Index>(events.count()));
  for (std::size_t g = 0; g < model.global_count(); ++g) {
    const GlobalAssignment omega = global_at(sc, g);
    for (int c = 0; c < sc.context_count(); ++c) {
      const Section s = restriction(omega, sc.cover()[static_cast<std::size_t>(c)]);
      const std::size_t event = events.index_of(c, section_rank(sc, s));
      out(static_cast<Index>(event)) += model.weight(g, c);
    }
  }
  return out;
}

std::pair<Vec, Vec> schv_marginals(const SchvModel& model) {
  const int contexts = model.scenario().context_count();
  Vec over_globals = Vec::Zero(static_cast<Index>(model.global_count()));
  Vec over_contexts = Vec::Zero(contexts);
  for (std::size_t g = 0; g < model.global_count(); ++g) {
    for (int c = 0; c < contexts; ++c) {
      const Rational& w = model.weight(g, c);
      over_globals(static_cast<Index>(g)) += w;
      over_contexts(c) += w;
    }
  }
  return {std::move(over_globals), std::move(over_contexts)};
}

bool realizes(const SchvModel& model, const EmpiricalModel& empirical) {
  if (!(model.scenario() == empirical.scenario())) return false;
  return equal(schv_marginalize(model), empirical.table());
}

Vec hidden_marginal(const GeneralHvModel& model) {
  Vec out = Vec::Zero(model.hidden_count());
  for (std::size_t e = 0; e < model.events().count(); ++e) {
    for (int l = 0; l < model.hidden_count(); ++l) {
      out(l) += model.weight(e, l);
    }
  }
  return out;
}

Vec event_marginal(const GeneralHvModel& model) {
  Vec out = Vec::Zero(static_cast<Index>(model.events().count()));
  for (std::size_t e = 0; e < model.events().count(); ++e) {
    for (int l = 0; l < model.hidden_count(); ++l) {
      out(static_cast<Index>(e)) += model.weight(e, l);
    }
  }
  return out;
}

Vec conditional_given_hidden(const GeneralHvModel& model, int lambda) {
  Rational mass = 0;
  for (std::size_t e = 0; e < model.events().count(); ++e) {
    mass += model.weight(e, lambda);
  }
  if (mass == 0) {
    throw ConditionalUndefinedError(
        model.hidden_values().at(static_cast<std::size_t>(lambda)));
  }
  Vec out(static_cast<Index>(model.events().count()));
  for (std::size_t e = 0; e < model.events().count(); ++e) {
    out(static_cast<Index>(e)) = model.weight(e, lambda) / mass;
  }
  return out;
}

bool general_realizes(const GeneralHvModel& model,
                      const EmpiricalModel& empirical) {
  if (!(model.scenario() == empirical.scenario())) return false;
  return equal(event_marginal(model), empirical.table());
}

GeneralHvModel embed_canonical(const SchvModel& model, std::size_t cap) {
  const Scenario& sc = model.scenario();
  const EventIndex events(sc);
  const std::size_t globals = model.global_count();
  std::vector<std::string> hidden;
  hidden.reserve(globals);
  for (std::size_t g = 0; g < globals; ++g) {
    const GlobalAssignment omega = global_at(sc, g);
    std::string label;
    for (int m = 0; m < sc.measurement_count(); ++m) {
      if (m) label += " ";
      label += sc.measurements()[static_cast<std::size_t>(m)] + "=" +
               sc.outcomes()[static_cast<std::size_t>(
                   omega.outcomes[static_cast<std::size_t>(m)])];
    }
    hidden.push_back(std::move(label));
  }

  Vec weights = Vec::Zero(static_cast<Index>(events.count() * globals));
  for (std::size_t g = 0; g < globals; ++g) {
    const GlobalAssignment omega = global_at(sc, g);
    for (int c = 0; c < sc.context_count(); ++c) {
      const Section s = restriction(omega, sc.cover()[static_cast<std::size_t>(c)]);
      const std::size_t event = events.index_of(c, section_rank(sc, s));
      weights(static_cast<Index>(event * globals + g)) = model.weight(g, c);
    }
  }
  return GeneralHvModel(sc, std::move(hidden), std::move(weights));
}

}  // namespace nosig
