#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "nosig/models.hpp"
#include "nosig/scenario.hpp"

namespace nosig {

// Requested generator cannot run on the given scenario (e.g. a signalling
// perturbation needs two overlapping contexts).
class UnsupportedScenarioError : public std::runtime_error {
 public:
  explicit UnsupportedScenarioError(const std::string& what)
      : std::runtime_error(what) {}
};

// Bell scenario: one measurement per (party, setting), labelled a0,a1,b0,...;
// contexts choose one setting per party, enumerated with the last party's
// setting varying fastest. Outcomes are "0".."l-1".
Scenario bell(int parties, int settings, int outcomes);

// X = {a,b,c}, cover {a,b},{b,c},{a,c}, binary outcomes. The smallest cover
// that is not of Bell product form.
Scenario triangle();

// Popescu-Rohrlich box on bell(2,2,2): uniform context weights, conditionals
// 1/2 exactly when the outcome parity equals the AND of the settings.
EmpiricalModel pr_box();

// Triangle model with each context uniform on the anti-correlated sections
// 01 and 10, context weights 1/3.
EmpiricalModel triangle_anticorrelated();

// The two-context general hidden-variable model witnessing that
// Lambda-Independence does not imply Parameter-Independence: mass 1/4 on
// (U,{a:x0,b0:y},l0), (V,{a:x0,b1:y},l1), (V,{a:x1,b1:y},l0),
// (U,{a:x1,b0:y},l1).
GeneralHvModel section3_counterexample();

// Deterministic splittable generator (splitmix64). All draws are platform
// independent; no standard-library distributions are involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform in [0, bound); bound must be positive. Rejection sampling keeps
  // the draw exactly uniform.
  std::uint64_t below(std::uint64_t bound);
  int below_int(int bound);
  // Uniform numerator over a uniform denominator in [1, max_den]; value in
  // [0, 1].
  Rational unit_fraction(int max_den = 64);
  Rng split();

 private:
  std::uint64_t state_;
};

// No-signalling empirical model, deterministic in the seed: a convex
// combination of point masses on global assignments, optionally perturbed
// inside the no-signalling set (total-mass-preserving direction, scaled to
// keep the table nonnegative), with random positive context weights. With
// perturb = false the output always admits local hidden variables.
EmpiricalModel random_ns_model(const Scenario& scenario, std::uint64_t seed,
                               bool perturb = true,
                               std::size_t cap = kDefaultEnumerationCap);

// Starts from random_ns_model and moves conditional mass within one context
// between two sections that differ on an overlap with another context, so
// exactly that marginal equation breaks. Throws UnsupportedScenarioError
// when no two contexts intersect.
EmpiricalModel random_signalling_model(const Scenario& scenario,
                                       std::uint64_t seed,
                                       std::size_t cap = kDefaultEnumerationCap);

// Signed hidden-variable model with bounded-denominator entries, mass fixed
// to 1 through the final cell. Corpus support for the embedding properties.
SchvModel random_schv_model(const Scenario& scenario, std::uint64_t seed,
                            std::size_t cap = kDefaultEnumerationCap);

}  // namespace nosig
