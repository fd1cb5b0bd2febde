#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nosig/linalg.hpp"
#include "nosig/models.hpp"
#include "nosig/scenario.hpp"
#include "nosig/simplex.hpp"

namespace nosig {

// ---------------------------------------------------------------------------
// No-Signalling
// ---------------------------------------------------------------------------

// A pair of overlapping contexts whose conditionals disagree on a common
// marginal, with the exact values of both sides.
struct NsViolation {
  int context_a = -1;
  int context_b = -1;
  Section common;  // section on the intersection
  Rational lhs;    // marginal of context_a's conditional
  Rational rhs;    // marginal of context_b's conditional

  bool operator==(const NsViolation&) const = default;
};

struct NsReport {
  bool is_no_signalling = true;
  std::vector<NsViolation> violations;  // canonical (pair, section) order
};

// Compares, for every unordered context pair with nonempty intersection and
// every section on that intersection, the two marginal sums of the context
// conditionals. Disjoint pairs are vacuous (both marginals are the total
// mass 1) and are not enumerated.
NsReport check_no_signalling(const EmpiricalModel& model);

// ---------------------------------------------------------------------------
// The incidence map: distributions on global assignments -> event marginals
// ---------------------------------------------------------------------------

// 0/1 matrix, rows indexed by atomic events, columns by global assignments;
// entry 1 exactly when the assignment restricts to the event's section.
Mat incidence_matrix(const Scenario& scenario,
                     std::size_t cap = kDefaultEnumerationCap);

// ---------------------------------------------------------------------------
// Realization
// ---------------------------------------------------------------------------

// Nonnegative realizing model spreading each event's weight uniformly over
// the assignments consistent with it. Realizes every empirical model, but is
// generally not Lambda-Independent.
SchvModel realize_pchv(const EmpiricalModel& model,
                       std::size_t cap = kDefaultEnumerationCap);

enum class RealizeMethod {
  kSolveAny,        // deterministic particular solution, free vars at zero
  kMinNegativity,   // minimize total negative mass by exact LP
  kNonnegative,     // nonnegative feasibility (local hidden variables)
};

enum class RealizeStatus { kRealized, kInfeasible };

struct RealizationResult {
  RealizeStatus status = RealizeStatus::kInfeasible;
  Vec hidden_dist;       // over global assignments, when realized
  Vec context_dist;      // context masses e(U); always filled
  Rational negativity;   // total negative mass of hidden_dist
  RealizeMethod method = RealizeMethod::kSolveAny;
};

// Solves the incidence system against the model's conditional table. A
// solution exists exactly when the model is no-signalling; the assembled
// product of hidden_dist and context_dist is then a Lambda-Independent
// realization. `method` selects the deterministic particular solution or the
// minimum-negativity witness (split into positive and negative parts, exact
// simplex on the total negative mass).
RealizationResult realize_signed_li(
    const EmpiricalModel& model, RealizeMethod method = RealizeMethod::kSolveAny,
    std::size_t cap = kDefaultEnumerationCap);

// Feasibility of a nonnegative solution: does the model admit local hidden
// variables? When realized, negativity is zero and the assembled model is a
// Lambda-Independent pchv.
RealizationResult realize_nonneg(const EmpiricalModel& model,
                                 std::size_t cap = kDefaultEnumerationCap);

// Product model  weight(omega, U) = hidden(omega) * context(U); the
// Lambda-Independent assembly of a realization result.
SchvModel assemble_product_model(const Scenario& scenario, const Vec& hidden_dist,
                                 const Vec& context_dist,
                                 std::size_t cap = kDefaultEnumerationCap);

// ---------------------------------------------------------------------------
// Independence checks
// ---------------------------------------------------------------------------

// schv Lambda-Independence is the product factorization; a failing cell is
// the witness.
struct ProductWitness {
  std::size_t global = 0;
  int context = -1;
  Rational actual;    // weight(global, context)
  Rational expected;  // marginal product
};

// General-model Lambda-Independence fails only where a hidden value of zero
// marginal mass carries nonzero weight.
struct HiddenMassWitness {
  std::size_t event = 0;
  int lambda = -1;
  Rational weight;
};

// Parameter-Independence compares outcome marginals on a context overlap,
// conditioned on (context, hidden value).
struct ConditionalWitness {
  int context_a = -1;
  int context_b = -1;
  Section common;
  int lambda = -1;
  Rational lhs;
  Rational rhs;
};

// (context_a, context_b, lambda) triples skipped because a conditioning
// denominator was zero.
struct VacuousConditional {
  int context_a = -1;
  int context_b = -1;
  int lambda = -1;
};

using IndependenceWitness =
    std::variant<ProductWitness, HiddenMassWitness, ConditionalWitness>;

struct IndependenceReport {
  bool holds = true;
  std::optional<IndependenceWitness> witness;  // first failure in index order
  std::vector<VacuousConditional> vacuous;     // parameter check only
};

IndependenceReport check_lambda_independence(const SchvModel& model);
IndependenceReport check_lambda_independence(const GeneralHvModel& model);
IndependenceReport check_parameter_independence(const GeneralHvModel& model);

// ---------------------------------------------------------------------------
// Dimension of the no-signalling span
// ---------------------------------------------------------------------------

struct DimensionReport {
  std::size_t combinatorial = 0;  // sum over partial contexts of (l-1)^|V|
  std::size_t rank = 0;           // rank of the incidence matrix
  std::size_t basis_rank = 0;     // rank of the distinguished-assignment family

  bool consistent() const {
    return combinatorial == rank && rank == basis_rank;
  }
};

// Computes the counting formula, the incidence rank, and the rank of the
// columns induced by the assignments that extend each distinguished-outcome-
// free partial section with the distinguished outcome. All three agree on
// every well-formed scenario.
DimensionReport ns_dimension(const Scenario& scenario,
                             std::size_t cap = kDefaultEnumerationCap);

// ---------------------------------------------------------------------------
// Marginal recursion
// ---------------------------------------------------------------------------

// Conditional values indexed by (partial context in canonical order, section
// rank). BoundaryTable carries only the distinguished-outcome-free sections;
// PartialTable carries all sections.
struct BoundaryTable {
  std::vector<std::vector<int>> contexts;  // partial_contexts(scenario)
  std::vector<Vec> values;  // values[i] over bounded_sections(contexts[i], 0)
};

struct PartialTable {
  std::vector<std::vector<int>> contexts;
  std::vector<Vec> values;  // values[i] over all sections on contexts[i]

  const Rational& at(const Scenario& scenario, std::size_t context_pos,
                     const Section& section) const;
};

// Marginal of the model's conditional on a partial context, computed inside
// the lowest-index cover context containing it. For a no-signalling model
// the choice of context does not matter.
Rational partial_conditional(const EmpiricalModel& model,
                             std::span<const int> domain,
                             const Section& section);

// The boundary data of a model: partial conditionals on every
// distinguished-outcome-free section (empty context included, value 1).
BoundaryTable extract_boundary(const EmpiricalModel& model);

// Rebuilds the full conditional table from boundary data alone by
// back-substitution on the marginal identity
//   e_V(s with m set to the distinguished outcome)
//     = e_{V minus m}(s restricted) - sum over other outcomes j of e_V(s with m set to j),
// filling sections by increasing count of distinguished outcomes. Total for
// any boundary input; the empty-context value must be 1.
PartialTable reconstruct_from_boundary(const Scenario& scenario,
                                       const BoundaryTable& boundary);

}  // namespace nosig
