#include "nosig/analysis.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string>

namespace nosig {

namespace {

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

// Marginalizes a per-section vector on `context` down to the sections of
// `common` (a subset of `context`).
Vec marginal_on(const Scenario& scenario, const Vec& per_section,
                const std::vector<int>& context, const std::vector<int>& common) {
  Vec out = Vec::Zero(static_cast<Index>(section_count(scenario, common)));
  const std::size_t n = section_count(scenario, context);
  for (std::size_t r = 0; r < n; ++r) {
    const Section s = section_at(scenario, context, r);
    const std::size_t sub = section_rank(scenario, s.restricted_to(common));
    out(static_cast<Index>(sub)) += per_section(static_cast<Index>(r));
  }
  return out;
}

int distinguished_count(const Section& s) {
  int k = 0;
  for (const auto& [m, o] : s.entries()) {
    if (o == 0) ++k;
  }
  return k;
}

}  // namespace

NsReport check_no_signalling(const EmpiricalModel& model) {
  const Scenario& sc = model.scenario();
  const auto& cover = sc.cover();
  NsReport report;
  for (int i = 0; i < sc.context_count(); ++i) {
    const Vec cond_i = model.conditional(i);
    for (int j = i + 1; j < sc.context_count(); ++j) {
      const std::vector<int> common = intersect(cover[i], cover[j]);
      if (common.empty()) continue;
      const Vec mi = marginal_on(sc, cond_i, cover[i], common);
      const Vec mj = marginal_on(sc, model.conditional(j), cover[j], common);
      for (Index r = 0; r < mi.size(); ++r) {
        if (mi(r) != mj(r)) {
          report.violations.push_back(
              {i, j, section_at(sc, common, static_cast<std::size_t>(r)),
               mi(r), mj(r)});
        }
      }
    }
  }
  report.is_no_signalling = report.violations.empty();
  return report;
}

Mat incidence_matrix(const Scenario& scenario, std::size_t cap) {
  const EventIndex events(scenario);
  const auto globals = enumerate_globals(scenario, cap);
  Mat l = Mat::Zero(static_cast<Index>(events.count()),
                    static_cast<Index>(globals.size()));
  for (std::size_t col = 0; col < globals.size(); ++col) {
    for (int ctx = 0; ctx < scenario.context_count(); ++ctx) {
      const Section s = restriction(globals[col], scenario.cover()[ctx]);
      const std::size_t row = events.index_of(ctx, section_rank(scenario, s));
      l(static_cast<Index>(row), static_cast<Index>(col)) = 1;
    }
  }
  return l;
}

SchvModel realize_pchv(const EmpiricalModel& model, std::size_t cap) {
  const Scenario& sc = model.scenario();
  const EventIndex& events = model.events();
  const auto globals = enumerate_globals(sc, cap);
  const int contexts = sc.context_count();
  Vec weights =
      Vec::Zero(static_cast<Index>(globals.size()) * contexts);
  for (std::size_t e = 0; e < events.count(); ++e) {
    const Rational& value = model.weight(e);
    if (value == 0) continue;
    const auto [ctx, rank] = events.context_and_rank(e);
    const Section s = section_at(sc, sc.cover()[ctx], rank);
    const auto fibre = consistent_global_indices(sc, s, cap);
    const Rational share =
        value / Rational(static_cast<unsigned long>(fibre.size()));
    for (const std::size_t g : fibre) {
      weights(static_cast<Index>(g * contexts + ctx)) = share;
    }
  }
  return SchvModel(sc, std::move(weights), cap);
}

namespace {

RealizationResult realize_impl(const EmpiricalModel& model, RealizeMethod method,
                               std::size_t cap) {
  const Scenario& sc = model.scenario();
  RealizationResult res;
  res.method = method;
  res.negativity = 0;
  res.context_dist = Vec(sc.context_count());
  for (int ctx = 0; ctx < sc.context_count(); ++ctx) {
    res.context_dist(ctx) = model.context_mass(ctx);
  }

  const Mat l = incidence_matrix(sc, cap);
  const Vec w = model.conditional_vector();
  const Index p = l.cols();

  Vec hidden;
  bool realized = false;
  switch (method) {
    case RealizeMethod::kSolveAny: {
      const auto sol = solve_linear(l, w);
      if (sol.status != SolveStatus::kInfeasible) {
        hidden = sol.particular;
        realized = true;
      }
      break;
    }
    case RealizeMethod::kMinNegativity: {
      // v = plus - minus, both nonnegative; total negative mass is the sum of
      // the minus block at any optimum.
      Mat a(l.rows(), 2 * p);
      a.leftCols(p) = l;
      a.rightCols(p) = -l;
      Vec c = Vec::Zero(2 * p);
      for (Index i = p; i < 2 * p; ++i) c(i) = 1;
      const auto lp = lp_solve(c, a, w);
      if (lp.status == LpStatus::kOptimal) {
        hidden = lp.witness.head(p) - lp.witness.tail(p);
        realized = true;
      }
      break;
    }
    case RealizeMethod::kNonnegative: {
      const Vec c = Vec::Zero(p);
      const auto lp = lp_solve(c, l, w);
      if (lp.status == LpStatus::kOptimal) {
        hidden = lp.witness;
        realized = true;
      }
      break;
    }
  }

  if (realized) {
    res.status = RealizeStatus::kRealized;
    res.hidden_dist = std::move(hidden);
    res.negativity = negativity(res.hidden_dist);
  }
  return res;
}

}  // namespace

RealizationResult realize_signed_li(const EmpiricalModel& model,
                                    RealizeMethod method, std::size_t cap) {
  if (method == RealizeMethod::kNonnegative) {
    throw std::invalid_argument(
        "realize_signed_li: use realize_nonneg for the nonnegative method");
  }
  return realize_impl(model, method, cap);
}

RealizationResult realize_nonneg(const EmpiricalModel& model, std::size_t cap) {
  return realize_impl(model, RealizeMethod::kNonnegative, cap);
}

SchvModel assemble_product_model(const Scenario& scenario, const Vec& hidden_dist,
                                 const Vec& context_dist, std::size_t cap) {
  const int contexts = scenario.context_count();
  if (context_dist.size() != contexts) {
    throw std::invalid_argument("assemble_product_model: context_dist size");
  }
  Vec weights(hidden_dist.size() * contexts);
  for (Index g = 0; g < hidden_dist.size(); ++g) {
    for (int ctx = 0; ctx < contexts; ++ctx) {
      weights(g * contexts + ctx) = hidden_dist(g) * context_dist(ctx);
    }
  }
  return SchvModel(scenario, std::move(weights), cap);
}

IndependenceReport check_lambda_independence(const SchvModel& model) {
  IndependenceReport report;
  const auto [over_globals, over_contexts] = schv_marginals(model);
  const int contexts = model.scenario().context_count();
  for (std::size_t g = 0; g < model.global_count(); ++g) {
    for (int ctx = 0; ctx < contexts; ++ctx) {
      const Rational expected = over_globals(static_cast<Index>(g)) * over_contexts(ctx);
      const Rational& actual = model.weight(g, ctx);
      if (actual != expected) {
        report.holds = false;
        report.witness = ProductWitness{g, ctx, actual, expected};
        return report;
      }
    }
  }
  return report;
}

IndependenceReport check_lambda_independence(const GeneralHvModel& model) {
  IndependenceReport report;
  const Vec over_hidden = hidden_marginal(model);
  // Where the hidden marginal is nonzero the factorization through the
  // conditional is an identity; only zero-marginal values can break it.
  for (std::size_t e = 0; e < model.events().count(); ++e) {
    for (int lam = 0; lam < model.hidden_count(); ++lam) {
      if (over_hidden(lam) == 0 && model.weight(e, lam) != 0) {
        report.holds = false;
        report.witness = HiddenMassWitness{e, lam, model.weight(e, lam)};
        return report;
      }
    }
  }
  return report;
}

IndependenceReport check_parameter_independence(const GeneralHvModel& model) {
  IndependenceReport report;
  const Scenario& sc = model.scenario();
  const EventIndex& events = model.events();
  const auto& cover = sc.cover();

  // Per-(context, lambda) weight vectors over the context's sections.
  const auto context_slice = [&](int ctx, int lam) {
    const std::size_t n = events.sections_in(ctx);
    Vec out(static_cast<Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      out(static_cast<Index>(r)) = model.weight(events.index_of(ctx, r), lam);
    }
    return out;
  };

  for (int i = 0; i < sc.context_count(); ++i) {
    for (int j = i + 1; j < sc.context_count(); ++j) {
      const std::vector<int> common = intersect(cover[i], cover[j]);
      if (common.empty()) continue;
      for (int lam = 0; lam < model.hidden_count(); ++lam) {
        const Vec slice_i = context_slice(i, lam);
        const Vec slice_j = context_slice(j, lam);
        const Rational den_i = total_mass(slice_i);
        const Rational den_j = total_mass(slice_j);
        if (den_i == 0 || den_j == 0) {
          report.vacuous.push_back({i, j, lam});
          continue;
        }
        const Vec num_i = marginal_on(sc, slice_i, cover[i], common);
        const Vec num_j = marginal_on(sc, slice_j, cover[j], common);
        for (Index r = 0; r < num_i.size(); ++r) {
          const Rational lhs = num_i(r) / den_i;
          const Rational rhs = num_j(r) / den_j;
          if (lhs != rhs && !report.witness) {
            report.holds = false;
            report.witness = ConditionalWitness{
                i, j, section_at(sc, common, static_cast<std::size_t>(r)), lam,
                lhs, rhs};
          }
        }
      }
    }
  }
  return report;
}

DimensionReport ns_dimension(const Scenario& scenario, std::size_t cap) {
  const Mat l = incidence_matrix(scenario, cap);
  const auto sigma = partial_contexts(scenario);
  const BigInt span = scenario.outcome_count() - 1;

  DimensionReport report;
  BigInt combinatorial = 0;
  for (const auto& v : sigma) {
    BigInt term = 1;
    for (std::size_t k = 0; k < v.size(); ++k) term *= span;
    combinatorial += term;
  }
  report.combinatorial = combinatorial.convert_to<std::size_t>();
  report.rank = static_cast<std::size_t>(rank(l));

  // One column per (V, distinguished-free section): the incidence column of
  // the assignment extending the section with the distinguished outcome.
  Mat basis(l.rows(), static_cast<Index>(report.combinatorial));
  Index col = 0;
  for (const auto& v : sigma) {
    for (const Section& s : bounded_sections(scenario, v, 0)) {
      GlobalAssignment g{std::vector<int>(
          static_cast<std::size_t>(scenario.measurement_count()), 0)};
      for (const auto& [m, o] : s.entries()) g.outcomes[static_cast<std::size_t>(m)] = o;
      basis.col(col++) = l.col(static_cast<Index>(global_index(scenario, g)));
    }
  }
  report.basis_rank = static_cast<std::size_t>(rank(basis));
  return report;
}

const Rational& PartialTable::at(const Scenario& scenario,
                                 std::size_t context_pos,
                                 const Section& section) const {
  return values.at(context_pos)(
      static_cast<Index>(section_rank(scenario, section)));
}

Rational partial_conditional(const EmpiricalModel& model,
                             std::span<const int> domain,
                             const Section& section) {
  const Scenario& sc = model.scenario();
  for (int ctx = 0; ctx < sc.context_count(); ++ctx) {
    const auto& c = sc.cover()[ctx];
    if (!std::includes(c.begin(), c.end(), domain.begin(), domain.end())) {
      continue;
    }
    const Vec cond = model.conditional(ctx);
    Rational sum = 0;
    const std::size_t n = section_count(sc, c);
    for (std::size_t r = 0; r < n; ++r) {
      if (section_at(sc, c, r).restricted_to(domain) == section) {
        sum += cond(static_cast<Index>(r));
      }
    }
    return sum;
  }
  throw std::invalid_argument(
      "partial_conditional: domain not contained in any context");
}

BoundaryTable extract_boundary(const EmpiricalModel& model) {
  const Scenario& sc = model.scenario();
  BoundaryTable boundary;
  boundary.contexts = partial_contexts(sc);
  boundary.values.reserve(boundary.contexts.size());
  for (const auto& v : boundary.contexts) {
    const auto secs = bounded_sections(sc, v, 0);
    Vec vals(static_cast<Index>(secs.size()));
    for (std::size_t k = 0; k < secs.size(); ++k) {
      vals(static_cast<Index>(k)) = partial_conditional(model, v, secs[k]);
    }
    boundary.values.push_back(std::move(vals));
  }
  return boundary;
}

PartialTable reconstruct_from_boundary(const Scenario& scenario,
                                       const BoundaryTable& boundary) {
  const auto sigma = partial_contexts(scenario);
  if (boundary.contexts != sigma ||
      boundary.values.size() != sigma.size()) {
    throw std::invalid_argument(
        "reconstruct_from_boundary: boundary not indexed by the partial "
        "contexts of the scenario");
  }
  std::map<std::vector<int>, std::size_t> pos_of;
  for (std::size_t pos = 0; pos < sigma.size(); ++pos) {
    const auto secs = bounded_sections(scenario, sigma[pos], 0);
    if (boundary.values[pos].size() != static_cast<Index>(secs.size())) {
      throw std::invalid_argument(
          "reconstruct_from_boundary: boundary value count mismatch");
    }
    pos_of.emplace(sigma[pos], pos);
  }
  if (boundary.values.front()(0) != 1) {
    throw std::invalid_argument(
        "reconstruct_from_boundary: empty-context value must be 1");
  }

  PartialTable out;
  out.contexts = sigma;
  out.values.reserve(sigma.size());
  const int l = scenario.outcome_count();

  for (std::size_t pos = 0; pos < sigma.size(); ++pos) {
    const auto& v = sigma[pos];
    const auto secs = sections_on(scenario, v);
    Vec vals(static_cast<Index>(secs.size()));

    // Boundary rows first, then increasing count of distinguished outcomes;
    // each step consumes already-filled entries only.
    std::vector<std::vector<std::size_t>> by_count(v.size() + 1);
    for (std::size_t r = 0; r < secs.size(); ++r) {
      by_count[static_cast<std::size_t>(distinguished_count(secs[r]))].push_back(r);
    }

    std::size_t boundary_pos = 0;
    for (const std::size_t r : by_count[0]) {
      // bounded_sections preserves rank order, so positions align.
      vals(static_cast<Index>(r)) = boundary.values[pos](static_cast<Index>(boundary_pos++));
    }
    for (std::size_t k = 1; k <= v.size(); ++k) {
      for (const std::size_t r : by_count[k]) {
        const Section& s = secs[r];
        int m = -1;
        for (const auto& [meas, o] : s.entries()) {
          if (o == 0) {
            m = meas;
            break;
          }
        }
        std::vector<int> sub;
        for (const int meas : v) {
          if (meas != m) sub.push_back(meas);
        }
        Rational value = out.values[pos_of.at(sub)](
            static_cast<Index>(section_rank(scenario, s.restricted_to(sub))));
        for (int j = 1; j < l; ++j) {
          value -= vals(static_cast<Index>(
              section_rank(scenario, override_outcome(s, m, j))));
        }
        vals(static_cast<Index>(r)) = value;
      }
    }
    out.values.push_back(std::move(vals));
  }
  return out;
}

}  // namespace nosig
