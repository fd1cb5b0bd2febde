#include <doctest.h>

#include <vector>

#include "nosig/analysis.hpp"
#include "nosig/generators.hpp"

using nosig::EmpiricalModel;
using nosig::Index;
using nosig::Mat;
using nosig::Rational;
using nosig::Scenario;
using nosig::SchvModel;
using nosig::Section;
using nosig::Vec;

namespace {

Scenario single_context() {
  return Scenario({"m0", "m1"}, {{"m0", "m1"}}, {"0", "1"});
}

// CHSH table whose a0-marginal is 1 under {a0,b0} but 1/2 under {a0,b1}.
EmpiricalModel one_sided_signalling() {
  const Scenario sc = nosig::bell(2, 2, 2);
  const nosig::EventIndex events(sc);
  Vec table = Vec::Zero(static_cast<Index>(events.count()));
  table(static_cast<Index>(events.index_of(0, 0))) = Rational(1, 4);
  table(static_cast<Index>(events.index_of(1, 0))) = Rational(1, 8);
  table(static_cast<Index>(events.index_of(1, 2))) = Rational(1, 8);
  for (int ctx = 2; ctx < 4; ++ctx) {
    for (std::size_t r = 0; r < 4; ++r) {
      table(static_cast<Index>(events.index_of(ctx, r))) = Rational(1, 16);
    }
  }
  return EmpiricalModel(sc, table);
}

EmpiricalModel deterministic_model(const Scenario& sc) {
  const nosig::EventIndex events(sc);
  Vec table = Vec::Zero(static_cast<Index>(events.count()));
  const Rational share(1, static_cast<unsigned long>(sc.context_count()));
  for (int ctx = 0; ctx < sc.context_count(); ++ctx) {
    table(static_cast<Index>(events.index_of(ctx, 0))) = share;
  }
  return EmpiricalModel(sc, table);
}

// Closed form of the marginal recursion: a section s on V with distinguished
// positions D satisfies
//   e_V(s) = sum over P subset of D, r : D\P -> {1..l-1} of
//            (-1)^{|D \ P|} e0_{V \ P}(s|_{V\D} union r).
// Independent of the back-substitution order used by the reconstruction.
Rational inclusion_exclusion(const Scenario& sc,
                             const nosig::BoundaryTable& boundary,
                             const std::vector<int>& v, const Section& s) {
  std::vector<int> distinguished;
  std::vector<std::pair<int, int>> base;
  for (const auto& [m, o] : s.entries()) {
    if (o == 0) {
      distinguished.push_back(m);
    } else {
      base.emplace_back(m, o);
    }
  }
  const int l = sc.outcome_count();
  Rational total = 0;
  const std::size_t dn = distinguished.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << dn); ++mask) {
    // Bits in `mask` are removed from the context; the rest get replaced.
    std::vector<int> kept_context;
    std::vector<int> replaced;
    for (const int m : v) {
      const auto it =
          std::find(distinguished.begin(), distinguished.end(), m);
      if (it == distinguished.end()) {
        kept_context.push_back(m);
        continue;
      }
      const std::size_t bit = static_cast<std::size_t>(it - distinguished.begin());
      if (mask & (std::size_t{1} << bit)) continue;  // removed
      kept_context.push_back(m);
      replaced.push_back(m);
    }
    const int sign = (replaced.size() % 2 == 0) ? 1 : -1;

    // Odometer over non-distinguished outcomes for the replaced positions.
    std::vector<int> digits(replaced.size(), 1);
    while (true) {
      std::vector<std::pair<int, int>> entries = base;
      for (std::size_t i = 0; i < replaced.size(); ++i) {
        entries.emplace_back(replaced[i], digits[i]);
      }
      const Section term(entries);

      const auto contexts = nosig::partial_contexts(sc);
      const auto pos = static_cast<std::size_t>(
          std::find(contexts.begin(), contexts.end(), kept_context) -
          contexts.begin());
      const auto bounded = nosig::bounded_sections(sc, kept_context, 0);
      const auto at = static_cast<std::size_t>(
          std::find(bounded.begin(), bounded.end(), term) - bounded.begin());
      total += Rational(sign) * boundary.values[pos](static_cast<Index>(at));

      std::size_t carry = replaced.size();
      while (carry > 0 && ++digits[carry - 1] == l) {
        digits[carry - 1] = 1;
        --carry;
      }
      if (replaced.empty() || carry == 0) break;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("no-signalling verdicts") {
  CHECK(nosig::check_no_signalling(nosig::pr_box()).is_no_signalling);
  CHECK(nosig::check_no_signalling(nosig::triangle_anticorrelated())
            .is_no_signalling);

  const auto report = nosig::check_no_signalling(one_sided_signalling());
  REQUIRE(!report.is_no_signalling);
  const auto& v = report.violations.front();
  CHECK(v.context_a == 0);
  CHECK(v.context_b == 1);
  CHECK(v.common == Section({{0, 0}}));
  CHECK(v.lhs == 1);
  CHECK(v.rhs == Rational(1, 2));
}

TEST_CASE("incidence matrix structure") {
  const Mat id_like = nosig::incidence_matrix(single_context());
  CHECK(id_like == Mat::Identity(4, 4));

  const Mat l = nosig::incidence_matrix(nosig::bell(2, 2, 2));
  REQUIRE(l.rows() == 16);
  REQUIRE(l.cols() == 16);
  for (Index r = 0; r < l.rows(); ++r) {
    CHECK(l.row(r).sum() == 4);  // |Omega(U,s)| = 2^2
  }
  for (Index c = 0; c < l.cols(); ++c) {
    CHECK(l.col(c).sum() == 4);  // one section per context
  }
}

TEST_CASE("uniform spreading realizes anything, signalling included") {
  const EmpiricalModel signalling = one_sided_signalling();
  const SchvModel spread = nosig::realize_pchv(signalling);
  CHECK(nosig::is_nonnegative(spread.weights()));
  CHECK(nosig::realizes(spread, signalling));

  const SchvModel pr_spread = nosig::realize_pchv(nosig::pr_box());
  CHECK(nosig::realizes(pr_spread, nosig::pr_box()));
  const auto li = nosig::check_lambda_independence(pr_spread);
  CHECK(!li.holds);
  REQUIRE(li.witness.has_value());
  CHECK(std::holds_alternative<nosig::ProductWitness>(*li.witness));
}

TEST_CASE("signed realization of the PR box") {
  const EmpiricalModel pr = nosig::pr_box();

  const auto any = nosig::realize_signed_li(pr);
  REQUIRE(any.status == nosig::RealizeStatus::kRealized);
  CHECK(nosig::total_mass(any.hidden_dist) == 1);
  const SchvModel assembled =
      nosig::assemble_product_model(pr.scenario(), any.hidden_dist,
                                    any.context_dist);
  CHECK(nosig::realizes(assembled, pr));
  CHECK(nosig::check_lambda_independence(assembled).holds);
  CHECK(any.negativity > 0);

  const auto best =
      nosig::realize_signed_li(pr, nosig::RealizeMethod::kMinNegativity);
  REQUIRE(best.status == nosig::RealizeStatus::kRealized);
  CHECK(best.negativity == Rational(1, 2));
  CHECK(best.negativity <= any.negativity);
  CHECK(nosig::realizes(nosig::assemble_product_model(
                            pr.scenario(), best.hidden_dist, best.context_dist),
                        pr));

  CHECK(nosig::realize_nonneg(pr).status == nosig::RealizeStatus::kInfeasible);
}

TEST_CASE("triangle anti-correlation: strongly nonlocal, negativity 1/2") {
  const EmpiricalModel m = nosig::triangle_anticorrelated();
  CHECK(nosig::realize_nonneg(m).status == nosig::RealizeStatus::kInfeasible);

  const auto best =
      nosig::realize_signed_li(m, nosig::RealizeMethod::kMinNegativity);
  REQUIRE(best.status == nosig::RealizeStatus::kRealized);
  CHECK(best.negativity == Rational(1, 2));

  // Independent certificate: y with Lᵀy <= 0 and Lᵀy >= -1 entrywise bounds
  // every feasible split from below by y·w.
  const Mat l = nosig::incidence_matrix(m.scenario());
  Vec y = Vec::Zero(12);
  y(3) = -1;
  y(4) = -1;
  y(10) = 1;
  const Vec lty = l.transpose() * y;
  for (Index i = 0; i < lty.size(); ++i) {
    CHECK(lty(i) <= 0);
    CHECK(lty(i) >= -1);
  }
  CHECK(y.dot(m.conditional_vector()) == Rational(1, 2));
}

TEST_CASE("deterministic tables realize with a point mass") {
  const EmpiricalModel det = deterministic_model(nosig::bell(2, 2, 2));
  const auto r = nosig::realize_signed_li(det);
  REQUIRE(r.status == nosig::RealizeStatus::kRealized);
  CHECK(r.negativity == 0);
  CHECK(r.hidden_dist(0) == 1);  // the all-first-outcome assignment
  for (Index g = 1; g < r.hidden_dist.size(); ++g) {
    CHECK(r.hidden_dist(g) == 0);
  }
}

TEST_CASE("signalling tables are infeasible under both methods") {
  const EmpiricalModel s = one_sided_signalling();
  CHECK(nosig::realize_signed_li(s).status ==
        nosig::RealizeStatus::kInfeasible);
  CHECK(nosig::realize_signed_li(s, nosig::RealizeMethod::kMinNegativity)
            .status == nosig::RealizeStatus::kInfeasible);
  CHECK(nosig::realize_nonneg(s).status == nosig::RealizeStatus::kInfeasible);
}

TEST_CASE("uniform CHSH table is local") {
  const Scenario sc = nosig::bell(2, 2, 2);
  const nosig::EventIndex events(sc);
  Vec table(16);
  for (Index e = 0; e < 16; ++e) table(e) = Rational(1, 16);
  const EmpiricalModel uniform(sc, table);
  const auto r = nosig::realize_nonneg(uniform);
  REQUIRE(r.status == nosig::RealizeStatus::kRealized);
  CHECK(r.negativity == 0);
  CHECK(nosig::realizes(nosig::assemble_product_model(sc, r.hidden_dist,
                                                      r.context_dist),
                        uniform));
}

TEST_CASE("product schv models are exactly the lambda-independent ones") {
  const Scenario sc = nosig::bell(2, 2, 2);
  Vec hidden = Vec::Zero(16);
  hidden(3) = Rational(1, 2);
  hidden(12) = Rational(3, 4);
  hidden(7) = Rational(-1, 4);
  Vec contexts(4);
  contexts << Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 8);
  const SchvModel product = nosig::assemble_product_model(sc, hidden, contexts);
  CHECK(nosig::check_lambda_independence(product).holds);

  Vec skewed = product.weights();
  skewed(product.flat_index(3, 0)) += Rational(1, 16);
  skewed(product.flat_index(3, 1)) -= Rational(1, 16);
  const auto report = nosig::check_lambda_independence(SchvModel(sc, skewed));
  REQUIRE(!report.holds);
  const auto& w = std::get<nosig::ProductWitness>(*report.witness);
  CHECK(w.global == 3);
  CHECK(w.context == 0);
}

TEST_CASE("general lambda-independence fails only on null hidden mass") {
  const nosig::GeneralHvModel s3 = nosig::section3_counterexample();
  CHECK(nosig::check_lambda_independence(s3).holds);

  // Shift weight between lambdas of one event so that a third, zero-marginal
  // lambda appears with cancelling weights.
  const Scenario& sc = s3.scenario();
  const nosig::EventIndex& events = s3.events();
  Vec weights = Vec::Zero(static_cast<Index>(events.count() * 3));
  for (std::size_t e = 0; e < events.count(); ++e) {
    for (int lam = 0; lam < 2; ++lam) {
      weights(static_cast<Index>(e * 3 + static_cast<std::size_t>(lam))) =
          s3.weight(e, lam);
    }
  }
  weights(2 * 3 + 2) = Rational(1, 8);
  weights(5 * 3 + 2) = Rational(-1, 8);
  const nosig::GeneralHvModel bad(sc, {"lambda0", "lambda1", "ghost"},
                                  weights);
  const auto report = nosig::check_lambda_independence(bad);
  REQUIRE(!report.holds);
  const auto& w = std::get<nosig::HiddenMassWitness>(*report.witness);
  CHECK(w.event == 2);
  CHECK(w.lambda == 2);
  CHECK(w.weight == Rational(1, 8));
}

TEST_CASE("parameter-independence of the section-3 model fails as printed") {
  const auto report =
      nosig::check_parameter_independence(nosig::section3_counterexample());
  REQUIRE(!report.holds);
  const auto& w = std::get<nosig::ConditionalWitness>(*report.witness);
  CHECK(w.context_a == 0);
  CHECK(w.context_b == 1);
  CHECK(w.common == Section({{0, 0}}));  // a = x0
  CHECK(w.lambda == 0);
  CHECK(w.lhs == 1);
  CHECK(w.rhs == 0);
}

TEST_CASE("parameter-independence holds for one-lambda product conditionals") {
  const Scenario sc = nosig::bell(2, 2, 2);
  const nosig::EventIndex events(sc);
  // h^lambda factors through fixed per-measurement outcome distributions, so
  // overlap conditionals cannot depend on the partner context.
  const Rational p[4][2] = {{Rational(1, 3), Rational(2, 3)},
                            {Rational(1, 2), Rational(1, 2)},
                            {Rational(1, 4), Rational(3, 4)},
                            {Rational(2, 5), Rational(3, 5)}};
  Vec weights(static_cast<Index>(events.count()));
  for (std::size_t e = 0; e < events.count(); ++e) {
    const auto [ctx, rank] = events.context_and_rank(e);
    const Section s = nosig::section_at(sc, sc.cover()[ctx], rank);
    Rational w = Rational(1, 4);
    for (const auto& [m, o] : s.entries()) {
      w *= p[m][o];
    }
    weights(static_cast<Index>(e)) = w;
  }
  const nosig::GeneralHvModel h(sc, {"only"}, weights);
  const auto report = nosig::check_parameter_independence(h);
  CHECK(report.holds);
  CHECK(report.vacuous.empty());
}

TEST_CASE("embedded schv models are parameter-independent") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SchvModel m = nosig::random_schv_model(nosig::bell(2, 2, 2), seed);
    const auto report =
        nosig::check_parameter_independence(nosig::embed_canonical(m));
    CHECK(report.holds);
  }
}

TEST_CASE("dimension agreement on the core scenarios") {
  const auto chsh = nosig::ns_dimension(nosig::bell(2, 2, 2));
  CHECK(chsh.combinatorial == 9);
  CHECK(chsh.rank == 9);
  CHECK(chsh.basis_rank == 9);
  CHECK(chsh.consistent());

  const auto tri = nosig::ns_dimension(nosig::triangle());
  CHECK(tri.combinatorial == 7);
  CHECK(tri.consistent());

  const auto single = nosig::ns_dimension(single_context());
  CHECK(single.combinatorial == 4);  // l^|X| via the binomial identity
  CHECK(single.consistent());
}

TEST_CASE("partial conditionals agree across containing contexts on NS models") {
  const EmpiricalModel pr = nosig::pr_box();
  const Scenario& sc = pr.scenario();
  // Every single-site marginal of the PR box is 1/2.
  for (int m = 0; m < 4; ++m) {
    const std::vector<int> domain = {m};
    for (int o = 0; o < 2; ++o) {
      CHECK(nosig::partial_conditional(pr, domain, Section({{m, o}})) ==
            Rational(1, 2));
    }
  }
  CHECK(nosig::partial_conditional(pr, std::vector<int>{}, Section()) == 1);
  CHECK_THROWS_AS((void)nosig::partial_conditional(
                      pr, std::vector<int>{0, 1}, Section({{0, 0}, {1, 0}})),
                  std::invalid_argument);
}

TEST_CASE("boundary reconstruction reproduces NS conditionals") {
  const EmpiricalModel models[] = {nosig::pr_box(),
                                   nosig::triangle_anticorrelated(),
                                   deterministic_model(nosig::bell(2, 2, 2))};
  for (const EmpiricalModel& m : models) {
    const Scenario& sc = m.scenario();
    const auto boundary = nosig::extract_boundary(m);
    const auto table = nosig::reconstruct_from_boundary(sc, boundary);
    for (int ctx = 0; ctx < sc.context_count(); ++ctx) {
      const auto pos = static_cast<std::size_t>(
          std::find(table.contexts.begin(), table.contexts.end(),
                    sc.cover()[ctx]) -
          table.contexts.begin());
      const Vec cond = m.conditional(ctx);
      for (Index r = 0; r < cond.size(); ++r) {
        CHECK(table.values[pos](r) == cond(r));
      }
    }
    // Intermediate levels match the directly computed partial marginals.
    for (std::size_t pos = 0; pos < table.contexts.size(); ++pos) {
      const auto& v = table.contexts[pos];
      const auto sections = nosig::sections_on(sc, v);
      for (std::size_t r = 0; r < sections.size(); ++r) {
        CHECK(table.values[pos](static_cast<Index>(r)) ==
              nosig::partial_conditional(m, v, sections[r]));
      }
    }
  }
}

TEST_CASE("reconstruction equals the inclusion-exclusion expansion") {
  // Arbitrary boundary data, not necessarily from a model: the recursion is
  // total and must match the closed form everywhere.
  const Scenario scenarios[] = {nosig::bell(2, 2, 2), nosig::triangle(),
                                Scenario({"x", "y"}, {{"x", "y"}},
                                         {"0", "1", "2"})};
  nosig::Rng rng(31);
  for (const Scenario& sc : scenarios) {
    nosig::BoundaryTable boundary;
    boundary.contexts = nosig::partial_contexts(sc);
    for (const auto& v : boundary.contexts) {
      const auto bounded = nosig::bounded_sections(sc, v, 0);
      Vec vals(static_cast<Index>(bounded.size()));
      for (Index i = 0; i < vals.size(); ++i) {
        vals(i) = v.empty() ? Rational(1)
                            : Rational(static_cast<long>(rng.below(9)) - 4, 4);
      }
      boundary.values.push_back(vals);
    }
    const auto table = nosig::reconstruct_from_boundary(sc, boundary);
    for (std::size_t pos = 0; pos < table.contexts.size(); ++pos) {
      const auto& v = table.contexts[pos];
      const auto sections = nosig::sections_on(sc, v);
      for (std::size_t r = 0; r < sections.size(); ++r) {
        CHECK(table.values[pos](static_cast<Index>(r)) ==
              inclusion_exclusion(sc, boundary, v, sections[r]));
      }
    }
  }
}

TEST_CASE("reconstruction validates its boundary") {
  const Scenario sc = nosig::triangle();
  nosig::BoundaryTable boundary;
  boundary.contexts = nosig::partial_contexts(sc);
  for (const auto& v : boundary.contexts) {
    boundary.values.push_back(
        Vec::Zero(static_cast<Index>(nosig::bounded_sections(sc, v, 0).size())));
  }
  // Empty-context value is 0, not 1.
  CHECK_THROWS_AS((void)nosig::reconstruct_from_boundary(sc, boundary),
                  std::invalid_argument);
  boundary.values.front()(0) = 1;
  CHECK_NOTHROW((void)nosig::reconstruct_from_boundary(sc, boundary));

  boundary.contexts.pop_back();
  boundary.values.pop_back();
  CHECK_THROWS_AS((void)nosig::reconstruct_from_boundary(sc, boundary),
                  std::invalid_argument);
}

TEST_CASE("boundary of the empty-elsewhere table is the point distribution") {
  // e0 with the empty-context entry 1 and all other boundary entries 0
  // reconstructs the table of the all-distinguished deterministic model.
  const Scenario sc = nosig::bell(2, 2, 2);
  nosig::BoundaryTable boundary;
  boundary.contexts = nosig::partial_contexts(sc);
  for (const auto& v : boundary.contexts) {
    Vec vals = Vec::Zero(
        static_cast<Index>(nosig::bounded_sections(sc, v, 0).size()));
    if (v.empty()) vals(0) = 1;
    boundary.values.push_back(vals);
  }
  const auto table = nosig::reconstruct_from_boundary(sc, boundary);
  const EmpiricalModel det = deterministic_model(sc);
  for (int ctx = 0; ctx < sc.context_count(); ++ctx) {
    const auto pos = static_cast<std::size_t>(
        std::find(table.contexts.begin(), table.contexts.end(),
                  sc.cover()[ctx]) -
        table.contexts.begin());
    const Vec cond = det.conditional(ctx);
    for (Index r = 0; r < cond.size(); ++r) {
      CHECK(table.values[pos](r) == cond(r));
    }
  }
}
