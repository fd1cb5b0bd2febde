#include "nosig/generators.hpp"

#include <algorithm>
#include <iterator>
#include <utility>
#include <vector>

#include "nosig/analysis.hpp"

namespace nosig {

Scenario bell(int parties, int settings, int outcomes) {
  if (parties < 1 || settings < 1 || outcomes < 2) {
    throw std::invalid_argument(
        "bell: need parties >= 1, settings >= 1, outcomes >= 2");
  }
  if (parties > 26) {
    throw std::invalid_argument("bell: at most 26 parties are labelable");
  }
  std::vector<std::string> measurements;
  for (int p = 0; p < parties; ++p) {
    for (int s = 0; s < settings; ++s) {
      measurements.push_back(std::string(1, static_cast<char>('a' + p)) +
                             std::to_string(s));
    }
  }
  // One setting per party; the last party's setting varies fastest.
  std::vector<std::vector<std::string>> cover;
  std::vector<int> choice(static_cast<std::size_t>(parties), 0);
  while (true) {
    std::vector<std::string> context;
    for (int p = 0; p < parties; ++p) {
      context.push_back(
          measurements[static_cast<std::size_t>(p * settings) +
                       static_cast<std::size_t>(choice[static_cast<std::size_t>(p)])]);
    }
    cover.push_back(std::move(context));
    int pos = parties - 1;
    while (pos >= 0 && ++choice[static_cast<std::size_t>(pos)] == settings) {
      choice[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  std::vector<std::string> outs;
  for (int o = 0; o < outcomes; ++o) outs.push_back(std::to_string(o));
  return Scenario(std::move(measurements), std::move(cover), std::move(outs));
}

Scenario triangle() {
  return Scenario({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}},
                  {"0", "1"});
}

EmpiricalModel pr_box() {
  Scenario sc = bell(2, 2, 2);
  const EventIndex events(sc);
  Vec table = Vec::Zero(static_cast<Index>(events.count()));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const int ctx = i * 2 + j;
      for (int oa = 0; oa < 2; ++oa) {
        for (int ob = 0; ob < 2; ++ob) {
          if ((oa ^ ob) != (i & j)) continue;
          const std::size_t rank = static_cast<std::size_t>(oa * 2 + ob);
          table(static_cast<Index>(events.index_of(ctx, rank))) =
              Rational(1, 8);  // context weight 1/4 times conditional 1/2
        }
      }
    }
  }
  return EmpiricalModel(std::move(sc), std::move(table));
}

EmpiricalModel triangle_anticorrelated() {
  Scenario sc = triangle();
  const EventIndex events(sc);
  Vec table = Vec::Zero(static_cast<Index>(events.count()));
  for (int ctx = 0; ctx < 3; ++ctx) {
    // Section ranks 1 and 2 are the anti-correlated pair 01, 10.
    table(static_cast<Index>(events.index_of(ctx, 1))) = Rational(1, 6);
    table(static_cast<Index>(events.index_of(ctx, 2))) = Rational(1, 6);
  }
  return EmpiricalModel(std::move(sc), std::move(table));
}

GeneralHvModel section3_counterexample() {
  Scenario sc({"a", "b0", "b1"}, {{"a", "b0"}, {"a", "b1"}}, {"x0", "x1", "y"});
  const EventIndex events(sc);
  const std::vector<std::string> hidden = {"lambda0", "lambda1"};
  Vec weights = Vec::Zero(static_cast<Index>(events.count() * hidden.size()));
  // Rank of a two-measurement section with l = 3 is 3*o_first + o_second.
  const auto put = [&](int ctx, int a_out, int b_out, int lambda) {
    const std::size_t rank = static_cast<std::size_t>(3 * a_out + b_out);
    const std::size_t flat = events.index_of(ctx, rank) * hidden.size() +
                             static_cast<std::size_t>(lambda);
    weights(static_cast<Index>(flat)) = Rational(1, 4);
  };
  put(0, 0, 2, 0);  // (U, a:x0 b0:y, lambda0)
  put(1, 0, 2, 1);  // (V, a:x0 b1:y, lambda1)
  put(1, 1, 2, 0);  // (V, a:x1 b1:y, lambda0)
  put(0, 1, 2, 1);  // (U, a:x1 b0:y, lambda1)
  return GeneralHvModel(std::move(sc), hidden, std::move(weights));
}

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
  const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
  while (true) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

int Rng::below_int(int bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::below_int: bound <= 0");
  return static_cast<int>(below(static_cast<std::uint64_t>(bound)));
}

Rational Rng::unit_fraction(int max_den) {
  const std::uint64_t den = 1 + below(static_cast<std::uint64_t>(max_den));
  const std::uint64_t num = below(den + 1);
  return Rational(static_cast<unsigned long>(num)) /
         Rational(static_cast<unsigned long>(den));
}

Rng Rng::split() { return Rng(next_u64() ^ 0x6A09E667F3BCC909ULL); }

namespace {

std::size_t draw_index(Rng& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(bound)));
}

// Convex combination of at most |Omega| point masses with small integer
// numerators; repeated atoms merge.
Vec random_point_mixture(Rng& rng, std::size_t globals) {
  const std::size_t k = 1 + draw_index(rng, globals);
  std::vector<std::pair<std::size_t, std::uint64_t>> atoms;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t at = draw_index(rng, globals);
    const std::uint64_t num = 1 + rng.below(64);
    atoms.emplace_back(at, num);
    total += num;
  }
  Vec v = Vec::Zero(static_cast<Index>(globals));
  for (const auto& [at, num] : atoms) {
    v(static_cast<Index>(at)) += Rational(static_cast<unsigned long>(num)) /
                                 Rational(static_cast<unsigned long>(total));
  }
  return v;
}

Vec random_context_weights(Rng& rng, int contexts) {
  Vec raw(contexts);
  Rational total = 0;
  for (int c = 0; c < contexts; ++c) {
    raw(c) = Rational(static_cast<unsigned long>(1 + rng.below(64)));
    total += raw(c);
  }
  for (int c = 0; c < contexts; ++c) raw(c) /= total;
  return raw;
}

EmpiricalModel model_from_conditionals(const Scenario& scenario,
                                       const Vec& conditionals,
                                       const Vec& context_weights) {
  const EventIndex events(scenario);
  Vec table(conditionals.size());
  for (std::size_t e = 0; e < events.count(); ++e) {
    const auto [ctx, rank] = events.context_and_rank(e);
    table(static_cast<Index>(e)) =
        conditionals(static_cast<Index>(e)) * context_weights(ctx);
  }
  return EmpiricalModel(scenario, std::move(table));
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace

EmpiricalModel random_ns_model(const Scenario& scenario, std::uint64_t seed,
                               bool perturb, std::size_t cap) {
  Rng rng(seed);
  const Mat l = incidence_matrix(scenario, cap);
  const std::size_t globals = static_cast<std::size_t>(l.cols());

  const Vec v = random_point_mixture(rng, globals);
  Vec conditionals = l * v;

  if (perturb) {
    // Total-mass-zero direction: adding any multiple keeps every context
    // conditional summing to 1, so only nonnegativity constrains the scale.
    // The perturbed table can leave the local polytope; no-signalling is
    // preserved because the table stays in the image of L.
    Vec dir(static_cast<Index>(globals));
    Rational mean = 0;
    for (std::size_t g = 0; g < globals; ++g) {
      dir(static_cast<Index>(g)) =
          Rational(static_cast<long>(rng.below(129)) - 64) / Rational(64);
      mean += dir(static_cast<Index>(g));
    }
    mean /= Rational(static_cast<unsigned long>(globals));
    for (std::size_t g = 0; g < globals; ++g) {
      dir(static_cast<Index>(g)) -= mean;
    }

    const Vec delta = l * dir;
    bool has_negative = false;
    Rational limit = 0;
    for (Index e = 0; e < delta.size(); ++e) {
      if (delta(e) < 0) {
        const Rational room = conditionals(e) / -delta(e);
        if (!has_negative || room < limit) limit = room;
        has_negative = true;
      }
    }
    if (has_negative && limit > 0) {
      conditionals += (limit * rng.unit_fraction()) * delta;
    }
  }

  const Vec weights = random_context_weights(rng, scenario.context_count());
  return model_from_conditionals(scenario, conditionals, weights);
}

EmpiricalModel random_signalling_model(const Scenario& scenario,
                                       std::uint64_t seed, std::size_t cap) {
  const auto& cover = scenario.cover();
  int ctx_a = -1;
  int ctx_b = -1;
  std::vector<int> common;
  for (int i = 0; i < scenario.context_count() && ctx_a < 0; ++i) {
    for (int j = i + 1; j < scenario.context_count(); ++j) {
      common = intersect(cover[i], cover[j]);
      if (!common.empty()) {
        ctx_a = i;
        ctx_b = j;
        break;
      }
    }
  }
  if (ctx_a < 0) {
    throw UnsupportedScenarioError(
        "random_signalling_model: no two contexts share a measurement");
  }

  const EmpiricalModel base = random_ns_model(scenario, seed, true, cap);
  Vec conditionals = base.conditional_vector();
  Vec weights(scenario.context_count());
  for (int c = 0; c < scenario.context_count(); ++c) {
    weights(c) = base.context_mass(c);
  }

  // Move half of the first positive conditional entry of ctx_a to the section
  // differing at one shared measurement. The marginal over the overlap changes
  // on one side only, so the (ctx_a, ctx_b) equation fails.
  const EventIndex& events = base.events();
  const Vec cond_a = base.conditional(ctx_a);
  Index source = 0;
  while (cond_a(source) == 0) ++source;
  const Section s1 =
      section_at(scenario, cover[ctx_a], static_cast<std::size_t>(source));
  const int m = common.front();
  const int old_outcome = *s1.outcome_for(m);
  const Section s2 =
      override_outcome(s1, m, (old_outcome + 1) % scenario.outcome_count());
  const Rational delta = cond_a(source) / 2;
  conditionals(static_cast<Index>(
      events.index_of(ctx_a, static_cast<std::size_t>(source)))) -= delta;
  conditionals(static_cast<Index>(
      events.index_of(ctx_a, section_rank(scenario, s2)))) += delta;

  return model_from_conditionals(scenario, conditionals, weights);
}

SchvModel random_schv_model(const Scenario& scenario, std::uint64_t seed,
                            std::size_t cap) {
  Rng rng(seed);
  const BigInt count = global_count(scenario);
  if (count > BigInt(cap)) {
    throw EnumerationCapError(count, cap);
  }
  const std::size_t globals = count.convert_to<std::size_t>();
  const std::size_t cells =
      globals * static_cast<std::size_t>(scenario.context_count());
  Vec weights(static_cast<Index>(cells));
  Rational total = 0;
  for (std::size_t i = 0; i + 1 < cells; ++i) {
    const long num = static_cast<long>(rng.below(129)) - 64;
    const unsigned long den = 1 + static_cast<unsigned long>(rng.below(64));
    weights(static_cast<Index>(i)) = Rational(num) / Rational(den);
    total += weights(static_cast<Index>(i));
  }
  weights(static_cast<Index>(cells - 1)) = Rational(1) - total;
  return SchvModel(scenario, std::move(weights), cap);
}

}  // namespace nosig
