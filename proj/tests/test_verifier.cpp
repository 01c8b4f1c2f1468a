#include <doctest.h>

#include "pmult/constructor_small.hpp"
#include "pmult/verifier.hpp"

using namespace pmult;

namespace {

SignSequence copy_of(const SignSequence& s) {
  SignSequence out(s.primes(), s.horizon());
  for (u64 n = 1; n <= s.horizon(); ++n) out.set(n, s.at(n));
  for (u64 p : s.primes().primes()) out.set_prime_sign(p, s.prime_sign(p));
  return out;
}

SignSequence general(const Construction& c, u64 n) {
  std::vector<int> signs(c.primes.size(), 1);
  return materialize(finalize(c, signs, nullptr, n), n);
}

}  // namespace

TEST_CASE("multiplicativity") {
  const SignSequence s = construct_p23(6000);
  CHECK(check_multiplicativity(s).passed());
  CHECK(check_multiplicativity(s, 8).passed());
  CHECK(check_partial_sum_bound(s, 2).passed());
  CHECK(check_zero_at_multiples(s, 6).passed());

  SignSequence bad = copy_of(s);
  bad.set(4, -s.at(4));
  for (unsigned threads : {1u, 8u}) {
    const auto rep = check_multiplicativity(bad, threads);
    REQUIRE_FALSE(rep.passed());
    CHECK(rep.checks[0].witness == 4u);
    CHECK(rep.checks[0].detail == "p=2,n=2");
  }

  SignSequence ones(PrimeSet{2, 3, 5}, 1000);
  for (u64 n = 1; n <= 1000; ++n) ones.set(n, 1);
  for (u64 p : {2, 3, 5}) ones.set_prime_sign(p, 1);
  CHECK(check_multiplicativity(ones).passed());
  const auto w = dyadic_windows(1000, 10);
  CHECK_FALSE(check_bounded(ones, w).passed());
  CHECK_FALSE(check_partial_sum_bound(ones, 2).passed());
  CHECK(check_partial_sum_bound(ones, 2).checks[0].witness == 3u);
}

TEST_CASE("dyadic windows") {
  const auto w = dyadic_windows(100, 10);
  REQUIRE(w.size() == 5);
  CHECK(w[0].first == 1);
  CHECK(w[0].last == 10);
  CHECK(w[1].first == 10);
  CHECK(w[1].last == 20);
  CHECK(w.back().last == 100);
  CHECK_THROWS_AS(dyadic_windows(100, 0), UsageError);
}

TEST_CASE("bounded on the {2,3} sequence") {
  const SignSequence s = construct_p23(100000);
  const Window w[] = {{1, 1000}, {1000, 100000}};
  const auto rep = check_bounded(s, w);
  CHECK(rep.passed());
  CHECK(rep.checks[0].detail == "[1,1000]=2;[1000,100000]=2");
  CHECK(rep.sup_abs() == 2);
}

TEST_CASE("bounded on the {2,3,5} program") {
  const u64 n = 1920 * 256;
  const SignSequence s = construct_p235(n);
  const auto w = dyadic_windows(n, 1920);
  // The sup climbs from 7 to 10 before 8 b_1 and stays there.
  const auto early = check_bounded(s, w, 2 * 1920);
  CHECK_FALSE(early.passed());
  CHECK(early.checks[0].violation->expected == 7);
  CHECK(early.checks[0].violation->actual == 8);
  CHECK(check_bounded(s, w, 8 * 1920).passed());
  CHECK(check_bounded(s, w, 8 * 1920).sup_abs() == 10);
  CHECK(check_zero_at_multiples(s, 1920).passed());
  CHECK(check_multiplicativity(s, 4).passed());
}

TEST_CASE("relations check reports the first broken relation") {
  const u64 n = 1920 * 4;
  const RuleProgram prog = Program235{}.rules(n);
  const SignSequence s = construct_p235(n);
  CHECK(check_relations(s, prog.relations).passed());
  const Relation& r = prog.relations[prog.relations.size() / 2];
  SignSequence bad = copy_of(s);
  bad.set(r.target, -s.at(r.target));
  const auto rep = check_relations(bad, prog.relations);
  REQUIRE_FALSE(rep.passed());
  CHECK(rep.checks[0].witness.has_value());
}

TEST_CASE("conditions I-IV") {
  for (const PrimeSet& ps : {PrimeSet{2, 3, 5}, PrimeSet{3, 5, 7}}) {
    const Construction c = build_levels(ps);
    CHECK(check_conditions(c, 4 * c.period()).passed());
  }
  Construction broken = build_levels({2, 3, 5});
  auto& rel = broken.levels.back().block_relations;
  rel.push_back({rel.front().source + 2, rel.front().target, LevelStep::Absorb});
  CHECK_FALSE(check_conditions(broken, 4 * broken.period()).passed());
}

TEST_CASE("condition V") {
  const Construction c = build_levels({2, 3, 5});
  const auto base = check_condition_V(c, 2, 100, 0, 30 * 50);
  CHECK(base.passed());
  CHECK(check_condition_V(c, 1, 100, 0, 4 * 1920).passed());
  CHECK(check_condition_V(c, 2, 0, 0, 30 * 50).passed());

  // The same seed reproduces the report; threads do not change it.
  CHECK(to_json(check_condition_V(c, 1, 20, 5, 4 * 1920)) == to_json(check_condition_V(c, 1, 20, 5, 4 * 1920, 8)));

  Construction dropped = c;
  dropped.levels.front().block_relations.erase(dropped.levels.front().block_relations.begin() + 2);
  CHECK_FALSE(check_condition_V(dropped, 2, 100, 0, 30 * 50).passed());
  Construction dropped1 = c;
  dropped1.levels.back().block_relations.pop_back();
  CHECK_FALSE(check_condition_V(dropped1, 1, 100, 0, 4 * 1920).passed());
}

TEST_CASE("telescoping") {
  const Construction c = build_levels({2, 3, 5});
  const u64 n = 1920 * 8;
  const SignSequence s = general(c, n);
  const auto rep = check_telescoping(s, c, 1);
  CHECK(rep.passed());

  // Oracle: sum the chains directly.
  for (const auto& ch : telescoping_chains(c, 1, n)) {
    int t = 0;
    for (u64 x : ch.terms) t += s.at(x);
    CHECK(t == (ch.length % 2 ? 0 : s.at(ch.origin)));
  }

  const auto chains = telescoping_chains(c, 1, n);
  const auto odd = std::find_if(chains.begin(), chains.end(), [](const auto& ch) { return ch.length % 2 == 1; });
  REQUIRE(odd != chains.end());
  SignSequence bad = copy_of(s);
  bad.set(odd->terms.back(), -s.at(odd->terms.back()));
  CHECK_FALSE(check_telescoping(bad, c, 1).passed());
}

TEST_CASE("report json") {
  const SignSequence s = construct_p23(600);
  VerificationReport rep = check_multiplicativity(s);
  rep.append(check_partial_sum_bound(s, 1));
  const auto j = to_json(rep);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["check"] == "multiplicativity");
  CHECK(j[0]["status"] == "pass");
  CHECK(j[0]["first_violation"].is_null());
  CHECK(j[1]["status"] == "fail");
  CHECK(j[1]["first_violation"]["n"] == 2);
  CHECK(j[1]["first_violation"]["actual"] == 2);
  CHECK_FALSE(rep.passed());
  CHECK(rep.first_violation()->n == 2);
}
