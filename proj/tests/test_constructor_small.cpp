#include <doctest.h>

#include "pmult/constructor_small.hpp"

using namespace pmult;

namespace {

// f(pn) = f(p) f(n) for p in P, checked by trial division on every n.
bool multiplicative(const SignSequence& s) {
  const auto signs = s.prime_signs();
  for (u64 n = 1; n <= s.horizon(); ++n)
    for (std::size_t i = 0; i < s.primes().size(); ++i) {
      const u64 p = s.primes()[i];
      if (n % p == 0 && s.at(n) != signs[i] * s.at(n / p)) return false;
    }
  return s.at(1) == 1;
}

i64 sum_to(const SignSequence& s, u64 x) {
  i64 t = 0;
  for (u64 n = 1; n <= x; ++n) t += s.at(n);
  return t;
}

}  // namespace

TEST_CASE("p23 first blocks") {
  const SignSequence s6 = construct_p23(6);
  const int want[] = {1, 1, -1, 1, -1, -1};
  for (u64 n = 1; n <= 6; ++n) CHECK(s6.at(n) == want[n - 1]);
  CHECK(sum_to(s6, 6) == 0);

  std::vector<Block23State> blocks;
  const SignSequence s12 = construct_p23(12, {}, &blocks);
  CHECK(s12.at(8) == 1);
  CHECK(s12.at(9) == 1);
  CHECK(s12.at(10) == -1);
  CHECK(s12.at(12) == -1);
  CHECK(s12.at(7) == -1);
  CHECK(s12.at(11) == 1);
  CHECK(sum_to(s12, 12) == 0);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[1].predetermined == std::array<int, 4>{1, 1, -1, -1});

  // Exhaustive oracle over (f(7), f(11)): exactly the pairs giving both halves ±1
  // with opposite sums; the construction picks one of them.
  int admissible = 0;
  bool chosen_ok = false;
  for (int a : {-1, 1})
    for (int b : {-1, 1}) {
      const int lo = a + 1 + 1, hi = -1 + b + -1;
      if ((lo == 1 || lo == -1) && hi == -lo) {
        ++admissible;
        if (a == s12.at(7) && b == s12.at(11)) chosen_ok = true;
      }
    }
  CHECK(admissible >= 1);
  CHECK(chosen_ok);
}

TEST_CASE("p23 blocks satisfy the block relation and avoid the excluded case") {
  std::vector<Block23State> blocks;
  const u64 n = 60000;
  const SignSequence s = construct_p23(n, {}, &blocks);
  CHECK(multiplicative(s));
  bool rel = true, case5 = false;
  i64 sum = 0, sup = 0;
  for (u64 b = 0; 6 * b + 6 <= n; ++b) {
    const u64 base = 6 * b;
    const int lo = s.at(base + 1) + s.at(base + 2) + s.at(base + 3);
    const int hi = s.at(base + 4) + s.at(base + 5) + s.at(base + 6);
    if ((lo != 1 && lo != -1) || hi != -lo) rel = false;
    if (s.at(base + 2) == s.at(base + 3) && s.at(base + 3) == s.at(base + 4) && s.at(base + 4) == s.at(base + 6))
      case5 = true;
  }
  for (u64 m = 1; m <= n; ++m) {
    sum += s.at(m);
    sup = std::max(sup, sum < 0 ? -sum : sum);
    if (m % 6 == 0) CHECK(sum == 0);
  }
  CHECK(rel);
  CHECK_FALSE(case5);
  CHECK(sup == 2);
  for (const auto& b : blocks) {
    if (b.block == 0) CHECK(b.rule == Block23Case::Seed);
    else CHECK((b.rule >= Block23Case::Case1 && b.rule <= Block23Case::Case4));
  }
}

TEST_CASE("p23 rejects bad input") {
  CHECK_THROWS_AS(construct_p23(5), UsageError);
  CHECK_THROWS_AS(construct_p23(60, Seeds23{1, 1, -1, 1}), UsageError);
  CHECK_THROWS_AS(construct_p23(60, Seeds23{-1, 1, -1, -1}), UsageError);
  CHECK_THROWS_AS(construct_p23(60, Seeds23{1, 0, -1, -1}), UsageError);
}

TEST_CASE("p23 trace lists each assigned entry") {
  std::vector<TraceEntry> trace;
  const SignSequence s = construct_p23(60, {}, nullptr, &trace);
  CHECK(trace.size() == 2 * 9);
  for (const auto& t : trace) {
    CHECK(t.target <= 60);
    if (t.source) CHECK(s.at(t.target) == -s.at(t.source));
    else CHECK(t.rule == "case4");
  }
}

TEST_CASE("p235 odd residues at m = 0") {
  const SignSequence s = construct_p235(1920);
  CHECK(s.at(1) == 1);
  CHECK(s.at(7) == -1);
  CHECK(s.at(11) == -1);
  CHECK(s.at(13) == 1);
  CHECK(s.at(19) == -1);
  CHECK(s.at(23) == -1);
  CHECK(s.at(29) == 1);
  CHECK(s.at(17) == 1);
}

TEST_CASE("p235 relations hold verbatim") {
  const u64 n = 1920 * 100;
  const SignSequence s = construct_p235(n);
  CHECK(multiplicative(s));
  CHECK(s.prime_sign(2) == -1);
  CHECK(s.prime_sign(3) == -1);
  CHECK(s.prime_sign(5) == 1);

  auto f = [&](u64 i) { return static_cast<int>(s.at(i)); };
  bool odd = true, dbl = true, m8 = true, m32 = true, m64 = true, lp = true, alt = true, blocks = true;
  const std::pair<u64, u64> pairs[] = {{1, 3}, {7, 5}, {11, 9}, {13, 15}, {19, 21}, {23, 25}, {29, 27}};
  for (u64 m = 0; 30 * m + 30 <= n; ++m) {
    for (auto [k, k2] : pairs)
      if (f(30 * m + k) != -f(30 * m + k2)) odd = false;
    int t = 0;
    for (u64 i = 1; i <= 15; ++i) t += f(30 * m + 2 * i - 1);
    if (t != f(30 * m + 17)) blocks = false;
  }
  for (u64 m = 0; 30 * (2 * m) + 34 <= n; ++m)
    if (f(30 * (2 * m) + 17) != -f(30 * (2 * m) + 34)) dbl = false;
  for (u64 m = 0; 30 * (8 * m + 5) + 17 <= n; ++m)
    if (f(30 * (8 * m + 5) + 17) != -f(30 * (8 * m + 4) + 17)) m8 = false;
  for (u64 m = 0; 30 * (32 * m + 17) + 17 <= n; ++m)
    if (f(30 * (32 * m + 17) + 17) != -f(30 * (32 * m + 16) + 17)) m32 = false;
  for (u64 m = 0; 30 * (64 * m + 1) + 17 <= n; ++m)
    if (f(30 * (64 * m + 1) + 17) != -f(30 * (64 * m) + 17)) m64 = false;
  const unsigned j[] = {3, 7, 9, 11, 15, 19, 23, 25, 27, 31, 33, 35, 39, 41, 43, 47, 51, 55, 57, 59, 63};
  for (u64 m = 0; 1920 * (m + 1) <= n; ++m)
    for (unsigned i = 1; i <= 21; ++i) {
      const u64 x = 30 * (64 * m + j[i - 1]) + 17;
      if (i <= 15) {
        if (f(x) != -f(1920 * m + 128 * i)) lp = false;
      } else if (f(x) != (i % 2 ? -1 : 1)) {
        alt = false;
      }
    }
  CHECK(odd);
  CHECK(blocks);
  CHECK(dbl);
  CHECK(m8);
  CHECK(m32);
  CHECK(m64);
  CHECK(lp);
  CHECK(alt);
  for (u64 m = 1; 1920 * m <= n; ++m) CHECK(sum_to(s, 1920 * m) == 0);
}

TEST_CASE("p235 program variants") {
  Program235 printed;
  printed.j_list = kJListPrinted;
  CHECK_THROWS_AS(construct_p235(1920 * 2, printed), RelationConflict);

  Program235 l16;
  l16.l_pair_count = 16;
  const SignSequence s = construct_p235(1920 * 2, l16);
  CHECK(sum_to(s, 3840) == -2);

  Program235 neg;
  neg.f17 = -1;
  const SignSequence t = construct_p235(1920 * 4, neg);
  CHECK(t.at(17) == -1);
  for (u64 m = 1; m <= 4; ++m) CHECK(sum_to(t, 1920 * m) == 0);

  Program235 too_many;
  too_many.l_pair_count = 22;
  CHECK_THROWS_AS(construct_p235(1920, too_many), UsageError);
  CHECK_THROWS_AS(construct_p235(1919), UsageError);
}

TEST_CASE("rule235 names") {
  CHECK(rule235_name(static_cast<std::uint16_t>(Rule235::Odd)) != rule235_name(static_cast<std::uint16_t>(Rule235::LPair)));
}
