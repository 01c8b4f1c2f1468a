#include <doctest.h>

#include <random>
#include <sstream>

#include "pmult/constructor_small.hpp"
#include "pmult/core_sequence.hpp"
#include "pmult/sequence_io.hpp"

using namespace pmult;

namespace {

// Exponent of p in n by repeated division.
unsigned valuation(u64 n, u64 p) {
  unsigned e = 0;
  while (n % p == 0) n /= p, ++e;
  return e;
}

// Smallest prime factor by trial division.
u64 smallest_factor(u64 n) {
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

SignSequence table23() {
  SignSequence s(PrimeSet{2, 3}, 12);
  const int v[] = {0, 1, 1, -1, 1, -1, -1, -1, 1, 1, -1, 1, -1};
  for (u64 n = 1; n <= 12; ++n) s.set(n, v[n]);
  s.set_prime_sign(2, 1);
  s.set_prime_sign(3, -1);
  return s;
}

}  // namespace

TEST_CASE("PrimeSet validation and products") {
  CHECK_THROWS_AS(PrimeSet(std::vector<u64>{}), UsageError);
  CHECK_THROWS_AS((PrimeSet{2, 4}), UsageError);
  CHECK_THROWS_AS((PrimeSet{3, 2}), UsageError);
  CHECK_THROWS_AS((PrimeSet{3, 3}), UsageError);
  const PrimeSet p{2, 3, 5, 7};
  CHECK(p.product() == 210);
  CHECK(p.coprime_part() == 6);
  CHECK(p.product_of(1, 3) == 15);
  CHECK(p.suffix(2).product() == 35);
  CHECK(PrimeSet{2, 3}.coprime_part() == 1);
  CHECK(p.contains(7));
  CHECK_FALSE(p.contains(11));
}

TEST_CASE("rough_decompose examples") {
  auto a = rough_decompose(12, {2, 3});
  CHECK(a.exponents == std::vector<unsigned>{2, 1});
  CHECK(a.rough == 1);
  auto b = rough_decompose(1, {2, 3, 5});
  CHECK(b.exponents == std::vector<unsigned>{0, 0, 0});
  CHECK(b.rough == 1);
  auto c = rough_decompose(227, {2, 3, 5});
  CHECK(c.exponents == std::vector<unsigned>{0, 0, 0});
  CHECK(c.rough == 227);
  CHECK(smallest_factor(227) == 227);
  CHECK_THROWS_AS(rough_decompose(0, {2}), UsageError);
}

TEST_CASE("rough_decompose reconstructs every n up to 10^6") {
  const PrimeSet sets[] = {{2}, {2, 3}, {2, 3, 5}, {3, 5, 7}, {2, 3, 5, 7}};
  for (const PrimeSet& ps : sets) {
    bool ok = true;
    for (u64 n = 1; n <= 1000000 && ok; ++n) {
      const auto d = rough_decompose(n, ps);
      u64 back = d.rough;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (d.exponents[i] != valuation(n, ps[i])) ok = false;
        back *= checked_pow(ps[i], d.exponents[i]);
      }
      for (u64 p : ps.primes())
        if (d.rough % p == 0) ok = false;
      if (back != n) ok = false;
    }
    CHECK(ok);
  }
}

TEST_CASE("eval follows the prime factorization") {
  const SignSequence s = table23();
  CHECK(eval(s, 1) == 1);
  CHECK(eval(s, 6) == -1);
  CHECK(eval(s, 12) == -1);
  // f(12) = f(2)^2 f(3) f(1)
  CHECK(eval(s, 12) == 1 * 1 * -1 * s.at(1));
  CHECK_THROWS_AS(eval(s, 13), UsageError);
  SignSequence gap(PrimeSet{2}, 4);
  gap.set_prime_sign(2, -1);
  gap.set(1, 1);
  CHECK(eval(gap, 4) == 1);
  CHECK_THROWS_AS(eval(gap, 3), UnsetValue);
}

TEST_CASE("prefix_sums examples and additivity") {
  SignSequence block(PrimeSet{2, 3}, 6);
  const int v[] = {0, 1, 1, -1, 1, -1, -1};
  for (u64 n = 1; n <= 6; ++n) block.set(n, v[n]);
  const auto prof = prefix_sums(block, 1);
  std::vector<i64> s;
  for (auto& [n, val] : prof.checkpoints) s.push_back(val);
  CHECK(s == std::vector<i64>{1, 2, 1, 2, 1, 0});
  CHECK(prof.sup_abs == 2);
  CHECK(prof.final_sum == 0);

  SignSequence ones(PrimeSet{2}, 5);
  for (u64 n = 1; n <= 5; ++n) ones.set(n, 1);
  CHECK(prefix_sums(ones, 2).final_sum == 5);
  CHECK_THROWS_AS(prefix_sums(ones, 0), UsageError);

  const SignSequence seq = construct_p23(6000);
  const auto run = running_sums(seq);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    u64 a = rng() % 6000, b = rng() % 6000;
    if (a > b) std::swap(a, b);
    i64 direct = 0;
    for (u64 n = a + 1; n <= b; ++n) direct += seq.at(n);
    CHECK(run[b] - run[a] == direct);
  }
}

TEST_CASE("SignSequence rejects bad values") {
  CHECK_THROWS_AS(SignSequence(PrimeSet{2}, 0), UsageError);
  SignSequence s(PrimeSet{2}, 3);
  CHECK_THROWS_AS(s.set(0, 1), UsageError);
  CHECK_THROWS_AS(s.set(4, 1), UsageError);
  CHECK_THROWS_AS(s.set(1, 0), UsageError);
  CHECK_THROWS_AS(s.set_prime_sign(3, 1), UsageError);
  CHECK_THROWS_AS(s.prime_sign(2), UnsetValue);
}

TEST_CASE("strip_primes") {
  const u64 ps[] = {2, 3};
  const int signs[] = {-1, 1};
  auto r = strip_primes(72, ps, signs);  // 2^3 3^2
  CHECK(r.rough == 1);
  CHECK(r.sign == -1);
  r = strip_primes(5 * 4, ps, signs);
  CHECK(r.rough == 5);
  CHECK(r.sign == 1);
}

TEST_CASE("checked arithmetic raises OverflowError") {
  CHECK_THROWS_AS(checked_mul(u64{1} << 40, u64{1} << 30), OverflowError);
  CHECK_THROWS_AS(checked_add(~u64{0}, u64{1}), OverflowError);
  CHECK_THROWS_AS(checked_pow(10, 20), OverflowError);
  CHECK(checked_pow(10, 19) == 10000000000000000000ull);
}

TEST_CASE("CSV and binary round trips") {
  const SignSequence seq = construct_p23(1003);
  std::stringstream csv;
  write_csv(seq, csv);
  CHECK(csv.str().rfind("n,value\n1,1\n", 0) == 0);
  const SignSequence a = read_csv(csv, seq.primes());
  std::stringstream bin;
  write_binary(seq, bin);
  CHECK(bin.str().size() == 8 + (1003 + 7) / 8);
  const SignSequence b = read_binary(bin, seq.primes());
  REQUIRE(a.horizon() == 1003);
  REQUIRE(b.horizon() == 1003);
  for (u64 n = 1; n <= 1003; ++n) {
    CHECK(a.at(n) == seq.at(n));
    CHECK(b.at(n) == seq.at(n));
  }
  CHECK(a.prime_sign(2) == seq.prime_sign(2));
  CHECK(b.prime_sign(3) == seq.prime_sign(3));

  std::stringstream bad("n,value\n1,1\n3,1\n");
  CHECK_THROWS_AS(read_csv(bad, seq.primes()), UsageError);
  std::stringstream badv("n,value\n1,2\n");
  CHECK_THROWS_AS(read_csv(badv, seq.primes()), UsageError);
  std::stringstream shortbin(std::string("\x05\0\0\0\0\0\0\0", 8));
  CHECK_THROWS_AS(read_binary(shortbin, seq.primes()), UsageError);
}
