#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "pmult/checked.hpp"

namespace pmult {

/// Storage type for one sequence entry: -1, +1, or 0 for "not yet assigned".
using Sign = std::int8_t;
inline constexpr Sign kUnset = 0;

/// Ordered finite set of distinct primes p_1 < ... < p_k with its product.
class PrimeSet {
 public:
  PrimeSet() = default;
  explicit PrimeSet(std::vector<u64> primes);
  PrimeSet(std::initializer_list<u64> primes) : PrimeSet(std::vector<u64>(primes)) {}

  std::span<const u64> primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  bool empty() const { return primes_.empty(); }
  u64 operator[](std::size_t i) const { return primes_[i]; }
  bool contains(u64 p) const;

  /// P = p_1 * ... * p_k.
  u64 product() const { return product_; }
  /// Product of p_1 .. p_{k-2}; 1 when k < 3.
  u64 coprime_part() const;
  /// Product of primes_[first, last).
  u64 product_of(std::size_t first, std::size_t last) const;
  /// The primes with index >= first, as their own set.
  PrimeSet suffix(std::size_t first) const;

  bool operator==(const PrimeSet& other) const { return primes_ == other.primes_; }

 private:
  std::vector<u64> primes_;
  u64 product_ = 1;
};

/// n = prod p_i^{e_i} * rough, gcd(rough, P) = 1.
struct RoughFactorization {
  std::vector<unsigned> exponents;
  u64 rough = 1;
};

RoughFactorization rough_decompose(u64 n, const PrimeSet& primes);

/// Rough part of n with respect to `primes`, and the product of f(p)^e over the
/// stripped prime powers. `signs[i]` is f(primes[i]).
struct RoughPart {
  u64 rough;
  int sign;
};
RoughPart strip_primes(u64 n, std::span<const u64> primes, std::span<const int> signs);

/// A ±1 table on [1..N] plus the signs f(p) for p in P.
class SignSequence {
 public:
  SignSequence() = default;
  SignSequence(PrimeSet primes, u64 horizon);

  const PrimeSet& primes() const { return primes_; }
  u64 horizon() const { return horizon_; }

  Sign at(u64 n) const { return values_[n]; }
  bool is_set(u64 n) const { return values_[n] != kUnset; }
  void set(u64 n, int value);

  /// f(p) for p in P. Read from the table when p <= N.
  int prime_sign(u64 p) const;
  void set_prime_sign(u64 p, int value);
  std::vector<int> prime_signs() const;

  /// Entries 1..N (index 0 is unused).
  std::span<const Sign> values() const { return values_; }
  std::span<Sign> mutable_values() { return values_; }

 private:
  PrimeSet primes_;
  u64 horizon_ = 0;
  std::vector<Sign> values_;
  std::map<u64, int> prime_signs_;
};

/// f(n) from the rough decomposition: prod f(p_i)^{e_i} * v[m].
int eval(const SignSequence& seq, u64 n);

struct PartialSumProfile {
  std::vector<std::pair<u64, i64>> checkpoints;
  i64 sup_abs = 0;
  u64 argmax = 0;
  i64 final_sum = 0;
};

/// Running sums S(n); checkpoints are recorded every `stride` indices and at N.
PartialSumProfile prefix_sums(const SignSequence& seq, u64 stride);

/// S(0..N) as a dense vector.
std::vector<i64> running_sums(const SignSequence& seq);

}  // namespace pmult
