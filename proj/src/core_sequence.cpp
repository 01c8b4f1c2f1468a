#include "pmult/core_sequence.hpp"

#include <algorithm>
#include <string>

namespace pmult {

PrimeSet::PrimeSet(std::vector<u64> primes) : primes_(std::move(primes)) {
  if (primes_.empty()) throw UsageError("prime set must not be empty");
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (!is_prime(primes_[i]))
      throw UsageError(std::to_string(primes_[i]) + " is not prime");
    if (i > 0 && primes_[i] <= primes_[i - 1])
      throw UsageError("primes must be distinct and strictly ascending");
    product_ = checked_mul(product_, primes_[i]);
  }
}

bool PrimeSet::contains(u64 p) const {
  return std::binary_search(primes_.begin(), primes_.end(), p);
}

u64 PrimeSet::coprime_part() const {
  return primes_.size() < 3 ? 1 : product_of(0, primes_.size() - 2);
}

u64 PrimeSet::product_of(std::size_t first, std::size_t last) const {
  u64 r = 1;
  for (std::size_t i = first; i < last && i < primes_.size(); ++i) r = checked_mul(r, primes_[i]);
  return r;
}

PrimeSet PrimeSet::suffix(std::size_t first) const {
  return PrimeSet(std::vector<u64>(primes_.begin() + static_cast<std::ptrdiff_t>(first), primes_.end()));
}

RoughFactorization rough_decompose(u64 n, const PrimeSet& primes) {
  if (n == 0) throw UsageError("rough_decompose: n must be positive");
  RoughFactorization out;
  out.exponents.assign(primes.size(), 0);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    while (n % primes[i] == 0) {
      n /= primes[i];
      ++out.exponents[i];
    }
  }
  out.rough = n;
  return out;
}

RoughPart strip_primes(u64 n, std::span<const u64> primes, std::span<const int> signs) {
  int sign = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    while (n % primes[i] == 0) {
      n /= primes[i];
      sign *= signs[i];
    }
  }
  return {n, sign};
}

SignSequence::SignSequence(PrimeSet primes, u64 horizon)
    : primes_(std::move(primes)), horizon_(horizon), values_(horizon + 1, kUnset) {
  if (horizon == 0) throw UsageError("horizon must be at least 1");
}

void SignSequence::set(u64 n, int value) {
  if (n == 0 || n > horizon_) throw UsageError("index " + std::to_string(n) + " outside [1, N]");
  if (value != 1 && value != -1) throw UsageError("sequence values must be +1 or -1");
  values_[n] = static_cast<Sign>(value);
}

int SignSequence::prime_sign(u64 p) const {
  if (p <= horizon_ && values_[p] != kUnset) return values_[p];
  auto it = prime_signs_.find(p);
  if (it == prime_signs_.end()) throw UnsetValue("f(" + std::to_string(p) + ") is not set");
  return it->second;
}

void SignSequence::set_prime_sign(u64 p, int value) {
  if (!primes_.contains(p)) throw UsageError(std::to_string(p) + " is not in the prime set");
  if (value != 1 && value != -1) throw UsageError("prime signs must be +1 or -1");
  prime_signs_[p] = value;
}

std::vector<int> SignSequence::prime_signs() const {
  std::vector<int> out;
  out.reserve(primes_.size());
  for (u64 p : primes_.primes()) out.push_back(prime_sign(p));
  return out;
}

int eval(const SignSequence& seq, u64 n) {
  if (n == 0 || n > seq.horizon()) throw UsageError("eval: index outside [1, N]");
  const auto signs = seq.prime_signs();
  const RoughPart rp = strip_primes(n, seq.primes().primes(), signs);
  if (!seq.is_set(rp.rough))
    throw UnsetValue("rough part " + std::to_string(rp.rough) + " of " + std::to_string(n) + " is unset");
  return rp.sign * seq.at(rp.rough);
}

PartialSumProfile prefix_sums(const SignSequence& seq, u64 stride) {
  if (stride == 0) throw UsageError("checkpoint stride must be positive");
  PartialSumProfile out;
  i64 s = 0;
  for (u64 n = 1; n <= seq.horizon(); ++n) {
    if (!seq.is_set(n)) throw UnsetValue("prefix_sums: gap at " + std::to_string(n));
    s += seq.at(n);
    const i64 a = s < 0 ? -s : s;
    if (a > out.sup_abs) {
      out.sup_abs = a;
      out.argmax = n;
    }
    if (n % stride == 0 || n == seq.horizon()) out.checkpoints.emplace_back(n, s);
  }
  out.final_sum = s;
  return out;
}

std::vector<i64> running_sums(const SignSequence& seq) {
  std::vector<i64> s(seq.horizon() + 1, 0);
  for (u64 n = 1; n <= seq.horizon(); ++n) {
    if (!seq.is_set(n)) throw UnsetValue("running_sums: gap at " + std::to_string(n));
    s[n] = s[n - 1] + seq.at(n);
  }
  return s;
}

}  // namespace pmult
