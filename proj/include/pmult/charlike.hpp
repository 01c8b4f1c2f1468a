#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "pmult/core_sequence.hpp"
#include "pmult/unit_value.hpp"
#include "vendor_json.hpp"

namespace pmult {

/// Kronecker symbol (a / n) for n >= 1.
int kronecker_symbol(i64 a, u64 n);

/// A Dirichlet character given by its table on residues 0..q-1.
class DirichletCharacter {
 public:
  /// Validates: values[a] is zero iff gcd(a, q) > 1, values[1] = 1 and
  /// values[a b mod q] = values[a] values[b].
  DirichletCharacter(u64 modulus, std::vector<UnitValue> values);

  /// n -> (n / q) for odd q >= 3.
  static DirichletCharacter quadratic(u64 q);
  static DirichletCharacter principal(u64 q);
  /// `{modulus, values:[{num,order}|0,...]}`
  static DirichletCharacter from_json(const nlohmann::json& j);

  u64 modulus() const { return modulus_; }
  /// lcm of the orders of the nonzero values.
  u64 order() const { return order_; }
  const std::vector<UnitValue>& values() const { return values_; }
  UnitValue operator()(u64 n) const { return values_[n % modulus_]; }

 private:
  u64 modulus_;
  u64 order_ = 1;
  std::vector<UnitValue> values_;
};

UnitValue character_eval(const DirichletCharacter& chi, u64 n);

/// Completely multiplicative f with f(n) = chi(n) for gcd(n, q) = 1 and
/// f(p) = overrides[p] for the primes p | q (zero when absent).
class CharLikeFunction {
 public:
  CharLikeFunction(DirichletCharacter chi, std::map<u64, UnitValue> overrides);

  const DirichletCharacter& character() const { return chi_; }
  const std::map<u64, UnitValue>& overrides() const { return overrides_; }
  /// Primes dividing the modulus.
  const PrimeSet& primes() const { return primes_; }
  /// Common order Q of every value, so sums live in Z[zeta_Q].
  u64 order() const { return order_; }

  UnitValue operator()(u64 n) const;
  /// True when some override is nonzero, so f is not a character.
  bool is_character_like() const;
  /// f with value 0 at every prime dividing `coprime_to`.
  CharLikeFunction restricted(u64 coprime_to) const;

 private:
  DirichletCharacter chi_;
  std::map<u64, UnitValue> overrides_;
  PrimeSet primes_;
  u64 order_ = 1;
};

/// Builds f and throws UsageError unless it is character-like.
CharLikeFunction make_charlike(DirichletCharacter chi, std::map<u64, UnitValue> overrides);

/// sum_{n <= x} f(n), term by term.
ExactSum charlike_sum(const CharLikeFunction& f, u64 x);

/// Same sum as sum over q-smooth d of f(d) * sum_{m <= x/d} chi(m). Cost is
/// the number of smooth d <= x times Q.
ExactSum fast_sum(const CharLikeFunction& f, u64 x);

/// S_f(0..X), optionally restricted to n coprime to `coprime_to` by sieving.
class PrefixSums {
 public:
  PrefixSums(const CharLikeFunction& f, u64 limit, u64 coprime_to = 1);
  u64 limit() const { return limit_; }
  ExactSum at(u64 x) const;

 private:
  u64 limit_;
  u64 order_;
  std::vector<std::int32_t> table_;  // (limit + 1) rows of Q coefficients
};

struct MobiusResult {
  ExactSum with_factor;     // sum_{d | P'} mu(d) f(d) S_f(x/d)
  ExactSum without_factor;  // sum_{d | P'} mu(d) S_f(x/d)
  ExactSum direct;          // sum_{n <= x, (n, P') = 1} f(n)
  bool with_factor_holds = false;
  bool without_factor_holds = false;
};

/// Squarefree divisors d of P' with mu(d), ascending.
std::vector<std::pair<u64, int>> squarefree_divisors(u64 p_prime);

/// Evaluates both readings of the decomposition against the direct sum.
/// Throws DecompositionMismatch when neither reading equals it.
MobiusResult mobius_decompose(const CharLikeFunction& f, u64 p_prime, u64 x);
/// Same, reading S_f and the restricted sum from precomputed tables.
MobiusResult mobius_decompose(const CharLikeFunction& f, u64 p_prime, u64 x, const PrefixSums& full,
                              const PrefixSums& restricted);

/// Smallest k <= k_max with S'(k P') != 0, where f' is `restricted`.
/// Throws NotFound.
u64 find_k(const CharLikeFunction& restricted, u64 p_prime, u64 k_max);

struct Witness {
  u64 k = 0;
  u64 p = 0;
  unsigned digits = 0;
  std::vector<unsigned> exponents;  // ascending
  u64 x = 0;
  double s_prime_abs = 0;
  double ratio = 0;
};

enum class WitnessMethod { Greedy, Exhaustive, Best };

/// x = sum_i k P' p^{m_i} with m_1 < ... < m_n <= m_max, chosen to make
/// |S'(x)| large. Greedy adds one exponent at a time; exhaustive tries every
/// subset (n <= 6); Best runs greedy and, for n <= 6, exhaustive as well.
Witness witness_search(const CharLikeFunction& restricted, u64 k, u64 p_prime, u64 p, unsigned digits,
                       unsigned m_max, WitnessMethod method = WitnessMethod::Best);

nlohmann::ordered_json to_json(const Witness& w);

struct GrowthRow {
  u64 x = 0;
  double running_max_abs = 0;
  double log_x = 0;
  double ratio = 0;
  double upper_bound = 0;  // 3 (log_2 x)^{omega(P)}
};

/// Running max of |S_f| sampled at x = 10, 10 s, 10 s^2, ... and at X.
std::vector<GrowthRow> growth_profile(const CharLikeFunction& f, u64 limit, u64 stride = 10);

/// `x,running_max_abs,log_x,ratio,upper_bound`
void write_growth_csv(const std::vector<GrowthRow>& rows, std::ostream& out);

}  // namespace pmult
