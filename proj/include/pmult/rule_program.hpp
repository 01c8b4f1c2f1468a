#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "pmult/core_sequence.hpp"

namespace pmult {

enum class RuleKind : std::uint8_t { Relation, Chain };

/// The constraint f(target) = -f(source).
struct Relation {
  u64 source = 0;
  u64 target = 0;
  RuleKind kind = RuleKind::Relation;
  std::uint16_t tag = 0;  // producer-defined label (rule family, construction step)

  bool operator==(const Relation&) const = default;
};

/// A complete, materializable description of a P-multiplicative ±1 function:
/// prime signs, sign-flip relations, and explicit values for the free indices.
struct RuleProgram {
  PrimeSet primes;
  std::vector<int> prime_signs;  // f(primes[i])
  std::vector<Relation> relations;
  std::vector<std::pair<u64, int>> seeds;  // ascending by index
  u64 horizon = 0;
};

/// Value for a rough index that no rule or seed covers.
using FreeValueFn = std::function<int(u64)>;

/// Dense table v[0..N] (v[0] unused) satisfying f(p n) = f(p) f(n) for the
/// given primes and every relation whose target is <= N. Rough indices are
/// resolved along their relation chains; a cycle whose sign product is +1
/// leaves its entry free (seed or `free_value`), a cycle with product -1
/// throws DependencyCycle.
std::vector<Sign> materialize_table(std::span<const u64> mult_primes, std::span<const int> prime_signs,
                                    std::span<const Relation> relations,
                                    std::span<const std::pair<u64, int>> seeds, const FreeValueFn& free_value,
                                    u64 horizon);

SignSequence materialize(const RuleProgram& program, u64 horizon);

/// Relations with target <= horizon in the order materialize applies them.
std::vector<Relation> application_order(std::span<const Relation> relations, u64 horizon);

/// CSV `kind,x,y` with kind in {relation, chain, seed}; seeds carry (n, value).
void write_program_csv(const RuleProgram& program, std::ostream& out);

}  // namespace pmult
