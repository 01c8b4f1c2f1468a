#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "pmult/rule_program.hpp"

namespace pmult {

/// Which construction step produced a relation.
enum class LevelStep : std::uint8_t { Base = 0, Lift = 1, Shift = 2, Absorb = 3 };

/// A relation pattern inside one block I_M = [b M + 1, b (M+1)]. Offsets are
/// relative to b M and lie in [1, b]; the pattern is the same for every M >= 1.
struct BlockRelation {
  u64 source = 0;
  u64 target = 0;
  LevelStep step = LevelStep::Base;
};

/// One level j of the refinement: modulus b_j, the free set F_j and the
/// relations that level j adds to R_{j+1}.
///
/// F_j and the new relations are periodic in blocks of length b_j for M >= 1,
/// so they are stored as one block pattern. The block [1, b_j] holds no free
/// elements; relations that fall inside it are listed explicitly.
struct LevelState {
  unsigned level = 0;
  u64 modulus = 0;
  unsigned exponent = 0;  // a_j; 0 at the top level
  u64 prime = 0;          // p_j; 0 at the top level
  std::vector<u64> free_offsets;
  std::vector<BlockRelation> block_relations;
  std::vector<Relation> prefix_relations;
  /// Free elements left over after pairing, per block (|U|-|V| at the top,
  /// |I_M ∩ F \ F1 \ F2| - |V| below).
  u64 surplus = 0;

  bool is_free(u64 n) const;
  /// F_j ∩ [1, horizon], ascending.
  std::vector<u64> free_elements(u64 horizon) const;
  /// New relations of this level with target <= horizon.
  std::vector<Relation> relations(u64 horizon) const;
};

/// Levels k-1 down to 1 for a prime set with k > 2.
struct Construction {
  PrimeSet primes;
  std::vector<LevelState> levels;  // front() is level k-1, back() is level 1

  const LevelState& level(unsigned j) const;
  unsigned top_level() const { return static_cast<unsigned>(primes.size() - 1); }
  /// b_1, the period of the finished construction.
  u64 period() const { return levels.back().modulus; }
};

/// Level k-1 with b_{k-1} = P: in each block, the numbers coprime to P' and
/// divisible by p_{k-1} or p_k are paired in order with the smallest numbers
/// coprime to P. Throws CountingFailure if a block has no surplus.
LevelState base_step(const PrimeSet& primes);

/// Smallest a >= 1 with B * sum_{r<a} (-1)^r p^{a-1-r} > b / p.
unsigned min_exponent(u64 free_count, u64 p, u64 modulus);

/// Level j-1 from level j using p = p_{j-1} and b_{j-1} = p^a b_j.
/// Throws SurplusFailure if a block runs out of free elements to absorb the
/// multiples of p^{a+1}.
LevelState refine_level(const LevelState& level, const PrimeSet& primes);

/// base_step followed by refine_level down to level 1.
Construction build_levels(const PrimeSet& primes);

/// Every relation contributed by levels >= j (that is, R_j), target <= horizon.
std::vector<Relation> relations_through(const Construction& c, unsigned j, u64 horizon);

/// R_1 plus the chain f(a_{i+1}) = -f(a_i) over F_1, with every remaining
/// rough index <= horizon seeded from `seed_value` (f(1) is always +1).
RuleProgram finalize(const Construction& c, std::vector<int> prime_signs, const FreeValueFn& seed_value, u64 horizon);

/// The alternating chain f(p^s b m + t) + f(p(p^{s-1} b m + t)) + ... + f(p^s (b m + t))
/// rooted at a lifted element n' = p^s b m + t of level j.
struct TelescopingChain {
  u64 origin = 0;
  unsigned length = 0;  // s
  std::vector<u64> terms;
};

/// All chains of refined level j whose terms lie in [1, horizon].
std::vector<TelescopingChain> telescoping_chains(const Construction& c, unsigned j, u64 horizon);

/// `level,b,a,block,free_count,relation_count`, one row per complete block.
void write_levels_csv(const Construction& c, u64 horizon, std::ostream& out);

}  // namespace pmult
