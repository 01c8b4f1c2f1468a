#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "pmult/rule_program.hpp"

namespace pmult {

// ---------------------------------------------------------------------------
// P = {2, 3}: block-by-block case analysis on 6N+1 .. 6N+6.
// ---------------------------------------------------------------------------

struct Seeds23 {
  int f1 = 1;
  int f2 = 1;
  int f3 = -1;
  int f5 = -1;
};

/// Which rule fixed f(6N+1) and f(6N+5) for one block.
enum class Block23Case : std::uint8_t { Seed = 0, Case1 = 1, Case2 = 2, Case3 = 3, Case4 = 4 };

struct Block23State {
  u64 block = 0;
  // f(6N+2), f(6N+3), f(6N+4), f(6N+6)
  std::array<int, 4> predetermined{};
  // f(6N+1), f(6N+5)
  std::array<int, 2> chosen{};
  Block23Case rule = Block23Case::Seed;
};

/// One row of the `target,source,rule` trace. source == 0 means the value was
/// fixed outright rather than copied (negated) from another index.
struct TraceEntry {
  u64 target = 0;
  u64 source = 0;
  std::string_view rule;
};

/// Builds the {2,3}-multiplicative sequence on [1..N] in which every block
/// satisfies f(6n+1)+f(6n+2)+f(6n+3) = -(f(6n+4)+f(6n+5)+f(6n+6)) = ±1.
/// Throws CaseFiveViolation if f(6N+2)=f(6N+3)=f(6N+4)=f(6N+6) ever occurs.
SignSequence construct_p23(u64 horizon, const Seeds23& seeds = {}, std::vector<Block23State>* blocks = nullptr,
                           std::vector<TraceEntry>* trace = nullptr);

// ---------------------------------------------------------------------------
// P = {2, 3, 5}: the 30m+k relation program with period 1920 = 30 * 64.
// ---------------------------------------------------------------------------

/// The 21 residues j mod 64 (j odd) whose 30(64m+j)+17 is left free by the
/// odd, doubling, mod-8, mod-32 and mod-64 relations.
inline constexpr std::array<unsigned, 21> kJList = {3,  7,  9,  11, 15, 19, 23, 25, 27, 31, 33,
                                                    35, 39, 41, 43, 47, 51, 55, 57, 59, 63};
/// The same list with 45 in place of 43; it conflicts with the mod-8 relation at 30*45+17.
inline constexpr std::array<unsigned, 21> kJListPrinted = {3,  7,  9,  11, 15, 19, 23, 25, 27, 31, 33,
                                                           35, 39, 41, 45, 47, 51, 55, 57, 59, 63};

enum class Rule235 : std::uint16_t {
  Odd = 1,          // f(30m+k) = -f(30m+k'), k odd, k != 17
  Doubling = 2,     // f(30(2m)+17) = -f(30(2m)+34)
  Mod8 = 3,         // f(30(8m+5)+17) = -f(30(8m+4)+17)
  Mod32 = 4,        // f(30(32m+17)+17) = -f(30(32m+16)+17)
  Mod64 = 5,        // f(30(64m+1)+17) = -f(30(64m)+17)
  LPair = 6,        // f(30(64m+j_i)+17) = -f(1920m+128i)
  Alternating = 7,  // f(30(64m+j_i)+17) = (-1)^i
};

std::string_view rule235_name(std::uint16_t tag);

struct Program235 {
  std::array<int, 3> prime_signs = {-1, -1, 1};  // f(2), f(3), f(5)
  std::array<unsigned, 21> j_list = kJList;
  /// Indices i <= l_pair_count are paired with l_i; the rest take (-1)^i.
  unsigned l_pair_count = 15;
  /// f(17): constrained only by f(17) = -f(2) f(17), which holds for either sign.
  int f17 = 1;

  /// The odd-residue pairings k -> k' with f(30m+k) = -f(30m+k').
  static constexpr std::array<std::pair<unsigned, unsigned>, 7> kOddPairs = {
      {{1, 3}, {7, 5}, {11, 9}, {13, 15}, {19, 21}, {23, 25}, {29, 27}}};

  RuleProgram rules(u64 horizon) const;
};

/// Materializes `program` on [1..N]. Throws RelationConflict if two rules
/// disagree at an index.
SignSequence construct_p235(u64 horizon, const Program235& program = {}, std::vector<TraceEntry>* trace = nullptr);

}  // namespace pmult
