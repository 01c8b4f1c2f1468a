#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pmult/core_sequence.hpp"
#include "vendor_json.hpp"

namespace pmult {

enum class SearchStatus { Sat, Unsat, ExhaustedBudget };

const char* status_name(SearchStatus s);

struct SearchResult {
  SearchStatus status = SearchStatus::ExhaustedBudget;
  /// Chosen signs at the decision points (primes of P and P-rough n > 1), ascending by index.
  std::vector<std::pair<u64, int>> decisions;
  /// Full table on [1..N] when SAT.
  std::optional<SignSequence> witness;
  u64 nodes_explored = 0;
  u64 backtracks = 0;
};

/// Depth-first search for a P-multiplicative ±1 table on [1..N] with
/// |S(n)| <= C for every n <= N. Decision points are visited in ascending
/// order, -1 before +1; other entries are derived by multiplicativity.
/// `bound` = nullopt means C = infinity. When C <= 31 each node also checks
/// that some relaxed completion (undecided entries free) can stay within C;
/// for C <= 3 the relaxation also keeps f(p m) = f(p) f(m) for the smallest p.
/// `budget` caps the number of decisions tried.
SearchResult brute_force_search(const PrimeSet& primes, std::optional<i64> bound, u64 horizon, u64 budget);

/// First n <= N at which `seq` breaks multiplicativity or |S(n)| > C, if any.
std::optional<u64> replay_rejects(const SignSequence& seq, i64 bound, u64 horizon);

struct HorizonScan {
  u64 max_sat = 0;                 // largest SAT horizon found
  std::optional<u64> first_unsat;  // smallest refuted horizon
  u64 nodes_explored = 0;
  bool exhausted = false;
};

/// Runs the search at N = 1, 2, ... up to n_max and stops at the first
/// horizon that is not SAT.
HorizonScan max_satisfiable_horizon(const PrimeSet& primes, i64 bound, u64 n_max, u64 budget);

nlohmann::ordered_json to_json(const SearchResult& r, const PrimeSet& primes, std::optional<i64> bound, u64 horizon);

}  // namespace pmult
