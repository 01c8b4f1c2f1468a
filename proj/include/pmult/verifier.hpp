#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmult/constructor_general.hpp"
#include "vendor_json.hpp"

namespace pmult {

struct Violation {
  u64 n = 0;
  i64 expected = 0;
  i64 actual = 0;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  std::optional<u64> witness;  // always set on failure
  std::optional<Violation> violation;
  i64 sup_abs = 0;
  u64 nodes_explored = 0;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  i64 sup_abs() const;
  std::optional<Violation> first_violation() const;
  void append(VerificationReport other);
};

/// One JSON object per check: {check, status, sup_abs, first_violation, nodes_explored, detail}.
nlohmann::ordered_json to_json(const VerificationReport& report);

/// v[1] = +1 and v[p n] = f(p) v[n] for every p in P, n <= N/p.
/// The witness is the smallest failing p*n; `detail` names (p, n).
VerificationReport check_multiplicativity(const SignSequence& seq, unsigned threads = 1);

/// An inclusive index window [first, last].
struct Window {
  u64 first = 1;
  u64 last = 1;
};

/// Dyadic windows [1, w], [w, 2w], [2w, 4w], ... covering [1, N].
std::vector<Window> dyadic_windows(u64 horizon, u64 first_width);

/// Reports sup |S| per window. Passes iff no window after the first one that
/// reaches past `settle` (2 b_1 for the general construction) exceeds the sup
/// seen up to the end of that window.
VerificationReport check_bounded(const SignSequence& seq, std::span<const Window> windows, u64 settle = 0);

/// |S(n)| <= bound for every n <= N.
VerificationReport check_partial_sum_bound(const SignSequence& seq, i64 bound);

/// S(m * period) = 0 for every m with m * period <= N.
VerificationReport check_zero_at_multiples(const SignSequence& seq, u64 period);

/// f(target) = -f(source) for every relation with target <= N.
VerificationReport check_relations(const SignSequence& seq, std::span<const Relation> relations,
                                   const std::string& name = "relations");

/// Conditions (I)-(IV) on every generated block up to `horizon`.
VerificationReport check_conditions(const Construction& c, u64 horizon);

/// Condition (V) at level j: for random admissible f (multiplicative at p_j..p_k,
/// f(y) = -f(x) on R_j, everything else random) every restricted block sum
/// over [b_j M + 1, b_j (M+1)], M >= 1, is exactly zero. When at most 20 free
/// values exist all assignments are enumerated instead of sampling.
VerificationReport check_condition_V(const Construction& c, unsigned level, unsigned trials, u64 seed, u64 horizon,
                                     unsigned threads = 1);

/// Alternating chains of refined level j sum to 0 (odd length) or f(origin).
VerificationReport check_telescoping(const SignSequence& seq, const Construction& c, unsigned level);

}  // namespace pmult
