#include "pmult/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>

namespace pmult {

namespace {

VerificationReport single(CheckResult r) {
  VerificationReport rep;
  rep.checks.push_back(std::move(r));
  return rep;
}

CheckResult fail(CheckResult r, u64 n, i64 expected, i64 actual, std::string detail = {}) {
  r.pass = false;
  r.witness = n;
  r.violation = Violation{n, expected, actual};
  if (!detail.empty()) r.detail = std::move(detail);
  return r;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

i64 VerificationReport::sup_abs() const {
  i64 s = 0;
  for (const auto& c : checks) s = std::max(s, c.sup_abs);
  return s;
}

std::optional<Violation> VerificationReport::first_violation() const {
  for (const auto& c : checks)
    if (c.violation) return c.violation;
  return std::nullopt;
}

void VerificationReport::append(VerificationReport other) {
  for (auto& c : other.checks) checks.push_back(std::move(c));
}

nlohmann::ordered_json to_json(const VerificationReport& report) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json j;
    j["check"] = c.name;
    j["status"] = c.pass ? "pass" : "fail";
    j["sup_abs"] = c.sup_abs;
    if (c.violation)
      j["first_violation"] = {{"n", c.violation->n}, {"expected", c.violation->expected}, {"actual", c.violation->actual}};
    else
      j["first_violation"] = nullptr;
    j["nodes_explored"] = c.nodes_explored;
    if (!c.detail.empty()) j["detail"] = c.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

VerificationReport check_multiplicativity(const SignSequence& seq, unsigned threads) {
  CheckResult r{.name = "multiplicativity"};
  const u64 n_max = seq.horizon();
  if (seq.at(1) != 1) return single(fail(r, 1, 1, seq.at(1), "f(1) must be +1"));
  const auto primes = seq.primes().primes();
  const auto signs = seq.prime_signs();

  // Shard by ranges of pn; each shard reports its smallest failing pn.
  const std::size_t shards = std::max<std::size_t>(1, std::min<u64>(threads * 4, n_max / 4096 + 1));
  std::vector<std::optional<std::pair<u64, u64>>> found(shards);  // (pn, p)
  parallel_for(shards, threads, [&](std::size_t s) {
    const u64 lo = 1 + n_max * s / shards;
    const u64 hi = n_max * (s + 1) / shards;
    for (u64 m = std::max<u64>(lo, 2); m <= hi; ++m) {
      for (std::size_t i = 0; i < primes.size(); ++i) {
        if (m % primes[i] != 0) continue;
        if (seq.at(m) != signs[i] * seq.at(m / primes[i])) {
          found[s] = std::make_pair(m, primes[i]);
          return;
        }
      }
    }
  });
  for (std::size_t s = 0; s < shards; ++s) {
    if (!found[s]) continue;
    const auto [m, p] = *found[s];
    const int expected = seq.prime_sign(p) * seq.at(m / p);
    return single(fail(r, m, expected, seq.at(m),
                       "p=" + std::to_string(p) + ",n=" + std::to_string(m / p)));
  }
  return single(r);
}

std::vector<Window> dyadic_windows(u64 horizon, u64 first_width) {
  if (first_width == 0) throw UsageError("window width must be positive");
  std::vector<Window> out;
  u64 lo = 1;
  u64 hi = std::min(first_width, horizon);
  out.push_back({lo, hi});
  while (hi < horizon) {
    lo = hi;
    hi = hi > horizon / 2 ? horizon : std::min(horizon, hi * 2);
    out.push_back({lo, hi});
  }
  return out;
}

VerificationReport check_bounded(const SignSequence& seq, std::span<const Window> windows, u64 settle) {
  CheckResult r{.name = "bounded"};
  const auto s = running_sums(seq);
  std::vector<i64> sups;
  std::string detail;
  for (const Window& w : windows) {
    if (w.first < 1 || w.last > seq.horizon() || w.first > w.last) throw UsageError("window outside [1, N]");
    i64 m = 0;
    for (u64 n = w.first; n <= w.last; ++n) m = std::max(m, s[n] < 0 ? -s[n] : s[n]);
    sups.push_back(m);
    if (!detail.empty()) detail += ";";
    detail += "[" + std::to_string(w.first) + "," + std::to_string(w.last) + "]=" + std::to_string(m);
  }
  r.detail = detail;
  std::size_t anchor = 0;
  while (anchor + 1 < windows.size() && windows[anchor].last < settle) ++anchor;
  i64 best = 0;
  for (std::size_t i = 0; i <= anchor && i < sups.size(); ++i) best = std::max(best, sups[i]);
  r.sup_abs = *std::max_element(sups.begin(), sups.end());
  for (std::size_t i = anchor + 1; i < windows.size(); ++i) {
    if (sups[i] > best) {
      u64 at = windows[i].first;
      while ((s[at] < 0 ? -s[at] : s[at]) <= best) ++at;
      auto out = fail(r, at, best, s[at] < 0 ? -s[at] : s[at]);
      out.detail = detail;
      return single(out);
    }
  }
  return single(r);
}

VerificationReport check_partial_sum_bound(const SignSequence& seq, i64 bound) {
  CheckResult r{.name = "partial_sum_bound"};
  i64 s = 0;
  for (u64 n = 1; n <= seq.horizon(); ++n) {
    s += seq.at(n);
    const i64 a = s < 0 ? -s : s;
    r.sup_abs = std::max(r.sup_abs, a);
    if (a > bound) return single(fail(r, n, bound, a, "|S(n)| exceeds " + std::to_string(bound)));
  }
  return single(r);
}

VerificationReport check_zero_at_multiples(const SignSequence& seq, u64 period) {
  CheckResult r{.name = "zero_at_multiples_of_" + std::to_string(period)};
  if (period == 0) throw UsageError("period must be positive");
  i64 s = 0;
  for (u64 n = 1; n <= seq.horizon(); ++n) {
    s += seq.at(n);
    r.sup_abs = std::max(r.sup_abs, s < 0 ? -s : s);
    if (n % period == 0 && s != 0) return single(fail(r, n, 0, s));
  }
  return single(r);
}

VerificationReport check_relations(const SignSequence& seq, std::span<const Relation> relations,
                                   const std::string& name) {
  CheckResult r{.name = name};
  std::optional<Relation> worst;
  for (const Relation& rel : relations) {
    if (rel.target > seq.horizon()) continue;
    const auto signs = seq.prime_signs();
    const RoughPart src = strip_primes(rel.source, seq.primes().primes(), signs);
    if (src.rough > seq.horizon()) continue;
    if (seq.at(rel.target) != -src.sign * seq.at(src.rough) && (!worst || rel.target < worst->target)) worst = rel;
  }
  if (worst) {
    const RoughPart src = strip_primes(worst->source, seq.primes().primes(), seq.prime_signs());
    return single(fail(r, worst->target, -src.sign * seq.at(src.rough), seq.at(worst->target),
                       "source " + std::to_string(worst->source)));
  }
  r.detail = std::to_string(relations.size()) + " relations";
  return single(r);
}

VerificationReport check_conditions(const Construction& c, u64 horizon) {
  VerificationReport rep;
  const u64 big = c.primes.product();
  std::vector<std::vector<std::uint8_t>> member;  // member[i][n]: n in F of levels[i]
  for (const LevelState& l : c.levels) {
    std::vector<std::uint8_t> in(horizon + 1, 0);
    for (u64 n : l.free_elements(horizon)) in[n] = 1;
    member.push_back(std::move(in));
  }

  // (I)
  CheckResult one{.name = "condition_I"};
  for (std::size_t i = 0; i < c.levels.size() && one.pass; ++i) {
    const u64 b = c.levels[i].modulus;
    for (u64 n = 1; n <= horizon; ++n) {
      if (!member[i][n]) continue;
      if (gcd(n, big) != 1) {
        one = fail(one, n, 1, 0, "free element shares a factor with P");
        break;
      }
      if (i > 0 && !member[i - 1][n]) {
        one = fail(one, n, 1, 0, "F_j not contained in F_{j+1}");
        break;
      }
      if (n + b <= horizon && !member[i][n + b]) {
        one = fail(one, n + b, 1, 0, "n + b_j missing");
        break;
      }
      if (n > 2 * b && !member[i][n - b]) {
        one = fail(one, n - b, 1, 0, "n - b_j missing");
        break;
      }
    }
  }
  rep.checks.push_back(one);

  // (II)
  CheckResult two{.name = "condition_II"};
  {
    std::vector<u64> source_of(horizon + 1, 0);
    for (const Relation& r : relations_through(c, 1, horizon)) {
      if (source_of[r.target] != 0 && source_of[r.target] != r.source) {
        two = fail(two, r.target, static_cast<i64>(source_of[r.target]), static_cast<i64>(r.source),
                   "two relations share a target");
        break;
      }
      source_of[r.target] = r.source;
    }
  }
  rep.checks.push_back(two);

  // (III)
  CheckResult three{.name = "condition_III"};
  for (std::size_t i = 0; i < c.levels.size() && three.pass; ++i) {
    const LevelState& l = c.levels[i];
    const u64 b = l.modulus;
    for (const Relation& r : l.relations(horizon)) {
      const bool was_free = i == 0 ? gcd(r.target, big) == 1 : static_cast<bool>(member[i - 1][r.target]);
      if (!was_free || member[i][r.target]) {
        three = fail(three, r.target, 1, 0, "target not in F_{j+1} \\ F_j");
        break;
      }
      if (r.source / b != r.target / b && (r.source - 1) / b != (r.target - 1) / b) {
        three = fail(three, r.target, static_cast<i64>(r.target / b), static_cast<i64>(r.source / b),
                     "pair crosses a block boundary");
        break;
      }
    }
  }
  rep.checks.push_back(three);

  // (IV)
  CheckResult four{.name = "condition_IV"};
  if (c.levels.front().modulus != big) four = fail(four, c.levels.front().level, static_cast<i64>(big),
                                                   static_cast<i64>(c.levels.front().modulus), "b_{k-1} != P");
  for (std::size_t i = 1; i < c.levels.size() && four.pass; ++i) {
    const LevelState& l = c.levels[i];
    const u64 want = checked_mul(checked_pow(l.prime, l.exponent), c.levels[i - 1].modulus);
    if (l.prime != c.primes[l.level - 1] || l.modulus != want || l.exponent == 0)
      four = fail(four, l.level, static_cast<i64>(want), static_cast<i64>(l.modulus), "b_j != p_j^a_j b_{j+1}");
  }
  rep.checks.push_back(four);
  return rep;
}

VerificationReport check_condition_V(const Construction& c, unsigned level, unsigned trials, u64 seed, u64 horizon,
                                     unsigned threads) {
  const LevelState& lvl = c.level(level);
  CheckResult r{.name = "condition_V_level_" + std::to_string(level)};
  const std::size_t first = level - 1;
  const auto all = c.primes.primes();
  const std::vector<u64> mult(all.begin() + static_cast<std::ptrdiff_t>(first), all.end());
  const std::span<const u64> lower = all.subspan(0, first);
  const auto relations = relations_through(c, level, horizon);
  const u64 b = lvl.modulus;

  std::vector<std::uint8_t> excluded(horizon + 1, 0);  // F_j or divisible by p_i, i < j
  for (u64 n : lvl.free_elements(horizon)) excluded[n] = 1;
  for (u64 p : lower)
    for (u64 n = p; n <= horizon; n += p) excluded[n] = 1;

  // Free coordinates: rough (w.r.t. the multiplicative primes) indices with no rule, plus prime signs.
  std::vector<std::uint8_t> targeted(horizon + 1, 0);
  for (const Relation& rel : relations) targeted[rel.target] = 1;
  std::vector<u64> free_index;
  for (u64 n = 2; n <= horizon; ++n) {
    if (targeted[n]) continue;
    bool rough = true;
    for (u64 p : mult) rough = rough && n % p != 0;
    if (rough) free_index.push_back(n);
  }
  const std::size_t dims = free_index.size() + mult.size();
  const bool exhaustive = dims <= 20;
  const std::size_t runs = exhaustive ? (std::size_t{1} << dims) : trials;

  struct Outcome {
    bool ok = true;
    u64 block_end = 0;
    i64 sum = 0;
  };
  std::vector<Outcome> outcomes(runs);
  std::vector<std::string> errors(runs);
  parallel_for(runs, threads, [&](std::size_t t) {
    std::vector<int> signs(mult.size());
    FreeValueFn free_value;
    std::mt19937_64 rng;
    if (exhaustive) {
      for (std::size_t i = 0; i < mult.size(); ++i) signs[i] = (t >> i) & 1 ? 1 : -1;
      free_value = [&, t](u64 n) {
        const auto it = std::lower_bound(free_index.begin(), free_index.end(), n);
        const std::size_t bit = mult.size() + static_cast<std::size_t>(it - free_index.begin());
        return (t >> bit) & 1 ? 1 : -1;
      };
    } else {
      std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(level), static_cast<std::uint32_t>(t)};
      rng.seed(sq);
      for (auto& s : signs) s = rng() & 1 ? 1 : -1;
      free_value = [&rng](u64) { return rng() & 1 ? 1 : -1; };
    }
    std::vector<Sign> f;
    try {
      f = materialize_table(mult, signs, relations, {}, free_value, horizon);
    } catch (const Error& e) {
      errors[t] = e.what();
      outcomes[t].ok = false;
      return;
    }
    for (u64 start = b; start + b <= horizon; start += b) {
      i64 sum = 0;
      for (u64 n = start + 1; n <= start + b; ++n)
        if (!excluded[n]) sum += f[n];
      if (sum != 0) {
        outcomes[t] = {false, start + b, sum};
        return;
      }
    }
  });

  r.detail = std::string(exhaustive ? "exhaustive " : "sampled ") + std::to_string(runs) + " functions, " +
             std::to_string(horizon / b > 0 ? horizon / b - 1 : 0) + " blocks";
  for (std::size_t t = 0; t < runs; ++t) {
    if (!errors[t].empty()) throw InvariantViolation("condition V trial " + std::to_string(t) + ": " + errors[t]);
    if (!outcomes[t].ok)
      return single(fail(r, outcomes[t].block_end, 0, outcomes[t].sum,
                         "trial " + std::to_string(t) + ", block ending at " + std::to_string(outcomes[t].block_end)));
  }
  return single(r);
}

VerificationReport check_telescoping(const SignSequence& seq, const Construction& c, unsigned level) {
  CheckResult r{.name = "telescoping_level_" + std::to_string(level)};
  const auto chains = telescoping_chains(c, level, seq.horizon());
  std::size_t odd = 0;
  for (const auto& chain : chains) {
    i64 sum = 0;
    for (u64 n : chain.terms) sum += seq.at(n);
    const i64 want = chain.length % 2 == 1 ? 0 : seq.at(chain.origin);
    odd += chain.length % 2;
    if (sum != want)
      return single(fail(r, chain.origin, want, sum, "chain of length " + std::to_string(chain.length)));
  }
  r.detail = std::to_string(chains.size()) + " chains (" + std::to_string(odd) + " odd)";
  return single(r);
}

}  // namespace pmult
