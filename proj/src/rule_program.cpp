#include "pmult/rule_program.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace pmult {

namespace {

struct Step {
  u64 node;
  int coef;
};

}  // namespace

std::vector<Sign> materialize_table(std::span<const u64> mult_primes, std::span<const int> prime_signs,
                                    std::span<const Relation> relations,
                                    std::span<const std::pair<u64, int>> seeds, const FreeValueFn& free_value,
                                    u64 horizon) {
  if (horizon == 0) throw UsageError("horizon must be at least 1");
  std::vector<u64> rule(horizon + 1, 0);
  for (const Relation& r : relations) {
    if (r.target > horizon) continue;
    if (r.target == 0 || r.source == 0) throw UsageError("relation with zero index");
    if (rule[r.target] != 0 && rule[r.target] != r.source)
      throw RelationConflict("index " + std::to_string(r.target) + " is the target of two relations (sources " +
                             std::to_string(rule[r.target]) + ", " + std::to_string(r.source) + ")");
    rule[r.target] = r.source;
  }
  std::vector<Sign> seed(horizon + 1, kUnset);
  for (auto [n, v] : seeds) {
    if (n > horizon) continue;
    if (v != 1 && v != -1) throw UsageError("seed values must be +1 or -1");
    seed[n] = static_cast<Sign>(v);
  }

  std::vector<Sign> value(horizon + 1, kUnset);
  std::vector<std::uint8_t> on_path(horizon + 1, 0);
  std::vector<Step> path;

  auto free_at = [&](u64 n) -> Sign {
    if (n == 1) return 1;
    if (seed[n] != kUnset) return seed[n];
    if (free_value) {
      const int v = free_value(n);
      if (v != 1 && v != -1) throw UsageError("free value must be +1 or -1");
      return static_cast<Sign>(v);
    }
    throw UnsetValue("index " + std::to_string(n) + " is not covered by any rule or seed");
  };

  for (u64 n = 1; n <= horizon; ++n) {
    if (value[n] != kUnset) continue;
    const RoughPart rp = strip_primes(n, mult_primes, prime_signs);
    if (rp.rough != n) {
      value[n] = static_cast<Sign>(rp.sign * value[rp.rough]);
      continue;
    }
    // Walk the relation chain from n until a known value, a free index, or a cycle.
    path.clear();
    u64 cur = n;
    for (;;) {
      if (value[cur] != kUnset) break;
      if (on_path[cur]) {
        std::size_t idx = path.size();
        int product = 1;
        while (idx > 0) {
          --idx;
          product *= path[idx].coef;
          if (path[idx].node == cur) break;
        }
        if (product != 1)
          throw DependencyCycle("relation cycle through " + std::to_string(cur) + " forces f = -f");
        value[cur] = free_at(cur);
        break;
      }
      if (rule[cur] == 0) {
        value[cur] = free_at(cur);
        break;
      }
      const RoughPart src = strip_primes(rule[cur], mult_primes, prime_signs);
      if (src.rough > horizon)
        throw UsageError("source " + std::to_string(rule[cur]) + " of " + std::to_string(cur) +
                         " has rough part beyond the horizon");
      path.push_back({cur, -src.sign});
      on_path[cur] = 1;
      cur = src.rough;
    }
    for (std::size_t i = path.size(); i-- > 0;) {
      const u64 next = i + 1 < path.size() ? path[i + 1].node : cur;
      on_path[path[i].node] = 0;
      if (value[path[i].node] == kUnset) value[path[i].node] = static_cast<Sign>(path[i].coef * value[next]);
    }
  }

  for (u64 y = 1; y <= horizon; ++y) {
    if (rule[y] == 0) continue;
    const RoughPart src = strip_primes(rule[y], mult_primes, prime_signs);
    if (value[y] != -src.sign * value[src.rough])
      throw RelationConflict("relation f(" + std::to_string(y) + ") = -f(" + std::to_string(rule[y]) +
                             ") does not hold");
  }
  for (u64 n = 1; n <= horizon; ++n)
    if (seed[n] != kUnset && value[n] != seed[n])
      throw RelationConflict("seed at " + std::to_string(n) + " contradicts the rules");
  return value;
}

SignSequence materialize(const RuleProgram& program, u64 horizon) {
  if (program.prime_signs.size() != program.primes.size())
    throw UsageError("rule program needs one sign per prime");
  auto table = materialize_table(program.primes.primes(), program.prime_signs, program.relations, program.seeds,
                                 nullptr, horizon);
  SignSequence seq(program.primes, horizon);
  auto dst = seq.mutable_values();
  std::copy(table.begin(), table.end(), dst.begin());
  for (std::size_t i = 0; i < program.primes.size(); ++i)
    seq.set_prime_sign(program.primes[i], program.prime_signs[i]);
  return seq;
}

std::vector<Relation> application_order(std::span<const Relation> relations, u64 horizon) {
  std::vector<Relation> out;
  for (const Relation& r : relations)
    if (r.target <= horizon) out.push_back(r);
  std::sort(out.begin(), out.end(), [](const Relation& a, const Relation& b) { return a.target < b.target; });
  return out;
}

void write_program_csv(const RuleProgram& program, std::ostream& out) {
  std::string buf = "kind,x,y\n";
  for (const Relation& r : application_order(program.relations, program.horizon)) {
    buf += r.kind == RuleKind::Chain ? "chain," : "relation,";
    buf += std::to_string(r.source) + "," + std::to_string(r.target) + "\n";
  }
  for (auto [n, v] : program.seeds) buf += "seed," + std::to_string(n) + "," + std::to_string(v) + "\n";
  out << buf;
}

}  // namespace pmult
