#include "pmult/constructor_small.hpp"

#include <algorithm>
#include <string>

namespace pmult {

namespace {

void require_sign(int v, const char* what) {
  if (v != 1 && v != -1) throw UsageError(std::string(what) + " must be +1 or -1");
}

}  // namespace

SignSequence construct_p23(u64 horizon, const Seeds23& seeds, std::vector<Block23State>* blocks,
                           std::vector<TraceEntry>* trace) {
  if (horizon < 6) throw UsageError("construct_p23 needs N >= 6");
  require_sign(seeds.f1, "f(1)");
  require_sign(seeds.f2, "f(2)");
  require_sign(seeds.f3, "f(3)");
  require_sign(seeds.f5, "f(5)");
  if (seeds.f1 != 1) throw UsageError("f(1) must be +1 for a P-multiplicative function");

  const u64 padded = checked_mul((horizon + 5) / 6, u64{6});
  std::vector<Sign> v(padded + 1, kUnset);
  const int f2 = seeds.f2;
  const int f3 = seeds.f3;
  auto derived = [&](u64 n) -> int {
    int s = 1;
    while (n % 2 == 0) n /= 2, s *= f2;
    while (n % 3 == 0) n /= 3, s *= f3;
    return s * v[n];
  };

  v[1] = static_cast<Sign>(seeds.f1);
  v[2] = static_cast<Sign>(f2);
  v[3] = static_cast<Sign>(f3);
  v[4] = static_cast<Sign>(derived(4));
  v[5] = static_cast<Sign>(seeds.f5);
  v[6] = static_cast<Sign>(derived(6));
  {
    const int lo = v[1] + v[2] + v[3];
    const int hi = v[4] + v[5] + v[6];
    if ((lo != 1 && lo != -1) || hi != -lo)
      throw UsageError("seeds violate f(1)+f(2)+f(3) = -(f(4)+f(5)+f(6)) = ±1");
  }
  if (blocks) blocks->push_back({0, {v[2], v[3], v[4], v[6]}, {v[1], v[5]}, Block23Case::Seed});

  for (u64 b = 1; 6 * b + 6 <= padded; ++b) {
    const u64 base = 6 * b;
    const int x2 = derived(base + 2);
    const int x3 = derived(base + 3);
    const int x4 = derived(base + 4);
    const int x6 = derived(base + 6);
    v[base + 2] = static_cast<Sign>(x2);
    v[base + 3] = static_cast<Sign>(x3);
    v[base + 4] = static_cast<Sign>(x4);
    v[base + 6] = static_cast<Sign>(x6);

    int x1 = 0;
    int x5 = 0;
    u64 src1 = 0;
    u64 src5 = 0;
    std::string_view rule1 = "default";
    std::string_view rule5 = "default";
    Block23Case which;
    if (x2 == x3 && x4 == x6) {
      if (x2 == x4)
        throw CaseFiveViolation("f(6N+2)=f(6N+3)=f(6N+4)=f(6N+6) at block " + std::to_string(b));
      which = Block23Case::Case1;
      x1 = -x2, src1 = base + 2;
      x5 = -x4, src5 = base + 4;
    } else if (x2 == x3) {
      which = Block23Case::Case2;
      x1 = -x2, src1 = base + 2;
      x5 = -x2, src5 = base + 2, rule5 = "case2";
    } else if (x4 == x6) {
      which = Block23Case::Case3;
      x5 = -x4, src5 = base + 4;
      x1 = -x4, src1 = base + 4, rule1 = "case3";
    } else {
      which = Block23Case::Case4;
      x1 = 1, rule1 = "case4";
      x5 = -1, rule5 = "case4";
    }
    v[base + 1] = static_cast<Sign>(x1);
    v[base + 5] = static_cast<Sign>(x5);

    const int lo = x1 + x2 + x3;
    const int hi = x4 + x5 + x6;
    if ((lo != 1 && lo != -1) || hi != -lo)
      throw InvariantViolation("block relation fails at block " + std::to_string(b));
    if (blocks) blocks->push_back({b, {x2, x3, x4, x6}, {x1, x5}, which});
    if (trace) {
      trace->push_back({base + 1, src1, rule1});
      trace->push_back({base + 5, src5, rule5});
    }
  }

  SignSequence seq(PrimeSet{2, 3}, horizon);
  auto dst = seq.mutable_values();
  std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(horizon + 1), dst.begin());
  seq.set_prime_sign(2, f2);
  seq.set_prime_sign(3, f3);
  return seq;
}

std::string_view rule235_name(std::uint16_t tag) {
  switch (static_cast<Rule235>(tag)) {
    case Rule235::Odd: return "odd";
    case Rule235::Doubling: return "doubling";
    case Rule235::Mod8: return "mod8";
    case Rule235::Mod32: return "mod32";
    case Rule235::Mod64: return "mod64";
    case Rule235::LPair: return "l_pair";
    case Rule235::Alternating: return "alternating";
  }
  return "unknown";
}

RuleProgram Program235::rules(u64 horizon) const {
  for (int s : prime_signs) require_sign(s, "prime sign");
  require_sign(f17, "f(17)");
  if (l_pair_count > j_list.size()) throw UsageError("l_pair_count exceeds the j list");

  RuleProgram prog;
  prog.primes = PrimeSet{2, 3, 5};
  prog.prime_signs.assign(prime_signs.begin(), prime_signs.end());
  prog.horizon = horizon;
  auto add = [&](u64 source, u64 target, Rule235 rule) {
    if (target <= horizon) prog.relations.push_back({source, target, RuleKind::Relation, static_cast<std::uint16_t>(rule)});
  };

  for (u64 m = 0; 30 * m + 1 <= horizon; ++m) {
    const u64 base = 30 * m;
    for (auto [k, kk] : kOddPairs) add(base + kk, base + k, Rule235::Odd);

    const u64 target = base + 17;
    if (target > horizon) continue;
    const u64 j = m % 64;
    const u64 block = m / 64;
    if (j % 2 == 0) add(base + 34, target, Rule235::Doubling);
    if (j % 8 == 5) add(target - 30, target, Rule235::Mod8);
    if (j % 32 == 17) add(target - 30, target, Rule235::Mod32);
    if (j == 1) add(target - 30, target, Rule235::Mod64);
    for (unsigned i = 1; i <= j_list.size(); ++i) {
      if (j_list[i - 1] != j) continue;
      if (i <= l_pair_count)
        add(checked_add(checked_mul(block, u64{1920}), u64{128} * i), target, Rule235::LPair);
      else
        prog.seeds.emplace_back(target, i % 2 == 0 ? 1 : -1);
    }
  }
  if (horizon >= 17) prog.seeds.emplace_back(17, f17);
  std::sort(prog.seeds.begin(), prog.seeds.end());
  return prog;
}

SignSequence construct_p235(u64 horizon, const Program235& program, std::vector<TraceEntry>* trace) {
  if (horizon < 1920) throw UsageError("construct_p235 needs N >= 1920");
  const RuleProgram prog = program.rules(horizon);
  SignSequence seq = materialize(prog, horizon);
  if (trace) {
    for (const Relation& r : application_order(prog.relations, horizon))
      trace->push_back({r.target, r.source, rule235_name(r.tag)});
    for (auto [n, value] : prog.seeds)
      if (n != 17) trace->push_back({n, 0, rule235_name(static_cast<std::uint16_t>(Rule235::Alternating))});
    std::stable_sort(trace->begin(), trace->end(),
                     [](const TraceEntry& a, const TraceEntry& b) { return a.target < b.target; });
  }
  return seq;
}

}  // namespace pmult
