#include "pmult/constructor_general.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace pmult {

namespace {

std::uint16_t relation_tag(unsigned level, LevelStep step) {
  return static_cast<std::uint16_t>(level * 4 + static_cast<unsigned>(step));
}

bool coprime_to_all(u64 n, std::span<const u64> primes) {
  for (u64 p : primes)
    if (n % p == 0) return false;
  return true;
}

}  // namespace

bool LevelState::is_free(u64 n) const {
  if (n <= modulus) return false;
  const u64 t = (n - 1) % modulus + 1;
  return std::binary_search(free_offsets.begin(), free_offsets.end(), t);
}

std::vector<u64> LevelState::free_elements(u64 horizon) const {
  std::vector<u64> out;
  for (u64 base = modulus; base < horizon; base += modulus)
    for (u64 t : free_offsets) {
      if (base + t > horizon) break;
      out.push_back(base + t);
    }
  return out;
}

std::vector<Relation> LevelState::relations(u64 horizon) const {
  std::vector<Relation> out;
  for (const Relation& r : prefix_relations)
    if (r.target <= horizon) out.push_back(r);
  for (u64 base = modulus; base < horizon; base += modulus)
    for (const BlockRelation& r : block_relations)
      if (base + r.target <= horizon)
        out.push_back({base + r.source, base + r.target, RuleKind::Relation, relation_tag(level, r.step)});
  return out;
}

const LevelState& Construction::level(unsigned j) const {
  for (const LevelState& l : levels)
    if (l.level == j) return l;
  throw UsageError("construction has no level " + std::to_string(j));
}

LevelState base_step(const PrimeSet& primes) {
  const std::size_t k = primes.size();
  if (k < 3) throw UsageError("the general construction needs at least three primes");
  const u64 big = primes.product();
  const u64 small = primes.coprime_part();
  const u64 p_hi = primes[k - 1];
  const u64 p_mid = primes[k - 2];

  LevelState out;
  out.level = static_cast<unsigned>(k - 1);
  out.modulus = big;
  std::vector<u64> coprime;  // U_M
  std::vector<u64> paired;   // V_M
  for (u64 t = 1; t <= big; ++t) {
    if (gcd(t, big) == 1)
      coprime.push_back(t);
    else if (gcd(t, small) == 1 && (t % p_hi == 0 || t % p_mid == 0))
      paired.push_back(t);
  }
  if (coprime.size() <= paired.size())
    throw CountingFailure("|U_M| = " + std::to_string(coprime.size()) + " <= |V_M| = " + std::to_string(paired.size()));
  for (std::size_t i = 0; i < paired.size(); ++i)
    out.block_relations.push_back({paired[i], coprime[i], LevelStep::Base});
  out.free_offsets.assign(coprime.begin() + static_cast<std::ptrdiff_t>(paired.size()), coprime.end());
  out.surplus = coprime.size() - paired.size();
  return out;
}

unsigned min_exponent(u64 free_count, u64 p, u64 modulus) {
  if (free_count == 0) throw UsageError("min_exponent: the free set is empty");
  if (p < 2) throw UsageError("min_exponent: p must be prime");
  // s_a = sum_{r<a} (-1)^r p^{a-1-r} satisfies s_1 = 1, s_a = p s_{a-1} + (-1)^{a-1}.
  u64 s = 1;
  for (unsigned a = 1;; ++a) {
    if (checked_mul(checked_mul(free_count, s), p) > modulus) return a;
    s = checked_mul(s, p);
    s = (a % 2 == 1) ? s - 1 : checked_add(s, u64{1});
  }
}

LevelState refine_level(const LevelState& upper, const PrimeSet& primes) {
  if (upper.level < 2) throw UsageError("level 1 cannot be refined further");
  const unsigned j = upper.level - 1;
  const u64 p = primes[j - 1];
  const u64 b = upper.modulus;
  const std::span<const u64> lower = primes.primes().subspan(0, j - 1);
  const auto& free = upper.free_offsets;
  const std::size_t width = free.size();

  LevelState out;
  out.level = j;
  out.prime = p;
  out.exponent = min_exponent(width, p, b);
  const u64 span = checked_pow(p, out.exponent);  // level-j+1 blocks per level-j block
  out.modulus = checked_mul(span, b);
  const u64 base = out.modulus;  // block M = 1

  auto p_valuation = [&](u64 q) {
    unsigned s = 0;
    while (q % p == 0 && s < out.exponent) q /= p, ++s;
    return s;
  };

  // Lift (step 1) for the upper blocks inside [1, b_j]; these complete the
  // telescoping chains that reach back below the first full block.
  for (u64 q = p; q < span; q += p)
    for (u64 t : free)
      out.prefix_relations.push_back(
          {p * (b * (q / p) + t), b * q + t, RuleKind::Relation, relation_tag(j, LevelStep::Lift)});

  std::vector<std::uint8_t> taken(span * width, 0);
  for (u64 r = 0; r < span; ++r) {
    const u64 q = span + r;
    if (q % p != 0) continue;
    const unsigned s = p_valuation(q);
    for (std::size_t i = 0; i < width; ++i) {
      const u64 n = b * q + free[i];
      out.block_relations.push_back({p * (b * (q / p) + free[i]) - base, n - base, LevelStep::Lift});
      taken[r * width + i] = 1;
      if (s % 2 == 0) {
        out.block_relations.push_back({n - base, n + b - base, LevelStep::Shift});
        taken[(r + 1) * width + i] = 1;
      }
    }
  }

  // Offsets (relative to the block start) of the free elements not lifted or shifted.
  std::vector<u64> remaining;
  for (u64 r = 0; r < span; ++r)
    for (std::size_t i = 0; i < width; ++i)
      if (!taken[r * width + i]) remaining.push_back(b * r + free[i]);

  const u64 step = checked_mul(span, p);  // p^{a+1}
  std::vector<u64> multiples;
  for (u64 off = step; off <= out.modulus; off += step)
    if (coprime_to_all(base + off, lower)) multiples.push_back(off);

  if (remaining.size() <= multiples.size())
    throw SurplusFailure("level " + std::to_string(j) + ": " + std::to_string(remaining.size()) +
                         " free elements for " + std::to_string(multiples.size()) + " multiples of p^(a+1)");
  for (std::size_t i = 0; i < multiples.size(); ++i)
    out.block_relations.push_back({multiples[i], remaining[i], LevelStep::Absorb});
  out.free_offsets.assign(remaining.begin() + static_cast<std::ptrdiff_t>(multiples.size()), remaining.end());
  out.surplus = remaining.size() - multiples.size();
  return out;
}

Construction build_levels(const PrimeSet& primes) {
  Construction c;
  c.primes = primes;
  c.levels.push_back(base_step(primes));
  while (c.levels.back().level > 1) {
    LevelState next = refine_level(c.levels.back(), primes);
    c.levels.push_back(std::move(next));
  }
  return c;
}

std::vector<Relation> relations_through(const Construction& c, unsigned j, u64 horizon) {
  std::vector<Relation> out;
  for (const LevelState& l : c.levels) {
    if (l.level < j) continue;
    auto rel = l.relations(horizon);
    out.insert(out.end(), rel.begin(), rel.end());
  }
  return out;
}

RuleProgram finalize(const Construction& c, std::vector<int> prime_signs, const FreeValueFn& seed_value, u64 horizon) {
  if (prime_signs.size() != c.primes.size()) throw UsageError("finalize: one sign per prime required");
  for (int s : prime_signs)
    if (s != 1 && s != -1) throw UsageError("prime signs must be +1 or -1");
  RuleProgram prog;
  prog.primes = c.primes;
  prog.prime_signs = std::move(prime_signs);
  prog.horizon = horizon;
  prog.relations = relations_through(c, 1, horizon);

  const auto chain = c.levels.back().free_elements(horizon);
  for (std::size_t i = 1; i < chain.size(); ++i)
    prog.relations.push_back({chain[i - 1], chain[i], RuleKind::Chain, 0});

  std::vector<std::uint8_t> targeted(horizon + 1, 0);
  for (const Relation& r : prog.relations) targeted[r.target] = 1;
  const u64 big = c.primes.product();
  for (u64 n = 1; n <= horizon; ++n) {
    if (targeted[n] || gcd(n, big) != 1) continue;
    const int v = n == 1 ? 1 : (seed_value ? seed_value(n) : 1);
    if (v != 1 && v != -1) throw UsageError("seed values must be +1 or -1");
    prog.seeds.emplace_back(n, v);
  }
  return prog;
}

std::vector<TelescopingChain> telescoping_chains(const Construction& c, unsigned j, u64 horizon) {
  const LevelState& lvl = c.level(j);
  const LevelState& upper = c.level(j + 1);
  const u64 p = lvl.prime;
  const u64 b = upper.modulus;
  const u64 first_block = checked_pow(p, lvl.exponent);  // q of the first full level-j block
  std::vector<TelescopingChain> out;
  for (u64 q = first_block; b * q < horizon; ++q) {
    if (q % p != 0) continue;
    unsigned s = 0;
    u64 m = q;
    while (m % p == 0 && s < lvl.exponent) m /= p, ++s;
    for (u64 t : upper.free_offsets) {
      TelescopingChain chain;
      chain.origin = b * q + t;
      chain.length = s;
      bool inside = true;
      for (unsigned r = 0; r <= s; ++r) {
        const u64 inner = checked_add(checked_mul(checked_pow(p, s - r), checked_mul(b, m)), t);
        const u64 term = checked_mul(checked_pow(p, r), inner);
        if (term > horizon) {
          inside = false;
          break;
        }
        chain.terms.push_back(term);
      }
      if (inside) out.push_back(std::move(chain));
    }
  }
  return out;
}

void write_levels_csv(const Construction& c, u64 horizon, std::ostream& out) {
  std::string buf = "level,b,a,block,free_count,relation_count\n";
  for (const LevelState& l : c.levels) {
    const std::string head = std::to_string(l.level) + "," + std::to_string(l.modulus) + "," +
                             std::to_string(l.exponent) + ",";
    for (u64 m = 0; (m + 1) * l.modulus <= horizon; ++m) {
      const u64 free_count = m == 0 ? 0 : l.free_offsets.size();
      const u64 rel_count = m == 0 ? l.prefix_relations.size() : l.block_relations.size();
      buf += head + std::to_string(m) + "," + std::to_string(free_count) + "," + std::to_string(rel_count) + "\n";
    }
  }
  out << buf;
}

}  // namespace pmult
