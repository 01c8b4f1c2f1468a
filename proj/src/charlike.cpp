#include "pmult/charlike.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

namespace pmult {

namespace {

u64 lcm(u64 a, u64 b) { return checked_mul(a / gcd(a, b), b); }

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool better(double candidate, double best) { return candidate > best + 1e-9; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

int kronecker_symbol(i64 a, u64 n) {
  if (n == 0) throw UsageError("kronecker_symbol: n must be positive");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    const i64 r = ((a % 8) + 8) % 8;
    if (r % 2 == 0) return 0;
    if (r == 3 || r == 5) result = -result;
  }
  if (n == 1) return result;
  u64 x = static_cast<u64>(((a % static_cast<i64>(n)) + static_cast<i64>(n)) % static_cast<i64>(n));
  u64 m = n;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      if (m % 8 == 3 || m % 8 == 5) result = -result;
    }
    std::swap(x, m);
    if (x % 4 == 3 && m % 4 == 3) result = -result;
    x %= m;
  }
  return m == 1 ? result : 0;
}

DirichletCharacter::DirichletCharacter(u64 modulus, std::vector<UnitValue> values)
    : modulus_(modulus), values_(std::move(values)) {
  if (modulus_ == 0) throw UsageError("character modulus must be positive");
  if (values_.size() != modulus_)
    throw UsageError("character table needs " + std::to_string(modulus_) + " values, got " +
                     std::to_string(values_.size()));
  for (u64 a = 0; a < modulus_; ++a) {
    if (values_[a].is_zero() != (gcd(a, modulus_) != 1))
      throw UsageError("character value at " + std::to_string(a) + " must be zero iff gcd(a, q) > 1");
    if (!values_[a].is_zero()) order_ = lcm(order_, values_[a].order());
  }
  if (values_[1 % modulus_] != UnitValue::one()) throw UsageError("character must take 1 at 1");
  for (u64 a = 1; a < modulus_; ++a)
    for (u64 b = a; b < modulus_; ++b)
      if (values_[a * b % modulus_] != values_[a] * values_[b])
        throw UsageError("character table is not multiplicative at " + std::to_string(a) + " * " + std::to_string(b));
}

DirichletCharacter DirichletCharacter::quadratic(u64 q) {
  if (q < 3 || q % 2 == 0) throw UsageError("quadratic characters need an odd modulus >= 3");
  std::vector<UnitValue> v(q);
  for (u64 a = 0; a < q; ++a) {
    const int k = kronecker_symbol(static_cast<i64>(a), q);
    v[a] = k == 0 ? UnitValue::zero() : k == 1 ? UnitValue::one() : UnitValue::minus_one();
  }
  return {q, std::move(v)};
}

DirichletCharacter DirichletCharacter::principal(u64 q) {
  std::vector<UnitValue> v(q);
  for (u64 a = 0; a < q; ++a) v[a] = gcd(a, q) == 1 ? UnitValue::one() : UnitValue::zero();
  return {q, std::move(v)};
}

DirichletCharacter DirichletCharacter::from_json(const nlohmann::json& j) {
  try {
    const u64 q = j.at("modulus").get<u64>();
    std::vector<UnitValue> v;
    for (const auto& e : j.at("values")) {
      if (e.is_number_integer()) {
        const i64 k = e.get<i64>();
        if (k == 0) v.emplace_back();
        else if (k == 1) v.push_back(UnitValue::one());
        else if (k == -1) v.push_back(UnitValue::minus_one());
        else throw UsageError("character values must be 0, 1, -1 or {num, order}");
      } else {
        v.emplace_back(e.at("num").get<u64>(), e.at("order").get<u64>());
      }
    }
    return {q, std::move(v)};
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad character JSON: ") + e.what());
  }
}

UnitValue character_eval(const DirichletCharacter& chi, u64 n) {
  if (n == 0) throw UsageError("character_eval: n must be >= 1");
  return chi(n);
}

CharLikeFunction::CharLikeFunction(DirichletCharacter chi, std::map<u64, UnitValue> overrides)
    : chi_(std::move(chi)), overrides_(std::move(overrides)) {
  const auto ps = prime_factors(chi_.modulus());
  if (!ps.empty()) primes_ = PrimeSet(ps);
  order_ = chi_.order();
  for (const auto& [p, v] : overrides_) {
    if (!std::binary_search(ps.begin(), ps.end(), p))
      throw UsageError("override at " + std::to_string(p) + ": not a prime dividing " +
                       std::to_string(chi_.modulus()));
    if (!v.is_zero()) order_ = lcm(order_, v.order());
  }
}

UnitValue CharLikeFunction::operator()(u64 n) const {
  if (n == 0) return {};
  UnitValue v = UnitValue::one();
  for (u64 p : primes_.primes()) {
    if (n % p) continue;
    const auto it = overrides_.find(p);
    if (it == overrides_.end() || it->second.is_zero()) return {};
    while (n % p == 0) n /= p, v = v * it->second;
  }
  return v * chi_(n);
}

bool CharLikeFunction::is_character_like() const {
  return std::any_of(overrides_.begin(), overrides_.end(), [](const auto& kv) { return !kv.second.is_zero(); });
}

CharLikeFunction CharLikeFunction::restricted(u64 coprime_to) const {
  if (coprime_to == 0) throw UsageError("P' must be positive");
  auto o = overrides_;
  for (u64 p : prime_factors(coprime_to)) {
    if (!primes_.contains(p))
      throw UsageError("P' = " + std::to_string(coprime_to) + " must divide " + std::to_string(chi_.modulus()));
    o[p] = UnitValue::zero();
  }
  return {chi_, std::move(o)};
}

CharLikeFunction make_charlike(DirichletCharacter chi, std::map<u64, UnitValue> overrides) {
  CharLikeFunction f(std::move(chi), std::move(overrides));
  if (!f.is_character_like()) throw UsageError("every override is zero, so f is a Dirichlet character");
  return f;
}

ExactSum charlike_sum(const CharLikeFunction& f, u64 x) {
  ExactSum s(f.order());
  for (u64 n = 1; n <= x; ++n) s.add(f(n));
  return s;
}

ExactSum fast_sum(const CharLikeFunction& f, u64 x) {
  const DirichletCharacter& chi = f.character();
  const u64 q = chi.modulus();
  std::vector<ExactSum> prefix(q + 1, ExactSum(f.order()));
  for (u64 r = 1; r <= q; ++r) {
    prefix[r] = prefix[r - 1];
    prefix[r].add(chi(r));
  }
  ExactSum s(f.order());
  const auto ps = f.primes().primes();
  std::function<void(std::size_t, u64, UnitValue)> walk = [&](std::size_t i, u64 d, UnitValue fd) {
    if (i == ps.size()) {
      const u64 y = x / d;
      s.add_scaled(prefix[q], fd, static_cast<i64>(y / q));
      s.add_scaled(prefix[y % q], fd);
      return;
    }
    walk(i + 1, d, fd);
    const UnitValue fp = f(ps[i]);
    if (fp.is_zero()) return;
    for (u64 dd = d; dd <= x / ps[i];) {
      dd *= ps[i];
      fd = fd * fp;
      walk(i + 1, dd, fd);
    }
  };
  if (x > 0) walk(0, 1, UnitValue::one());
  return s;
}

PrefixSums::PrefixSums(const CharLikeFunction& f, u64 limit, u64 coprime_to) : limit_(limit), order_(f.order()) {
  if (limit >= (u64{1} << 31)) throw UsageError("prefix table limit must be below 2^31");
  std::vector<std::uint8_t> skip(limit + 1, 0);
  for (u64 p : prime_factors(coprime_to))
    for (u64 m = p; m <= limit; m += p) skip[m] = 1;
  table_.assign((limit + 1) * order_, 0);
  for (u64 n = 1; n <= limit; ++n) {
    std::copy_n(table_.begin() + static_cast<std::ptrdiff_t>((n - 1) * order_), order_,
                table_.begin() + static_cast<std::ptrdiff_t>(n * order_));
    if (skip[n]) continue;
    const UnitValue v = f(n);
    if (!v.is_zero()) table_[n * order_ + v.num() * (order_ / v.order())] += 1;
  }
}

ExactSum PrefixSums::at(u64 x) const {
  if (x > limit_) throw UsageError("prefix table ends at " + std::to_string(limit_));
  ExactSum s(order_);
  for (u64 e = 0; e < order_; ++e) s.add(UnitValue(e, order_), table_[x * order_ + e]);
  return s;
}

std::vector<std::pair<u64, int>> squarefree_divisors(u64 p_prime) {
  if (p_prime == 0) throw UsageError("P' must be positive");
  const auto ps = prime_factors(p_prime);
  u64 rad = 1;
  for (u64 p : ps) rad *= p;
  if (rad != p_prime) throw UsageError("P' = " + std::to_string(p_prime) + " is not squarefree");
  std::vector<std::pair<u64, int>> out;
  for (u64 mask = 0; mask < (u64{1} << ps.size()); ++mask) {
    u64 d = 1;
    int mu = 1;
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (mask >> i & 1) d *= ps[i], mu = -mu;
    out.emplace_back(d, mu);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

MobiusResult combine(const CharLikeFunction& f, u64 p_prime, u64 x, const std::function<ExactSum(u64)>& s_f,
                     ExactSum direct) {
  MobiusResult r{ExactSum(f.order()), ExactSum(f.order()), std::move(direct)};
  for (auto [d, mu] : squarefree_divisors(p_prime)) {
    const ExactSum s = s_f(x / d);
    r.with_factor.add_scaled(s, f(d), mu);
    r.without_factor.add_scaled(s, UnitValue::one(), mu);
  }
  r.with_factor_holds = r.with_factor == r.direct;
  r.without_factor_holds = r.without_factor == r.direct;
  if (!r.with_factor_holds && !r.without_factor_holds)
    throw DecompositionMismatch("neither decomposition matches the restricted sum at x = " + std::to_string(x));
  return r;
}

void require_divides(const CharLikeFunction& f, u64 p_prime) {
  for (u64 p : prime_factors(p_prime))
    if (!f.primes().contains(p))
      throw UsageError("P' = " + std::to_string(p_prime) + " must divide " + std::to_string(f.character().modulus()));
}

}  // namespace

MobiusResult mobius_decompose(const CharLikeFunction& f, u64 p_prime, u64 x) {
  require_divides(f, p_prime);
  ExactSum direct(f.order());
  for (u64 n = 1; n <= x; ++n)
    if (gcd(n, p_prime) == 1) direct.add(f(n));
  return combine(f, p_prime, x, [&](u64 y) { return fast_sum(f, y); }, std::move(direct));
}

MobiusResult mobius_decompose(const CharLikeFunction& f, u64 p_prime, u64 x, const PrefixSums& full,
                              const PrefixSums& restricted) {
  require_divides(f, p_prime);
  return combine(f, p_prime, x, [&](u64 y) { return full.at(y); }, restricted.at(x));
}

u64 find_k(const CharLikeFunction& restricted, u64 p_prime, u64 k_max) {
  for (u64 k = 1; k <= k_max; ++k)
    if (!fast_sum(restricted, checked_mul(k, p_prime)).is_zero()) return k;
  throw NotFound("no k <= " + std::to_string(k_max) + " with S'(k P') != 0");
}

Witness witness_search(const CharLikeFunction& restricted, u64 k, u64 p_prime, u64 p, unsigned digits,
                       unsigned m_max, WitnessMethod method) {
  if (digits == 0) throw UsageError("witness search needs at least one digit");
  if (digits > m_max + 1u) throw UsageError("more digits than exponents 0..m_max");
  if (!is_prime(p) || restricted(p).is_zero()) throw UsageError("p must be a prime with f'(p) != 0");
  std::vector<u64> term(m_max + 1);
  for (unsigned m = 0; m <= m_max; ++m) term[m] = checked_mul(checked_mul(k, p_prime), checked_pow(p, m));
  u64 total = 0;
  for (unsigned m = m_max + 1 - digits; m <= m_max; ++m) total = checked_add(total, term[m]);
  (void)total;  // the largest x fits in 64 bits

  auto value = [&](const std::vector<unsigned>& ms) {
    u64 x = 0;
    for (unsigned m : ms) x += term[m];
    return std::make_pair(x, fast_sum(restricted, x).abs());
  };

  Witness greedy{k, p, digits};
  double greedy_best = -1;
  if (method != WitnessMethod::Exhaustive) {
    std::vector<unsigned> chosen;
    std::vector<bool> used(m_max + 1, false);
    for (unsigned step = 0; step < digits; ++step) {
      double best = -1;
      unsigned pick = 0;
      for (unsigned m = 0; m <= m_max; ++m) {
        if (used[m]) continue;
        auto trial = chosen;
        trial.push_back(m);
        const double v = value(trial).second;
        if (better(v, best)) best = v, pick = m;
      }
      used[pick] = true;
      chosen.push_back(pick);
    }
    std::sort(chosen.begin(), chosen.end());
    greedy.exponents = chosen;
    std::tie(greedy.x, greedy_best) = value(chosen);
    greedy.s_prime_abs = greedy_best;
    if (method == WitnessMethod::Greedy || digits > 6) {
      greedy.ratio = greedy_best / digits;
      return greedy;
    }
  } else if (digits > 6) {
    throw UsageError("exhaustive witness search is limited to 6 digits");
  }

  Witness best{k, p, digits};
  double best_v = -1;
  std::vector<unsigned> pick(digits);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned from) {
    if (i == digits) {
      const auto [x, v] = value(pick);
      if (better(v, best_v)) best_v = v, best.exponents = pick, best.x = x;
      return;
    }
    for (unsigned m = from; m + (digits - i) <= m_max + 1; ++m) {
      pick[i] = m;
      rec(i + 1, m + 1);
    }
  };
  rec(0, 0);
  best.s_prime_abs = best_v;
  if (method == WitnessMethod::Best && !better(best_v, greedy_best)) best = greedy;
  best.ratio = best.s_prime_abs / digits;
  return best;
}

nlohmann::ordered_json to_json(const Witness& w) {
  nlohmann::ordered_json j;
  j["k"] = w.k;
  j["p"] = w.p;
  j["digits"] = w.digits;
  j["exponents"] = w.exponents;
  j["x"] = w.x;
  j["s_prime_abs"] = w.s_prime_abs;
  j["ratio"] = w.ratio;
  return j;
}

std::vector<GrowthRow> growth_profile(const CharLikeFunction& f, u64 limit, u64 stride) {
  if (limit < 10) throw UsageError("growth profile needs X >= 10");
  if (stride < 2) throw UsageError("growth stride must be >= 2");
  std::vector<u64> marks;
  for (u64 c = 10; c <= limit; c = c > limit / stride ? limit + 1 : c * stride) marks.push_back(c);
  if (marks.back() != limit) marks.push_back(limit);

  const double omega = static_cast<double>(f.primes().size());
  std::vector<GrowthRow> rows;
  std::complex<double> s{0, 0};
  double running = 0;
  std::size_t next = 0;
  for (u64 n = 1; n <= limit; ++n) {
    s += f(n).to_complex();
    running = std::max(running, std::abs(s));
    if (n == marks[next]) {
      const double lx = std::log(static_cast<double>(n));
      rows.push_back({n, running, lx, running / lx, 3 * std::pow(std::log2(static_cast<double>(n)), omega)});
      ++next;
    }
  }
  return rows;
}

void write_growth_csv(const std::vector<GrowthRow>& rows, std::ostream& out) {
  std::string buf = "x,running_max_abs,log_x,ratio,upper_bound\n";
  for (const GrowthRow& r : rows)
    buf += std::to_string(r.x) + "," + fmt(r.running_max_abs) + "," + fmt(r.log_x) + "," + fmt(r.ratio) + "," +
           fmt(r.upper_bound) + "\n";
  out << buf;
}

}  // namespace pmult
