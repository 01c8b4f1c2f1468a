#include "pmult/unit_value.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace pmult {

UnitValue::UnitValue(u64 num, u64 order) {
  if (order == 0) throw UsageError("root of unity order must be positive");
  num %= order;
  const u64 g = gcd(num, order);
  num_ = num / g;
  order_ = order / g;
  if (num_ == 0) order_ = 1;
}

UnitValue UnitValue::operator*(const UnitValue& o) const {
  if (is_zero() || o.is_zero()) return {};
  const u64 l = checked_mul(order_ / gcd(order_, o.order_), o.order_);
  return {(num_ * (l / order_) + o.num_ * (l / o.order_)) % l, l};
}

UnitValue UnitValue::pow(u64 e) const {
  if (is_zero()) return e == 0 ? one() : UnitValue{};
  // num * e mod order without overflow
  u64 r = 0;
  u64 base = num_ % order_;
  for (; e; e >>= 1) {
    if (e & 1) r = (r + base) % order_;
    base = (base * 2) % order_;
  }
  return {r, order_};
}

std::complex<double> UnitValue::to_complex() const {
  if (is_zero()) return {0, 0};
  if (order_ == 1) return {1, 0};
  if (order_ == 2) return {-1, 0};
  if (order_ == 4) return num_ == 1 ? std::complex<double>{0, 1} : std::complex<double>{0, -1};
  const double t = 2 * std::numbers::pi * static_cast<double>(num_) / static_cast<double>(order_);
  return {std::cos(t), std::sin(t)};
}

std::string UnitValue::str() const {
  if (is_zero()) return "0";
  if (order_ == 1) return "1";
  if (order_ == 2) return "-1";
  return std::to_string(num_) + "/" + std::to_string(order_);
}

UnitValue parse_unit(const std::string& text) {
  if (text == "0") return {};
  if (text == "1" || text == "+1") return UnitValue::one();
  if (text == "-1") return UnitValue::minus_one();
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw UsageError("bad unit value '" + text + "' (use 0, 1, -1 or num/order)");
  try {
    std::size_t used = 0;
    const u64 num = std::stoull(text.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("num");
    const std::string o = text.substr(slash + 1);
    const u64 order = std::stoull(o, &used);
    if (used != o.size() || text[0] == '-') throw std::invalid_argument("order");
    return {num, order};
  } catch (const std::logic_error&) {
    throw UsageError("bad unit value '" + text + "' (use 0, 1, -1 or num/order)");
  }
}

std::vector<i64> cyclotomic(u64 n) {
  if (n == 0) throw UsageError("cyclotomic: n must be positive");
  static std::mutex mu;
  static std::map<u64, std::vector<i64>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<i64> poly(n + 1, 0);
  poly[0] = -1;
  poly[n] = 1;
  for (u64 d = 1; d < n; ++d) {
    if (n % d) continue;
    const std::vector<i64> div = cyclotomic(d);
    const std::size_t dd = div.size() - 1;
    std::vector<i64> q(poly.size() - dd, 0);
    for (std::size_t i = poly.size() - 1; i + 1 > dd; --i) {
      const i64 c = poly[i];
      q[i - dd] = c;
      for (std::size_t t = 0; t <= dd; ++t) poly[i - dd + t] -= c * div[t];
      if (i == dd) break;
    }
    poly = std::move(q);
  }
  std::lock_guard lock(mu);
  cache.emplace(n, poly);
  return poly;
}

ExactSum::ExactSum(u64 order) : coeffs_(order, 0) {
  if (order == 0) throw UsageError("ExactSum order must be positive");
}

void ExactSum::add(const UnitValue& u, i64 times) {
  if (u.is_zero()) return;
  const u64 q = order();
  if (q % u.order()) throw UsageError("root of order " + std::to_string(u.order()) + " outside Z[zeta_" +
                                      std::to_string(q) + "]");
  i64& c = coeffs_[u.num() * (q / u.order())];
  c = checked_add(c, times);
}

void ExactSum::add_scaled(const ExactSum& other, const UnitValue& u, i64 times) {
  if (u.is_zero()) return;
  const u64 q = order();
  if (other.order() != q || q % u.order()) throw UsageError("ExactSum orders do not match");
  const u64 shift = u.num() * (q / u.order());
  for (u64 e = 0; e < q; ++e) {
    if (!other.coeffs_[e]) continue;
    i64& c = coeffs_[(e + shift) % q];
    c = checked_add(c, checked_mul(other.coeffs_[e], times));
  }
}

ExactSum ExactSum::operator-(const ExactSum& o) const {
  if (o.order() != order()) throw UsageError("ExactSum orders do not match");
  ExactSum out(order());
  for (u64 e = 0; e < order(); ++e) out.coeffs_[e] = checked_add(coeffs_[e], -o.coeffs_[e]);
  return out;
}

bool ExactSum::is_zero() const {
  const std::vector<i64> phi = cyclotomic(order());
  const std::size_t deg = phi.size() - 1;
  std::vector<i64> r = coeffs_;
  for (std::size_t i = r.size(); i-- > deg;) {
    const i64 c = r[i];
    if (!c) continue;
    for (std::size_t t = 0; t <= deg; ++t) r[i - deg + t] = checked_add(r[i - deg + t], checked_mul(-c, phi[t]));
  }
  for (std::size_t i = 0; i < std::min(deg, r.size()); ++i)
    if (r[i]) return false;
  return true;
}

std::complex<double> ExactSum::to_complex() const {
  std::complex<double> z{0, 0};
  const u64 q = order();
  for (u64 e = 0; e < q; ++e)
    if (coeffs_[e]) z += static_cast<double>(coeffs_[e]) * UnitValue(e, q).to_complex();
  return z;
}

}  // namespace pmult
