#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pmult/checked.hpp"

namespace pmult {

/// Zero, or the root of unity e^{2 pi i num / order} with 0 <= num < order
/// and gcd(num, order) = 1 (1 is num 0, order 1).
class UnitValue {
 public:
  UnitValue() = default;  // zero
  UnitValue(u64 num, u64 order);

  static UnitValue zero() { return {}; }
  static UnitValue one() { return {0, 1}; }
  static UnitValue minus_one() { return {1, 2}; }

  bool is_zero() const { return order_ == 0; }
  u64 num() const { return num_; }
  /// 0 for zero.
  u64 order() const { return order_; }

  UnitValue operator*(const UnitValue& o) const;
  UnitValue pow(u64 e) const;
  std::complex<double> to_complex() const;
  /// "0", "1", "-1" or "num/order".
  std::string str() const;

  bool operator==(const UnitValue&) const = default;

 private:
  u64 num_ = 0;
  u64 order_ = 0;
};

/// Parses "0", "1", "-1" or "num/order".
UnitValue parse_unit(const std::string& text);

/// Integer coefficients of the cyclotomic polynomial Phi_n, constant term first.
std::vector<i64> cyclotomic(u64 n);

/// An exact element of Z[zeta_Q]: sum_e coeff[e] zeta_Q^e.
class ExactSum {
 public:
  explicit ExactSum(u64 order = 1);

  u64 order() const { return coeffs_.size(); }
  const std::vector<i64>& coeffs() const { return coeffs_; }

  /// Adds `times` copies of u; u's order must divide Q.
  void add(const UnitValue& u, i64 times = 1);
  /// Adds u * other.
  void add_scaled(const ExactSum& other, const UnitValue& u, i64 times = 1);
  ExactSum operator-(const ExactSum& o) const;

  /// Exact test via reduction modulo Phi_Q.
  bool is_zero() const;
  bool operator==(const ExactSum& o) const { return (*this - o).is_zero(); }
  std::complex<double> to_complex() const;
  double abs() const { return std::abs(to_complex()); }

 private:
  std::vector<i64> coeffs_;
};

}  // namespace pmult
