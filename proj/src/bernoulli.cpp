#include "expsum/bernoulli.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace expsum {

namespace {

// One row of Pascal's triangle: C(k,0..k), exact.
std::vector<BigInt> binomial_row(int k) {
  std::vector<BigInt> row(k + 1);
  row[0] = 1;
  for (int j = 1; j <= k; ++j) row[j] = row[j - 1] * (k - j + 1) / j;
  return row;
}

}  // namespace

BernoulliTable::BernoulliTable(int kmax) {
  if (kmax < 0) throw std::invalid_argument("BernoulliTable: kmax must be >= 0");
  if (kmax > kMaxOrder)
    throw std::length_error("BernoulliTable: kmax " + std::to_string(kmax) +
                            " exceeds capacity " + std::to_string(kMaxOrder));
  values_.resize(kmax + 1);
  values_[0] = 1;
  for (int m = 1; m <= kmax; ++m) {
    // sum_{j=0}^{m} C(m+1,j) b_j = 0 solved for b_m
    auto row = binomial_row(m + 1);
    Rational acc = 0;
    for (int j = 0; j < m; ++j) acc += Rational(row[j]) * values_[j];
    values_[m] = -acc / Rational(m + 1);
  }
}

const Rational& BernoulliTable::value(int k) const {
  if (k < 0 || k > kmax()) throw std::out_of_range("BernoulliTable: index out of range");
  return values_[k];
}

double BernoulliTable::value_as_double(int k) const {
  return static_cast<double>(value(k));
}

double bernoulli_poly_eval(const BernoulliTable& table, int k, double s) {
  if (k < 0 || k > table.kmax())
    throw std::out_of_range("bernoulli_poly_eval: k out of range");
  auto row = binomial_row(k);
  // coefficient of s^m is C(k, k-m) b_{k-m}; Horner from the top power
  double acc = 0.0;
  for (int m = k; m >= 0; --m) {
    double coeff = static_cast<double>(Rational(row[k - m]) * table.value(k - m));
    acc = acc * s + coeff;
  }
  return acc;
}

BernoulliBoundReport verify_bernoulli_bound(const BernoulliTable& table, int kmax,
                                            int grid) {
  if (2 * kmax > table.kmax())
    throw std::out_of_range("verify_bernoulli_bound: 2*kmax exceeds table");
  if (grid < 2) throw std::invalid_argument("verify_bernoulli_bound: grid must be >= 2");

  BernoulliBoundReport report;
  report.pass = true;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const double two_pi = 2.0 * std::numbers::pi;
  double factorial = 1.0;  // (2k)!
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) factorial *= (2.0 * k - 1.0) * (2.0 * k);
    const double bound = 4.0 / std::pow(two_pi, 2 * k);
    const double bk_scaled = std::abs(table.value_as_double(2 * k)) / factorial;
    if (bk_scaled > bound) report.pass = false;
    for (int i = 0; i < grid; ++i) {
      const double s = static_cast<double>(i) / (grid - 1);
      const double poly_scaled = std::abs(bernoulli_poly_eval(table, 2 * k, s)) / factorial;
      if (poly_scaled > bk_scaled * (1.0 + 1e-12) + 1e-300) report.pass = false;
      const double margin = bound - poly_scaled;
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_k = k;
        report.worst_s = s;
      }
    }
  }
  return report;
}

double zeta_even(const BernoulliTable& table, int k) {
  if (k < 1 || 2 * k > table.kmax()) throw std::out_of_range("zeta_even: k out of range");
  using Float = boost::multiprecision::cpp_bin_float_100;
  const Float two_pi = 2 * acos(Float(-1));
  Float pow_term = pow(two_pi, 2 * k);
  Float factorial = 1;
  for (int i = 2; i <= 2 * k; ++i) factorial *= i;
  Float b2k(table.value(2 * k));
  Float zeta = abs(b2k) * pow_term / (2 * factorial);
  return static_cast<double>(zeta);
}

}  // namespace expsum
