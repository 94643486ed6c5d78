#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace expsum {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact Bernoulli numbers b_0..b_kmax as arbitrary-precision rationals.
///
/// Built from the recursion b_0 = 1, sum_{j=0}^{k-1} C(k,j) b_j = 0 for
/// k >= 2.  No floating point is involved in construction; floats appear
/// only at the evaluation boundary (value_as_double, poly evaluation).
class BernoulliTable {
 public:
  static constexpr int kMaxOrder = 256;

  explicit BernoulliTable(int kmax);

  int kmax() const { return static_cast<int>(values_.size()) - 1; }
  const Rational& value(int k) const;
  double value_as_double(int k) const;

 private:
  std::vector<Rational> values_;
};

inline BernoulliTable bernoulli_numbers(int kmax) { return BernoulliTable(kmax); }

/// B_k(s) = sum_{j=0}^k C(k,j) b_j s^{k-j}, evaluated by Horner after
/// converting each exact-rational coefficient to the nearest double.
/// Requires k <= table.kmax() and s in [0,1].
double bernoulli_poly_eval(const BernoulliTable& table, int k, double s);

struct BernoulliBoundReport {
  bool pass = false;
  double worst_margin = 0.0;  // min over (k,s) of bound - |B_2k(s)|/(2k)!
  int worst_k = 0;
  double worst_s = 0.0;
};

/// Checks |B_{2k}(s)|/(2k)! <= |b_{2k}|/(2k)! <= 4/(2*pi)^{2k} for all
/// k <= kmax on a uniform grid of [0,1] with `grid` points.
BernoulliBoundReport verify_bernoulli_bound(const BernoulliTable& table, int kmax,
                                            int grid);

/// zeta(2k) via Euler's closed form (-1)^{k+1} b_{2k} (2*pi)^{2k} / (2*(2k)!).
double zeta_even(const BernoulliTable& table, int k);

}  // namespace expsum
