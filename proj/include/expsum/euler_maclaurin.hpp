#pragma once

#include "expsum/bernoulli.hpp"

#include <functional>
#include <vector>

namespace expsum {

/// Integer coefficients c_{k,j} of the closed-form derivative
/// f_x^{(k)}(s) = f_x(s) sum_j c_{k,j} (-x e^s)^j, built from
/// c_{0,0} = 1, c_{k+1,j} = (j+1) c_{k,j} + c_{k,j-1}.
class DerivCoeffTable {
 public:
  static constexpr int kMaxOrder = 64;

  explicit DerivCoeffTable(int k);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const BigInt& coeff(int j) const;
  BigInt coeff_sum() const;

 private:
  std::vector<BigInt> coeffs_;
};

inline DerivCoeffTable deriv_coeffs(int k) { return DerivCoeffTable(k); }

/// Uniform trapezoid grid on [a,b] with step h; (b-a)/h must be an integer.
struct TrapezoidSpec {
  double a;
  double b;
  double h;
  long cells;  // exact integer (b-a)/h

  TrapezoidSpec(double a, double b, double h);
};

/// Compensated-summation trapezoid rule (h/2) sum_j (g(a+jh) + g(a+(j+1)h)).
/// Throws if g produces a non-finite sample, naming the abscissa.
double trapezoid(const std::function<double(double)>& g, const TrapezoidSpec& spec);

/// f_x(s) = e^{-x e^s + s}, evaluated overflow-safely: the exponent is formed
/// first and underflow returns exact 0 even where e^s alone would overflow.
double fx_eval(double x, double s);

/// Closed-form k-th derivative of f_x at s via the coefficient table.
double fx_derivative(double x, double s, const DerivCoeffTable& table);

/// Lemma-style L1 bound (2/x) e^k (k+1)^{2k}, computed in log space.
double fx_l1_bound(double x, int k);

/// Adaptive quadrature of |f_x^{(k)}| over the whole real line; the window is
/// expanded until both tails are below tol.  k <= 12.
double fx_l1_numeric(double x, int k, double tol);

/// Adaptive Simpson with absolute tolerance; throws on depth exhaustion.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 30);

/// A function with closed-form derivatives: eval(s, 0) is g(s), eval(s, k)
/// its k-th derivative.
using SmoothFunction = std::function<double(double s, int order)>;

struct EMResidualReport {
  double integral_ref;    // reference integral of g over [a,b]
  double trapezoid_value;
  double periodic_term;   // h^{2N+1} int_0^K B_2N(s-[s])/(2N)! g^{(2N)}(a+sh) ds
  double boundary_term;   // sum_{j<=N} b_2j/(2j)! h^{2j} (g^{(2j-1)}(b)-g^{(2j-1)}(a))
  double defect;          // |(integral - trapezoid) - (periodic - boundary)|
};

/// Evaluates both sides of the order-N Euler-Maclaurin identity for g on the
/// given grid and reports how far they disagree.  The periodic-Bernoulli
/// integral is done cell by cell; the integrand is only piecewise smooth.
EMResidualReport em_residual(const SmoothFunction& g, const TrapezoidSpec& spec, int n_order,
                             const BernoulliTable& table);

}  // namespace expsum
