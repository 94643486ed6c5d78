#include "expsum/euler_maclaurin.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace expsum {

namespace {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double simpson_estimate(const std::function<double(double)>& f, double a, double fa,
                        double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double fa,
                       double b, double fb, double fm, double whole, double tol,
                       int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_estimate(f, a, fa, m, fm, flm);
  const double right = simpson_estimate(f, m, fm, b, fb, frm);
  const double err = left + right - whole;
  // second test: err has hit the roundoff floor of the panel sums, so further
  // refinement cannot improve the absolute error on large-magnitude integrands
  if (std::abs(err) <= 15.0 * tol ||
      std::abs(err) <= 1e-13 * (std::abs(left) + std::abs(right)))
    return left + right + err / 15.0;
  if (depth <= 0)
    throw std::runtime_error("adaptive_simpson: tolerance not met before depth cap");
  return simpson_recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson_estimate(f, a, fa, b, fb, fm);
  return simpson_recurse(f, a, fa, b, fb, fm, whole, tol, max_depth);
}

DerivCoeffTable::DerivCoeffTable(int k) {
  if (k < 0) throw std::invalid_argument("DerivCoeffTable: order must be >= 0");
  if (k > kMaxOrder)
    throw std::length_error("DerivCoeffTable: order " + std::to_string(k) +
                            " exceeds capacity " + std::to_string(kMaxOrder));
  coeffs_.assign(1, BigInt(1));
  for (int level = 0; level < k; ++level) {
    std::vector<BigInt> next(level + 2);
    for (int j = 0; j <= level + 1; ++j) {
      BigInt v = 0;
      if (j <= level) v += BigInt(j + 1) * coeffs_[j];
      if (j >= 1) v += coeffs_[j - 1];
      next[j] = v;
    }
    coeffs_ = std::move(next);
  }
}

const BigInt& DerivCoeffTable::coeff(int j) const {
  if (j < 0 || j > order()) throw std::out_of_range("DerivCoeffTable: index out of range");
  return coeffs_[j];
}

BigInt DerivCoeffTable::coeff_sum() const {
  BigInt s = 0;
  for (const auto& c : coeffs_) s += c;
  return s;
}

TrapezoidSpec::TrapezoidSpec(double a_, double b_, double h_) : a(a_), b(b_), h(h_) {
  if (!(a < b)) throw std::invalid_argument("TrapezoidSpec: need a < b");
  if (!(h > 0)) throw std::invalid_argument("TrapezoidSpec: need h > 0");
  const double ratio = (b - a) / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 4.0 * std::numeric_limits<double>::epsilon() * ratio + 1e-12)
    throw std::invalid_argument("TrapezoidSpec: (b-a)/h is not an integer");
  cells = static_cast<long>(rounded);
}

double trapezoid(const std::function<double(double)>& g, const TrapezoidSpec& spec) {
  KahanSum acc;
  double prev = g(spec.a);
  if (!std::isfinite(prev))
    throw std::runtime_error("trapezoid: non-finite sample at s=" + std::to_string(spec.a));
  for (long j = 1; j <= spec.cells; ++j) {
    const double s = (j == spec.cells) ? spec.b : spec.a + j * spec.h;
    const double cur = g(s);
    if (!std::isfinite(cur))
      throw std::runtime_error("trapezoid: non-finite sample at s=" + std::to_string(s));
    acc.add(prev + cur);
    prev = cur;
  }
  return 0.5 * spec.h * acc.sum;
}

double fx_eval(double x, double s) {
  if (!(x > 0)) throw std::domain_error("fx_eval: x must be positive");
  const double log_u = s + std::log(x);  // ln(x e^s)
  if (log_u > 709.0) return 0.0;         // -x e^s dominates; value underflows
  const double exponent = -std::exp(log_u) + s;
  if (exponent < -746.0) return 0.0;
  return std::exp(exponent);
}

double fx_derivative(double x, double s, const DerivCoeffTable& table) {
  if (!(x > 0)) throw std::domain_error("fx_derivative: x must be positive");
  const int k = table.order();
  const double log_u = s + std::log(x);
  if (log_u > 6.0) {
    // x e^s is large: evaluate term by term in log magnitude.  Terms have
    // well-separated magnitudes here, so per-term exponentials are safe.
    KahanSum acc;
    for (int j = 0; j <= k; ++j) {
      const double log_c = static_cast<double>(log(boost::multiprecision::cpp_bin_float_50(table.coeff(j))));
      const double log_term = log_c + j * log_u - std::exp(log_u) + s;
      if (log_term < -746.0) continue;
      const double term = std::exp(log_term);
      acc.add((j % 2 == 0) ? term : -term);
    }
    return acc.sum;
  }
  const double f = fx_eval(x, s);
  if (f == 0.0) return 0.0;
  const double u = std::exp(log_u);
  double poly = 0.0;
  for (int j = k; j >= 0; --j)
    poly = poly * (-u) + static_cast<double>(table.coeff(j));
  return f * poly;
}

double fx_l1_bound(double x, int k) {
  if (!(x > 0)) throw std::domain_error("fx_l1_bound: x must be positive");
  if (k < 0 || k > DerivCoeffTable::kMaxOrder)
    throw std::out_of_range("fx_l1_bound: k out of range");
  const double log_bound = std::log(2.0) + k + 2.0 * k * std::log(k + 1.0) - std::log(x);
  if (log_bound > std::log(std::numeric_limits<double>::max()))
    return std::numeric_limits<double>::infinity();
  return std::exp(log_bound);
}

double fx_l1_numeric(double x, int k, double tol) {
  if (!(x > 0)) throw std::domain_error("fx_l1_numeric: x must be positive");
  if (k < 0 || k > 12) throw std::out_of_range("fx_l1_numeric: k must be in [0,12]");
  if (!(tol > 0)) throw std::domain_error("fx_l1_numeric: tol must be positive");
  const DerivCoeffTable table(k);
  const auto integrand = [&](double s) { return std::abs(fx_derivative(x, s, table)); };
  // expand symmetric window about the peak near s = ln(1/x) until both tails
  // are negligible relative to tol
  const double center = std::log(1.0 / x);
  double lo = center - 5.0;
  double hi = center + 5.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double width = hi - lo;
    const double edge_tol = tol / width;
    const bool lo_ok = integrand(lo) < edge_tol;
    const bool hi_ok = integrand(hi) < edge_tol;
    if (lo_ok && hi_ok) break;
    if (!lo_ok) lo -= 5.0;
    if (!hi_ok) hi += 5.0;
  }
  // |f^(k)| has kinks where f^(k) changes sign (at most k of them); split the
  // window there so each adaptive pass sees a smooth integrand
  const auto signed_deriv = [&](double s) { return fx_derivative(x, s, table); };
  std::vector<double> cuts{lo};
  const int scan = 2000;
  double prev_s = lo;
  double prev_f = signed_deriv(lo);
  for (int i = 1; i <= scan; ++i) {
    const double s = lo + (hi - lo) * i / scan;
    const double fs = signed_deriv(s);
    if ((prev_f < 0.0) != (fs < 0.0) && prev_f != 0.0) {
      double a = prev_s, b = s;
      for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        if ((signed_deriv(m) < 0.0) == (prev_f < 0.0)) a = m; else b = m;
      }
      cuts.push_back(0.5 * (a + b));
    }
    prev_s = s;
    prev_f = fs;
  }
  cuts.push_back(hi);
  const double piece_tol = tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive_simpson(integrand, cuts[i], cuts[i + 1], piece_tol, 30);
  return total;
}

EMResidualReport em_residual(const SmoothFunction& g, const TrapezoidSpec& spec, int n_order,
                             const BernoulliTable& table) {
  if (n_order < 1) throw std::invalid_argument("em_residual: order must be >= 1");
  if (2 * n_order > table.kmax())
    throw std::invalid_argument("em_residual: Bernoulli table too short for order");
  if (!g) throw std::invalid_argument("em_residual: missing function handle");

  EMResidualReport report;
  const auto g0 = [&](double s) { return g(s, 0); };
  report.trapezoid_value = trapezoid(g0, spec);
  report.integral_ref = adaptive_simpson(g0, spec.a, spec.b, 1e-12, 30);

  // boundary sum: sum_{j=1}^N b_2j/(2j)! h^2j (g^(2j-1)(b) - g^(2j-1)(a))
  double factorial = 1.0;
  double h_pow = 1.0;
  KahanSum boundary;
  for (int j = 1; j <= n_order; ++j) {
    factorial *= (2.0 * j - 1.0) * (2.0 * j);
    h_pow *= spec.h * spec.h;
    const double b2j = table.value_as_double(2 * j);
    boundary.add(b2j / factorial * h_pow * (g(spec.b, 2 * j - 1) - g(spec.a, 2 * j - 1)));
  }
  report.boundary_term = boundary.sum;

  // periodic-Bernoulli integral, one unit cell at a time
  const int two_n = 2 * n_order;
  double fact_2n = 1.0;
  for (int i = 2; i <= two_n; ++i) fact_2n *= i;
  KahanSum periodic;
  const double cell_tol = 1e-13 / static_cast<double>(spec.cells);
  for (long cell = 0; cell < spec.cells; ++cell) {
    const auto cell_integrand = [&](double s) {
      const double frac = s - cell;  // s - [s] within this cell
      return bernoulli_poly_eval(table, two_n, frac) / fact_2n *
             g(spec.a + s * spec.h, two_n);
    };
    periodic.add(adaptive_simpson(cell_integrand, static_cast<double>(cell),
                                  static_cast<double>(cell + 1), cell_tol, 30));
  }
  report.periodic_term = std::pow(spec.h, two_n + 1) * periodic.sum;

  const double lhs = report.integral_ref - report.trapezoid_value;
  const double rhs = report.periodic_term - report.boundary_term;
  report.defect = std::abs(lhs - rhs);
  return report;
}

}  // namespace expsum
