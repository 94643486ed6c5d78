#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expsum/euler_maclaurin.hpp"
#include "expsum/expsum.hpp"

#include <cmath>

using namespace expsum;

namespace {
const double kEpsGrid[] = {1.0, 0.1, 0.01};
const double kDeltaGrid[] = {0.1, 0.01, 0.001};
}

TEST_CASE("parameter selection, frozen values") {
  SUBCASE("eps=0.1, delta=0.01") {
    const auto p = select_params(0.1, 0.01);
    CHECK(p.n_order == 3);
    CHECK(p.h == doctest::Approx(0.0173538).epsilon(1e-5));
    CHECK(p.lower == -197);  // paper formula -196, widened
    CHECK(p.upper == 337);   // paper formula 336, widened
    CHECK(p.sparsity == 535);
  }
  SUBCASE("eps=1, delta=1") {
    const auto p = select_params(1.0, 1.0);
    CHECK(p.n_order == 2);
    CHECK(p.h == doctest::Approx(2.0 * M_PI / (std::exp(2.0) * 25.0)).epsilon(1e-14));
    CHECK(p.lower == -34);  // paper formula -33
    CHECK(p.upper == 4);    // paper formula 3
    CHECK(p.sparsity == 39);
  }
  SUBCASE("B monotone in delta") {
    const auto coarse = select_params(0.1, 0.1);
    const auto fine = select_params(0.1, 0.01);
    CHECK(coarse.n_order == fine.n_order);
    CHECK(coarse.h == fine.h);
    CHECK(coarse.upper < fine.upper);
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(select_params(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(select_params(1.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(select_params(0.5, -0.1), std::domain_error);
  }
}

TEST_CASE("sparsity equals widened index span") {
  for (double eps : kEpsGrid) {
    for (double delta : kDeltaGrid) {
      const auto [a, b] = truncation_indices(eps, delta);
      const auto p = select_params(eps, delta);
      CHECK(p.lower == a - 1);
      CHECK(p.upper == b + 1);
      CHECK(p.sparsity == (b + 1) - (a - 1) + 1);
    }
  }
}

TEST_CASE("quadrature nodes and weights") {
  const auto p = select_params(0.1, 0.01);
  const auto quad = build_quadrature(p);
  REQUIRE(static_cast<long>(quad.nodes.size()) == p.sparsity);

  // j = 0 term: t = 1, w = h
  const auto zero_index = static_cast<std::size_t>(-p.lower);
  CHECK(quad.nodes[zero_index] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(quad.weights[zero_index] == doctest::Approx(p.h).epsilon(1e-15));

  CHECK(quad.nodes.back() ==
        doctest::Approx(std::exp(337.0 * p.h)).epsilon(1e-14));

  double sum = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    CHECK(quad.weights[i] > 0.0);
    CHECK(quad.weights[i] == doctest::Approx(p.h * quad.nodes[i]).epsilon(1e-15));
    if (i > 0) CHECK(quad.nodes[i] > quad.nodes[i - 1]);
    sum += quad.weights[i];
  }
  CHECK(std::isfinite(sum));
}

TEST_CASE("node bracket around the cut points") {
  for (double eps : kEpsGrid) {
    for (double delta : kDeltaGrid) {
      const auto quad = build_quadrature(eps, delta);
      const auto& t = quad.nodes;
      const std::size_t n = t.size();
      CHECK(t[0] <= eps / 3.0);
      CHECK(eps / 3.0 <= t[2]);
      const double upper_cut = std::log(3.0 / eps) / delta;
      CHECK(t[n - 3] <= upper_cut);
      CHECK(upper_cut <= t[n - 1]);
      // magnitude claim: largest node within one step of the cut point
      CHECK(t[n - 1] <= std::exp(quad.params.h) * upper_cut * std::exp(quad.params.h));
    }
  }
}

TEST_CASE("evaluation basics") {
  const auto quad = build_quadrature(0.1, 0.01);
  CHECK(eval_expsum(quad, 1.0) > 0.9);
  CHECK(eval_expsum(quad, 1.0) < 1.1);
  CHECK(eval_expsum(quad, 0.01) > 90.0);
  CHECK(eval_expsum(quad, 0.01) < 110.0);
  CHECK(eval_expsum(quad, 1e6) < 1e-3);
  CHECK_THROWS_AS(eval_expsum(quad, 0.0), std::domain_error);
  CHECK_THROWS_AS(eval_expsum(quad, -1.0), std::domain_error);
}

TEST_CASE("certification passes on the parameter grid") {
  for (double eps : kEpsGrid) {
    for (double delta : kDeltaGrid) {
      const auto quad = build_quadrature(eps, delta);
      const auto cert = certify(quad, 2000);
      CAPTURE(eps);
      CAPTURE(delta);
      CHECK(cert.pass);
      CHECK(cert.max_rel_error <= eps);
    }
  }
}

TEST_CASE("narrowed upper truncation fails near delta") {
  auto quad = build_quadrature(0.1, 0.001);
  const std::size_t keep = quad.nodes.size() - quad.nodes.size() * 30 / 100;
  quad.nodes.resize(keep);
  quad.weights.resize(keep);
  quad.params.upper = quad.params.lower + static_cast<long>(keep) - 1;
  quad.params.sparsity = static_cast<long>(keep);
  const auto cert = certify(quad, 2000);
  CHECK_FALSE(cert.pass);
  CHECK(cert.argmax_x <= 10.0 * quad.params.delta);
}

TEST_CASE("certificate is bit-identical across thread counts") {
  const auto quad = build_quadrature(0.01, 0.01);
  const auto c1 = certify(quad, 5001, 1);
  const auto c2 = certify(quad, 5001, 2);
  const auto c8 = certify(quad, 5001, 8);
  CHECK(c1.max_rel_error == c2.max_rel_error);
  CHECK(c1.max_rel_error == c8.max_rel_error);
  CHECK(c1.argmax_x == c2.argmax_x);
  CHECK(c1.argmax_x == c8.argmax_x);
}

TEST_CASE("infinite-sum probe within the proven bound") {
  for (double eps : {0.1, 0.01}) {
    for (double x : {0.02, 0.3, 1.0, 5.0}) {
      CAPTURE(eps);
      CAPTURE(x);
      CHECK(infinite_sum_error_probe(eps, x) <= eps / 3.0 + 2e-3 * eps);
    }
  }
}

TEST_CASE("tail majorants") {
  for (double eps : kEpsGrid) {
    for (double delta : kDeltaGrid) {
      const auto p = select_params(eps, delta);
      for (double x : {delta, 1.0}) {
        const auto tb = tail_bounds(p, x);
        CHECK(tb.lower <= eps / 3.0 / x);
        CHECK(tb.upper <= eps / 3.0 / x);

        // empirical dropped tails stay below the closed forms
        double lower_sum = 0.0;
        for (long j = p.lower - 1; j > p.lower - 4000; --j) {
          const double t = std::exp(static_cast<double>(j) * p.h);
          const double term = p.h * t * std::exp(-t * x);
          lower_sum += term;
          if (term < 1e-300) break;
        }
        double upper_sum = 0.0;
        for (long j = p.upper + 1; j < p.upper + 4000; ++j) {
          const double t = std::exp(static_cast<double>(j) * p.h);
          const double term = p.h * t * std::exp(-t * x);
          upper_sum += term;
          if (term == 0.0) break;
        }
        CHECK(lower_sum <= tb.lower * (1.0 + 1e-12));
        CHECK(upper_sum <= tb.upper * (1.0 + 1e-12) + 1e-300);
      }
    }
  }
  SUBCASE("1 - e^{-u} <= u at large x") {
    const auto p = select_params(0.1, 0.1);
    const auto tb = tail_bounds(p, 1e8);
    CHECK(tb.lower <= std::exp(static_cast<double>(p.lower) * p.h));
  }
}

TEST_CASE("sparsity is polylogarithmic") {
  const double c = std::exp(4.0) / (2.0 * M_PI) * 1.1;
  for (double eps : kEpsGrid) {
    for (double delta : kDeltaGrid) {
      const auto p = select_params(eps, delta);
      const double bound =
          c * std::pow(std::log(24.0 / eps), 2) * std::log(3.0 / (eps * delta)) + 4.0;
      CAPTURE(eps);
      CAPTURE(delta);
      CHECK(static_cast<double>(p.sparsity) <= bound);
    }
  }
}

TEST_CASE("integrand scale covariance") {
  for (double x : {0.1, 0.5}) {
    for (double s : {-1.0, 0.0, 2.0}) {
      const double lhs = fx_eval(x, s);
      const double rhs = fx_eval(1.0, s + std::log(x)) / x;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}
