#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expsum/io.hpp"

#include <nlohmann/json.hpp>

#include <random>
#include <sstream>

using namespace expsum;

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(mantissa(rng), exponent(rng));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("quadrature JSON round-trip reproduces the certificate bit-exactly") {
  const ExpSumQuadrature quad = build_quadrature(0.1, 0.01);
  const std::string dumped = quadrature_to_json(quad).dump();
  const ExpSumQuadrature parsed = quadrature_from_json(nlohmann::json::parse(dumped));

  REQUIRE(parsed.nodes.size() == quad.nodes.size());
  CHECK(parsed.params.h == quad.params.h);
  const auto direct = certify(quad, 3000);
  const auto roundtrip = certify(parsed, 3000);
  CHECK(direct.max_rel_error == roundtrip.max_rel_error);
  CHECK(direct.argmax_x == roundtrip.argmax_x);
}

TEST_CASE("CSV shapes") {
  SUBCASE("quadrature header and row count") {
    const ExpSumQuadrature quad = build_quadrature(1.0, 1.0);
    std::ostringstream out;
    quadrature_to_csv(quad, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "j,t,w");
    long rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == quad.params.sparsity);
  }
  SUBCASE("bernoulli header and exact rationals") {
    const BernoulliTable table(4);
    std::ostringstream out;
    bernoulli_to_csv(table, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,num,den,value");
    std::getline(in, line);
    CHECK(line == "0,1,1,1");
    std::getline(in, line);
    CHECK(line == "1,-1,2,-0.5");
  }
}

TEST_CASE("certificate line format") {
  ErrorCertificate cert{0.1, 0.01, 100, 0.05, 0.25, true};
  CHECK(certificate_line(cert, 535) == "PASS max_rel_err=0.05 argmax_x=0.25 K=535");
  cert.pass = false;
  CHECK(certificate_line(cert, 535).rfind("FAIL", 0) == 0);
}
