#include "expsum/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <ostream>
#include <stdexcept>

namespace expsum {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json quadrature_to_json(const ExpSumQuadrature& quad) {
  const auto& p = quad.params;
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    terms.push_back({{"j", p.lower + static_cast<long>(i)},
                     {"t", quad.nodes[i]},
                     {"w", quad.weights[i]}});
  }
  return {{"eps", p.eps},   {"delta", p.delta}, {"N", p.n_order}, {"h", p.h},
          {"A", p.lower},   {"B", p.upper},     {"K", p.sparsity},
          {"terms", terms}};
}

ExpSumQuadrature quadrature_from_json(const nlohmann::json& j) {
  ExpSumQuadrature quad;
  quad.params.eps = j.at("eps").get<double>();
  quad.params.delta = j.at("delta").get<double>();
  quad.params.n_order = j.at("N").get<int>();
  quad.params.h = j.at("h").get<double>();
  quad.params.lower = j.at("A").get<long>();
  quad.params.upper = j.at("B").get<long>();
  quad.params.sparsity = j.at("K").get<long>();
  const auto& terms = j.at("terms");
  if (static_cast<long>(terms.size()) != quad.params.sparsity)
    throw std::invalid_argument("quadrature_from_json: term count does not match K");
  for (const auto& term : terms) {
    quad.nodes.push_back(term.at("t").get<double>());
    quad.weights.push_back(term.at("w").get<double>());
  }
  return quad;
}

void quadrature_to_csv(const ExpSumQuadrature& quad, std::ostream& out) {
  out << "j,t,w\n";
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    out << quad.params.lower + static_cast<long>(i) << ','
        << format_double(quad.nodes[i]) << ',' << format_double(quad.weights[i])
        << '\n';
  }
}

void bernoulli_to_csv(const BernoulliTable& table, std::ostream& out) {
  out << "k,num,den,value\n";
  for (int k = 0; k <= table.kmax(); ++k) {
    const Rational& r = table.value(k);
    out << k << ',' << numerator(r).str() << ',' << denominator(r).str() << ','
        << format_double(table.value_as_double(k)) << '\n';
  }
}

nlohmann::json bernoulli_to_json(const BernoulliTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 0; k <= table.kmax(); ++k) {
    const Rational& r = table.value(k);
    rows.push_back({{"k", k},
                    {"num", numerator(r).str()},
                    {"den", denominator(r).str()},
                    {"value", table.value_as_double(k)}});
  }
  return rows;
}

std::string certificate_line(const ErrorCertificate& cert, long sparsity) {
  std::string line = cert.pass ? "PASS" : "FAIL";
  line += " max_rel_err=" + format_double(cert.max_rel_error);
  line += " argmax_x=" + format_double(cert.argmax_x);
  line += " K=" + std::to_string(sparsity);
  return line;
}

}  // namespace expsum
