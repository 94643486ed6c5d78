#pragma once

#include "expsum/bernoulli.hpp"
#include "expsum/expsum.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>

namespace expsum {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

nlohmann::json quadrature_to_json(const ExpSumQuadrature& quad);
ExpSumQuadrature quadrature_from_json(const nlohmann::json& j);

/// CSV with header `j,t,w`.
void quadrature_to_csv(const ExpSumQuadrature& quad, std::ostream& out);

/// Rows `k,num,den,value` with that exact CSV header.
void bernoulli_to_csv(const BernoulliTable& table, std::ostream& out);
nlohmann::json bernoulli_to_json(const BernoulliTable& table);

/// `PASS|FAIL max_rel_err=<v> argmax_x=<v> K=<k>`
std::string certificate_line(const ErrorCertificate& cert, long sparsity);

}  // namespace expsum
