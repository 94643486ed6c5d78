#include "expsum/bernoulli.hpp"
#include "expsum/euler_maclaurin.hpp"
#include "expsum/expsum.hpp"
#include "expsum/io.hpp"
#include "expsum/laplacian.hpp"
#include "expsum/matfun.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace expsum;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
  if (values.empty()) throw CLI::ValidationError("empty list: " + csv);
  return values;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

Eigen::VectorXd read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file: " + path);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
}

SymmetricMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  const auto count = values.size();
  const auto n = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(count))));
  if (n * n != count)
    throw std::runtime_error("matrix file: " + std::to_string(count) +
                             " values do not form a square matrix");
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = values[i * n + j];
  return SymmetricMatrix(m);
}

Graph parse_graph_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("graph spec must look like path:50, cycle:16, grid:8x8 "
                             "or edgelist:FILE");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "path") return Graph::path(std::stoi(arg));
  if (kind == "cycle") return Graph::cycle(std::stoi(arg));
  if (kind == "grid") {
    const auto x = arg.find('x');
    if (x == std::string::npos) throw std::runtime_error("grid spec must be RxC");
    return Graph::grid(std::stoi(arg.substr(0, x)), std::stoi(arg.substr(x + 1)));
  }
  if (kind == "edgelist") {
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot open edge list: " + arg);
    return Graph::from_edge_list(in);
  }
  throw std::runtime_error("unknown graph kind: " + kind);
}

Eigen::VectorXd parse_rhs(const std::string& spec, int n) {
  if (spec.rfind("unit:", 0) == 0) {
    const std::string pair = spec.substr(5);
    const auto comma = pair.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("unit rhs must look like unit:i,j");
    const int i = std::stoi(pair.substr(0, comma));
    const int j = std::stoi(pair.substr(comma + 1));
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::runtime_error("unit rhs index out of range");
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(i) = 1.0;
    b(j) = -1.0;
    return b;
  }
  Eigen::VectorXd b = read_vector_file(spec);
  if (b.size() != n) throw std::runtime_error("rhs size does not match graph order");
  return b;
}

int cmd_bernoulli(int kmax, const std::string& format, const std::string& out_path) {
  const BernoulliTable table(kmax);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  if (format == "json")
    out << bernoulli_to_json(table).dump(2) << '\n';
  else
    bernoulli_to_csv(table, out);
  return 0;
}

int cmd_gen(double eps, double delta, const std::string& format,
            const std::string& out_path) {
  const ExpSumQuadrature quad = build_quadrature(eps, delta);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  if (format == "json")
    out << quadrature_to_json(quad).dump(2) << '\n';
  else
    quadrature_to_csv(quad, out);
  return 0;
}

int cmd_certify(double eps, double delta, int grid, int threads) {
  const ExpSumQuadrature quad = build_quadrature(eps, delta);
  const ErrorCertificate cert = certify(quad, grid, threads);
  std::cout << certificate_line(cert, quad.params.sparsity) << '\n';
  return cert.pass ? 0 : 1;
}

int cmd_sweep(const std::string& eps_list, const std::string& delta_list, int grid,
              int threads) {
  std::cout << "eps,delta,N,h,A,B,K,max_rel_err\n";
  bool all_pass = true;
  for (double eps : parse_list(eps_list)) {
    for (double delta : parse_list(delta_list)) {
      const ExpSumQuadrature quad = build_quadrature(eps, delta);
      const ErrorCertificate cert = certify(quad, grid, threads);
      const auto& p = quad.params;
      std::cout << format_double(eps) << ',' << format_double(delta) << ','
                << p.n_order << ',' << format_double(p.h) << ',' << p.lower << ','
                << p.upper << ',' << p.sparsity << ','
                << format_double(cert.max_rel_error) << '\n';
      all_pass = all_pass && cert.pass;
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_em_check() {
  const BernoulliTable table(8);
  std::cout << "degree,N,h,defect\n";
  bool pass = true;
  for (int n_order : {1, 2, 3}) {
    for (double b : {1.0, 2.0}) {
      for (double h : {1.0, 0.5}) {
        for (int degree = 0; degree <= 2 * n_order - 1; ++degree) {
          const SmoothFunction g = [degree](double s, int order) {
            if (order > degree) return 0.0;
            double coeff = 1.0;
            for (int i = 0; i < order; ++i) coeff *= degree - i;
            return coeff * std::pow(s, degree - order);
          };
          const auto report = em_residual(g, TrapezoidSpec(0.0, b, h), n_order, table);
          std::cout << degree << ',' << n_order << ',' << format_double(h) << ','
                    << format_double(report.defect) << '\n';
          pass = pass && report.defect <= 1e-10;
        }
      }
    }
  }
  return pass ? 0 : 1;
}

int cmd_apply(const std::string& matrix_path, const std::string& vector_path, double eps,
              std::optional<double> delta, bool auto_delta, int threads) {
  const SymmetricMatrix a = read_matrix_file(matrix_path);
  const Eigen::VectorXd v = read_vector_file(vector_path);
  if (v.size() != a.dim()) throw std::runtime_error("vector size does not match matrix");
  double d;
  if (auto_delta) {
    d = jacobi_eigh(a).eigenvalues.minCoeff();  // oracle eigendecomposition
    if (!(d > 0)) throw std::runtime_error("--auto-delta: matrix is not positive definite");
  } else if (delta) {
    d = *delta;
  } else {
    throw CLI::ValidationError("apply requires --delta or --auto-delta");
  }
  const ExpSumQuadrature quad = build_quadrature(eps, std::min(d, 1.0));
  const SandwichReport sandwich = sandwich_check(a, quad);
  const double max_dev =
      std::max(std::abs(sandwich.max_ratio - 1.0), std::abs(sandwich.min_ratio - 1.0));
  double weight_sum = 0.0;
  for (double w : quad.weights) weight_sum += w;
  const Eigen::VectorXd x =
      apply_inverse_expsum(a, quad, v, eps / (10.0 * weight_sum), threads);
  std::cout << "# eps=" << format_double(eps) << ", delta=" << format_double(quad.params.delta)
            << ", K=" << quad.params.sparsity << ", max_ratio_dev=" << format_double(max_dev)
            << '\n';
  for (long i = 0; i < x.size(); ++i) std::cout << format_double(x(i)) << '\n';
  return 0;
}

int cmd_solve(const std::string& graph_spec, const std::string& rhs_spec, double eps,
              bool report_json, int threads) {
  const Graph g = parse_graph_spec(graph_spec);
  const Eigen::VectorXd b = parse_rhs(rhs_spec, g.order());
  const SolveResult result = solve_laplacian(g, b, eps, threads);
  const auto& r = result.report;
  if (report_json) {
    const nlohmann::json j = {{"eps", r.eps},
                              {"delta_used", r.delta_used},
                              {"K", r.sparsity},
                              {"matvec_count", r.matvec_count},
                              {"rel_error_vs_direct", r.rel_error_vs_direct},
                              {"residual_norm", r.residual_norm}};
    std::cout << j.dump(2) << '\n';
  } else {
    for (long i = 0; i < result.x.size(); ++i)
      std::cout << format_double(result.x(i)) << '\n';
    std::cerr << "# eps=" << format_double(r.eps) << " delta=" << format_double(r.delta_used)
              << " K=" << r.sparsity << " matvecs=" << r.matvec_count
              << " rel_err=" << format_double(r.rel_error_vs_direct)
              << " residual=" << format_double(r.residual_norm) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse exponential-sum approximation of 1/x and matrix inversion "
               "through matrix-exponential actions"};
  app.require_subcommand(1);

  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  app.add_option("--threads", threads, "Worker threads (output is independent of this)");

  const auto check_unit = [](double v, const char* name) {
    if (!(v > 0.0) || v > 1.0)
      throw CLI::ValidationError(std::string(name) + " must lie in (0,1]");
  };

  // bernoulli
  auto* bern = app.add_subcommand("bernoulli", "Exact Bernoulli numbers b_0..b_kmax");
  int kmax = 16;
  std::string bern_format = "csv";
  std::string bern_out;
  bern->add_option("--kmax", kmax, "Largest index")->required();
  bern->add_option("--format", bern_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  bern->add_option("--out", bern_out, "Output path (default stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate quadrature nodes and weights");
  double gen_eps = 0.1, gen_delta = 0.01;
  std::string gen_format = "csv", gen_out;
  gen->add_option("--eps", gen_eps, "Relative error target")->required();
  gen->add_option("--delta", gen_delta, "Lower end of the certified interval")->required();
  gen->add_option("--format", gen_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  // certify
  auto* cert = app.add_subcommand("certify", "Grid-check the relative-error guarantee");
  double cert_eps = 0.1, cert_delta = 0.01;
  int cert_grid = 10000;
  cert->add_option("--eps", cert_eps)->required();
  cert->add_option("--delta", cert_delta)->required();
  cert->add_option("--grid", cert_grid, "Grid points on [delta,1]");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Certify a grid of (eps, delta) pairs");
  std::string eps_list, delta_list, sweep_format = "csv";
  int sweep_grid = 10000;
  sweep->add_option("--eps-list", eps_list, "Comma-separated eps values")->required();
  sweep->add_option("--delta-list", delta_list, "Comma-separated delta values")->required();
  sweep->add_option("--grid", sweep_grid, "Grid points on [delta,1]");
  sweep->add_option("--format", sweep_format, "csv")->check(CLI::IsMember({"csv"}));

  // em-check
  app.add_subcommand("em-check", "Polynomial-exactness suite for the Euler-Maclaurin identity");

  // apply
  auto* apply = app.add_subcommand("apply", "Apply A^{-1} v through exponential actions");
  std::string matrix_path, vector_path;
  double apply_eps = 0.1;
  std::optional<double> apply_delta;
  bool auto_delta = false;
  apply->add_option("--matrix", matrix_path, "Whitespace-separated dense rows")->required();
  apply->add_option("--vector", vector_path, "One value per line")->required();
  apply->add_option("--eps", apply_eps)->required();
  apply->add_option("--delta", apply_delta, "Spectrum lower bound");
  apply->add_flag("--auto-delta", auto_delta, "Take delta = lambda_min from the eigendecomposition oracle");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a graph-Laplacian system via heat-kernel actions");
  std::string graph_spec, rhs_spec = "unit:0,1", solve_report;
  double solve_eps = 0.05;
  solve->add_option("--graph", graph_spec, "path:N | cycle:N | grid:RxC | edgelist:PATH")->required();
  solve->add_option("--b", rhs_spec, "Right-hand side: FILE or unit:i,j");
  solve->add_option("--eps", solve_eps)->required();
  solve->add_option("--report", solve_report, "json: emit the solve report as JSON")
      ->check(CLI::IsMember({"json"}));

  // let the global --threads option appear after a subcommand name
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(bern)) return cmd_bernoulli(kmax, bern_format, bern_out);
    if (app.got_subcommand(gen)) {
      check_unit(gen_eps, "eps");
      check_unit(gen_delta, "delta");
      return cmd_gen(gen_eps, gen_delta, gen_format, gen_out);
    }
    if (app.got_subcommand(cert)) {
      check_unit(cert_eps, "eps");
      check_unit(cert_delta, "delta");
      return cmd_certify(cert_eps, cert_delta, cert_grid, threads);
    }
    if (app.got_subcommand(sweep)) return cmd_sweep(eps_list, delta_list, sweep_grid, threads);
    if (app.got_subcommand("em-check")) return cmd_em_check();
    if (app.got_subcommand(apply)) {
      check_unit(apply_eps, "eps");
      return cmd_apply(matrix_path, vector_path, apply_eps, apply_delta, auto_delta, threads);
    }
    if (app.got_subcommand(solve)) {
      check_unit(solve_eps, "eps");
      return cmd_solve(graph_spec, rhs_spec, solve_eps, solve_report == "json", threads);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
