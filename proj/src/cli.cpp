#include "teig/cli.hpp"

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "teig/examples.hpp"
#include "teig/hierarchy.hpp"
#include "teig/io.hpp"
#include "teig/moment.hpp"
#include "teig/oracle.hpp"

namespace teig {

namespace {

struct Options {
  std::string tensor_path;
  std::string example;
  std::optional<double> param;
  std::string kind;
  double delta0 = 0.05;
  double epsilon0 = 0.05;
  int nmax = 0;
  double rank_tol = 1e-6;
  double residual_tol = 1e-6;
  std::string symmetry;
  std::vector<double> band;
  std::string region_path;
  unsigned long long seed = 0;
  std::string format = "table";
  bool dump = false;
  bool verify_oracle = false;
  bool verbose = false;
};

Symmetry ParseSymmetry(const std::string& s) {
  if (s == "none") return Symmetry::None;
  if (s == "sorted") return Symmetry::SortedDescending;
  if (s == "nonneg") return Symmetry::NonnegativeOrthant;
  throw std::invalid_argument("unknown symmetry '" + s + "'");
}

const char* SymmetryFlag(Symmetry s) {
  switch (s) {
    case Symmetry::None: return "none";
    case Symmetry::SortedDescending: return "sorted";
    case Symmetry::NonnegativeOrthant: return "nonneg";
  }
  return "none";
}

struct Problem {
  SymmetricTensor a{1, 2};
  SymmetricTensor b{1, 2};
  RunInput input;
  Symmetry symmetry = Symmetry::None;
  std::vector<std::string> warnings;
};

Problem Load(const Options& o) {
  Problem p;
  std::string kind = o.kind;
  if (!o.example.empty()) {
    const BuiltinExample ex = MakeExample(o.example, o.param, o.seed);
    p.a = ex.tensor;
    p.input.source = "example:" + o.example;
    p.input.description = ex.description;
    p.symmetry = ex.symmetry;
    if (kind.empty()) kind = ex.kind == BKind::H ? "h" : ex.kind == BKind::D ? "d" : "z";
  } else {
    p.a = LoadTensor(o.tensor_path);
    p.input.source = "file:" + o.tensor_path;
    p.input.description = "tensor from " + o.tensor_path;
  }
  if (kind.empty()) kind = "z";
  if (!o.symmetry.empty()) p.symmetry = ParseSymmetry(o.symmetry);
  const int n = p.a.dim(), m = p.a.order();
  if (m < 1) throw std::invalid_argument("tensor order must be at least 1");
  if (kind == "z") {
    p.b = MakeBTensor(BKind::Z, n, m);
  } else if (kind == "h") {
    p.b = MakeBTensor(BKind::H, n, m);
  } else if (kind.rfind("d:", 0) == 0) {
    const Eigen::MatrixXd d = LoadMatrix(kind.substr(2));
    p.b = MakeBTensor(BKind::D, n, m, &d);
    kind = "d";
  } else if (kind.rfind("b:", 0) == 0) {
    p.b = LoadTensor(kind.substr(2));
    if (p.b.dim() != n) throw std::invalid_argument("B tensor dimension differs from A");
    if (p.b.order() < 1) throw std::invalid_argument("B tensor order must be at least 1");
    p.warnings.push_back("custom B: smoothness of the hypersurface B x^m' = 1 is not checked");
    kind = "b";
  } else {
    throw std::invalid_argument("unknown kind '" + kind + "' (expected z, h, d:<path> or b:<path>)");
  }
  p.input.kind = kind;
  p.input.n = n;
  p.input.m = m;
  p.input.b_order = p.b.order();
  return p;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"All real eigenvalues and eigenvectors of a symmetric tensor by moment relaxations", "teig"};
  auto* tensor_opt = app.add_option("--tensor", o.tensor_path, "Tensor file (text or JSON)");
  auto* example_opt = app.add_option("--example", o.example, "Built-in example ex4_1 .. ex4_17");
  tensor_opt->excludes(example_opt);
  app.add_option("--param", o.param, "Example parameter (a for ex4_3/ex4_4, n for dimension families)")->needs(example_opt);
  app.add_option("--kind", o.kind, "z, h, d:<matrix file> or b:<tensor file>");
  app.add_option("--delta0", o.delta0, "Initial gap probe width")->capture_default_str();
  app.add_option("--epsilon0", o.epsilon0, "Initial recovery band half-width")->capture_default_str();
  app.add_option("--nmax", o.nmax, "Highest relaxation order (default N0 + 3)");
  app.add_option("--rank-tol", o.rank_tol, "Relative rank tolerance")->capture_default_str();
  app.add_option("--residual-tol", o.residual_tol, "Eigenpair residual tolerance")->capture_default_str();
  app.add_option("--symmetry", o.symmetry, "none, sorted or nonneg");
  app.add_option("--band", o.band, "Only eigenvalues in [a, b]")->expected(2);
  app.add_option("--region", o.region_path, "Polynomial inequalities p(x) >= 0, one per line");
  app.add_option("--seed", o.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--format", o.format, "table or json")->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  app.add_flag("--dump-relaxation", o.dump, "Print the first relaxation of the largest eigenvalue and exit");
  app.add_flag("--verify-oracle", o.verify_oracle, "Compare the spectrum with an independent method");
  app.add_flag("--verbose", o.verbose, "Log every relaxation to stderr");

  std::vector<std::string> argv_store{"teig"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (o.tensor_path.empty() && o.example.empty()) throw CLI::RequiredError("--tensor or --example");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitComplete : kExitUsage;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    Problem p = Load(o);
    std::vector<Polynomial> region;
    if (!o.region_path.empty()) region = LoadRegion(o.region_path, p.a.dim());
    if (!o.band.empty() && o.band[0] > o.band[1]) throw std::invalid_argument("--band needs a <= b");

    SolverConfig cfg;
    cfg.delta0 = o.delta0;
    cfg.epsilon0 = o.epsilon0;
    cfg.n_max = o.nmax;
    cfg.rank_tol = o.rank_tol;
    cfg.residual_tol = o.residual_tol;
    cfg.seed = o.seed;
    cfg.symmetry = p.symmetry;
    if (o.verbose) cfg.log = &err;
    EigenSolver solver(p.a, p.b, cfg, region);

    if (o.dump) {
      const ConstraintSystem& sys = solver.system();
      std::vector<Polynomial> q;
      if (!o.band.empty()) {
        q.push_back((-sys.f).add_constant(o.band[1]));
        q.push_back(sys.f.add_constant(-o.band[0]));
      }
      DumpMomentProblem(CompileRelaxation(sys, sys.base_order(), sys.f, Sense::Maximize, q), out);
      return kExitComplete;
    }

    RunReport report;
    report.input = p.input;
    report.config.delta0 = cfg.delta0;
    report.config.epsilon0 = cfg.epsilon0;
    report.config.n_max = cfg.MaxOrder(solver.system().base_order());
    report.config.rank_tol = cfg.rank_tol;
    report.config.residual_tol = cfg.residual_tol;
    report.config.seed = cfg.seed;
    report.config.symmetry = SymmetryFlag(cfg.symmetry);
    report.config.region_size = static_cast<int>(region.size());
    if (!o.band.empty()) {
      report.config.band = std::make_pair(o.band[0], o.band[1]);
      report.spectrum = solver.Run(o.band[0], o.band[1]);
    } else {
      report.spectrum = solver.Run();
    }
    report.spectrum.warnings.insert(report.spectrum.warnings.begin(), p.warnings.begin(), p.warnings.end());

    bool oracle_ok = true;
    if (o.verify_oracle) {
      std::vector<double> values;
      for (const auto& pair : report.spectrum.pairs) values.push_back(pair.lambda);
      const OracleComparison cmp = CompareWithOracle(p.a, p.b, p.input.kind == "z", values, o.seed);
      report.oracle = OracleEcho{ToString(cmp.oracle.source), cmp.oracle.eigenvalues, cmp.agrees, cmp.detail};
      oracle_ok = cmp.agrees;
      if (!cmp.agrees) report.spectrum.warnings.push_back("oracle disagrees: " + cmp.detail);
    }
    report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (o.format == "json") {
      out << ReportToJson(report) << "\n";
    } else {
      PrintTable(report, out);
    }
    return report.spectrum.complete && oracle_ok ? kExitComplete : kExitPartial;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace teig
