#include "teig/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace teig {

namespace {

using nlohmann::json;

json Num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double NumOr(const json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

void CheckIndex(const std::vector<int>& idx, int n, int m) {
  if (static_cast<int>(idx.size()) != m) throw std::invalid_argument("tensor entry has " + std::to_string(idx.size()) + " indices, expected " + std::to_string(m));
  for (int i : idx) {
    if (i < 1 || i > n) throw std::invalid_argument("tensor index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
}

void CheckShape(long long n, long long m) {
  if (n < 1 || n > 64) throw std::invalid_argument("tensor dimension must be in 1..64");
  if (m < 0 || m > 64) throw std::invalid_argument("tensor order must be in 0..64");
}

bool SkipLine(const std::string& line) {
  const auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SymmetricTensor ParseTensorText(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  long long n = -1, m = -1;
  std::vector<TensorEntry> entries;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (SkipLine(line)) continue;
    std::istringstream ls(line);
    auto fail = [&](const std::string& what) {
      return std::invalid_argument("tensor text line " + std::to_string(lineno) + ": " + what);
    };
    if (n < 0) {
      if (!(ls >> n >> m)) throw fail("expected header 'n m'");
      std::string rest;
      if (ls >> rest) throw fail("unexpected text after header");
      CheckShape(n, m);
      continue;
    }
    TensorEntry e;
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (static_cast<long long>(tok.size()) != m + 1) throw fail("expected " + std::to_string(m) + " indices and a value");
    try {
      for (long long k = 0; k < m; ++k) {
        std::size_t used = 0;
        e.index.push_back(std::stoi(tok[static_cast<std::size_t>(k)], &used));
        if (used != tok[static_cast<std::size_t>(k)].size()) throw std::invalid_argument("index");
      }
      std::size_t used = 0;
      e.value = std::stod(tok.back(), &used);
      if (used != tok.back().size() || !std::isfinite(e.value)) throw std::invalid_argument("value");
    } catch (const std::exception&) {
      throw fail("malformed entry");
    }
    try {
      CheckIndex(e.index, static_cast<int>(n), static_cast<int>(m));
    } catch (const std::exception& ex) {
      throw fail(ex.what());
    }
    entries.push_back(std::move(e));
  }
  if (n < 0) throw std::invalid_argument("tensor text is empty");
  return SymmetricTensor::FromEntries(static_cast<int>(n), static_cast<int>(m), entries);
}

SymmetricTensor ParseTensorJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("tensor JSON: ") + e.what());
  }
  try {
    const long long n = j.at("n").get<long long>(), m = j.at("m").get<long long>();
    CheckShape(n, m);
    std::vector<TensorEntry> entries;
    for (const auto& e : j.at("entries")) {
      TensorEntry t;
      t.index = e.at("idx").get<std::vector<int>>();
      t.value = e.at("val").get<double>();
      CheckIndex(t.index, static_cast<int>(n), static_cast<int>(m));
      entries.push_back(std::move(t));
    }
    return SymmetricTensor::FromEntries(static_cast<int>(n), static_cast<int>(m), entries);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("tensor JSON: ") + e.what());
  }
}

SymmetricTensor ParseTensor(const std::string& text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  if (p != std::string::npos && text[p] == '{') return ParseTensorJson(text);
  return ParseTensorText(text);
}

SymmetricTensor LoadTensor(const std::string& path) { return ParseTensor(ReadFile(path)); }

std::string FormatTensorText(const SymmetricTensor& t) {
  std::ostringstream os;
  os << t.dim() << " " << t.order() << "\n" << std::setprecision(17);
  for (const auto& [alpha, coef] : t.form().terms()) {
    std::vector<int> idx;
    for (int i = 0; i < t.dim(); ++i) {
      for (int k = 0; k < alpha[static_cast<std::size_t>(i)]; ++k) idx.push_back(i + 1);
    }
    // Parsing sums listed entries into form coefficients, so one line per monomial carries its coefficient.
    for (int i : idx) os << i << " ";
    os << coef << "\n";
  }
  return os.str();
}

Eigen::MatrixXd ParseMatrix(const std::string& text) {
  std::vector<double> v;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (SkipLine(line)) continue;
    std::istringstream ls(line);
    for (std::string t; ls >> t;) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != t.size() || !std::isfinite(x)) throw std::invalid_argument("matrix has a malformed entry '" + t + "'");
      v.push_back(x);
    }
  }
  const auto n = static_cast<long>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (v.empty() || n * n != static_cast<long>(v.size())) throw std::invalid_argument("matrix entries do not form a square");
  Eigen::MatrixXd d(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) d(i, j) = v[static_cast<std::size_t>(i * n + j)];
  }
  return d;
}

Eigen::MatrixXd LoadMatrix(const std::string& path) { return ParseMatrix(ReadFile(path)); }

std::vector<Polynomial> ParseRegion(const std::string& text, int num_vars) {
  std::vector<Polynomial> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (SkipLine(line)) continue;
    out.push_back(ParseSparsePolynomial(line, num_vars));
  }
  return out;
}

std::vector<Polynomial> LoadRegion(const std::string& path, int num_vars) { return ParseRegion(ReadFile(path), num_vars); }

bool operator==(const EigenPair& a, const EigenPair& b) {
  return a.lambda == b.lambda && a.vectors == b.vectors && a.multiplicity == b.multiplicity && a.recovered == b.recovered &&
         a.residual == b.residual && a.paired == b.paired;
}

bool operator==(const PairDiagnostics& a, const PairDiagnostics& b) {
  return a.order == b.order && a.flat_t == b.flat_t && a.stabilized == b.stabilized && a.delta == b.delta &&
         a.epsilon == b.epsilon && a.values == b.values && a.seconds == b.seconds && a.note == b.note;
}

bool operator==(const Spectrum& a, const Spectrum& b) {
  return a.pairs == b.pairs && a.complete == b.complete && a.diagnostics == b.diagnostics && a.warnings == b.warnings &&
         a.relaxations == b.relaxations && a.sdp_iterations == b.sdp_iterations;
}

bool operator==(const RunReport& a, const RunReport& b) {
  return a.input == b.input && a.config == b.config && a.spectrum == b.spectrum && a.total_seconds == b.total_seconds &&
         a.oracle == b.oracle;
}

std::string ReportToJson(const RunReport& r, int indent) {
  json j;
  j["input"] = {{"source", r.input.source}, {"description", r.input.description}, {"n", r.input.n},
                {"m", r.input.m},           {"kind", r.input.kind},               {"b_order", r.input.b_order}};
  json cfg = {{"delta0", r.config.delta0},       {"epsilon0", r.config.epsilon0},         {"n_max", r.config.n_max},
              {"rank_tol", r.config.rank_tol},   {"residual_tol", r.config.residual_tol}, {"seed", r.config.seed},
              {"symmetry", r.config.symmetry},   {"region_size", r.config.region_size}};
  cfg["band"] = r.config.band ? json::array({r.config.band->first, r.config.band->second}) : json(nullptr);
  j["config"] = cfg;
  json pairs = json::array();
  for (const auto& p : r.spectrum.pairs) {
    pairs.push_back({{"lambda", Num(p.lambda)},
                     {"vectors", p.vectors},
                     {"multiplicity", p.multiplicity},
                     {"recovered", p.recovered},
                     {"residual", Num(p.residual)},
                     {"paired", p.paired}});
  }
  json diags = json::array();
  for (const auto& d : r.spectrum.diagnostics) {
    json vals = json::array();
    for (double v : d.values) vals.push_back(Num(v));
    diags.push_back({{"order", d.order},
                     {"flat_t", d.flat_t},
                     {"stabilized", d.stabilized},
                     {"delta", Num(d.delta)},
                     {"epsilon", Num(d.epsilon)},
                     {"values", vals},
                     {"seconds", d.seconds},
                     {"note", d.note}});
  }
  j["spectrum"] = {{"pairs", pairs}, {"complete", r.spectrum.complete}};
  j["complete"] = r.spectrum.complete;
  j["warnings"] = r.spectrum.warnings;
  j["diagnostics"] = diags;
  j["stats"] = {{"relaxations", r.spectrum.relaxations}, {"sdp_iterations", r.spectrum.sdp_iterations}};
  j["timings"] = {{"total_seconds", r.total_seconds}};
  if (r.oracle) {
    j["oracle"] = {{"source", r.oracle->source},
                   {"eigenvalues", r.oracle->eigenvalues},
                   {"agrees", r.oracle->agrees},
                   {"detail", r.oracle->detail}};
  }
  return j.dump(indent);
}

RunReport ReportFromJson(const std::string& text) {
  RunReport r;
  try {
    const json j = json::parse(text);
    const json& in = j.at("input");
    r.input.source = in.at("source").get<std::string>();
    r.input.description = in.at("description").get<std::string>();
    r.input.n = in.at("n").get<int>();
    r.input.m = in.at("m").get<int>();
    r.input.kind = in.at("kind").get<std::string>();
    r.input.b_order = in.at("b_order").get<int>();
    const json& c = j.at("config");
    r.config.delta0 = c.at("delta0").get<double>();
    r.config.epsilon0 = c.at("epsilon0").get<double>();
    r.config.n_max = c.at("n_max").get<int>();
    r.config.rank_tol = c.at("rank_tol").get<double>();
    r.config.residual_tol = c.at("residual_tol").get<double>();
    r.config.seed = c.at("seed").get<unsigned long long>();
    r.config.symmetry = c.at("symmetry").get<std::string>();
    r.config.region_size = c.at("region_size").get<int>();
    if (!c.at("band").is_null()) r.config.band = std::make_pair(c.at("band").at(0).get<double>(), c.at("band").at(1).get<double>());
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& p : j.at("spectrum").at("pairs")) {
      EigenPair e;
      e.lambda = NumOr(p.at("lambda"), std::numeric_limits<double>::quiet_NaN());
      e.vectors = p.at("vectors").get<std::vector<std::vector<double>>>();
      e.multiplicity = p.at("multiplicity").get<int>();
      e.recovered = p.at("recovered").get<bool>();
      e.residual = NumOr(p.at("residual"), inf);
      e.paired = p.at("paired").get<bool>();
      r.spectrum.pairs.push_back(std::move(e));
    }
    r.spectrum.complete = j.at("spectrum").at("complete").get<bool>();
    r.spectrum.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& d : j.at("diagnostics")) {
      PairDiagnostics g;
      g.order = d.at("order").get<int>();
      g.flat_t = d.at("flat_t").get<int>();
      g.stabilized = d.at("stabilized").get<bool>();
      g.delta = NumOr(d.at("delta"), inf);
      g.epsilon = NumOr(d.at("epsilon"), inf);
      for (const auto& v : d.at("values")) g.values.push_back(NumOr(v, std::numeric_limits<double>::quiet_NaN()));
      g.seconds = d.at("seconds").get<double>();
      g.note = d.at("note").get<std::string>();
      r.spectrum.diagnostics.push_back(std::move(g));
    }
    r.spectrum.relaxations = j.at("stats").at("relaxations").get<int>();
    r.spectrum.sdp_iterations = j.at("stats").at("sdp_iterations").get<long>();
    r.total_seconds = j.at("timings").at("total_seconds").get<double>();
    if (j.contains("oracle")) {
      const json& o = j.at("oracle");
      r.oracle = OracleEcho{o.at("source").get<std::string>(), o.at("eigenvalues").get<std::vector<double>>(),
                            o.at("agrees").get<bool>(), o.at("detail").get<std::string>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report JSON: ") + e.what());
  }
  return r;
}

void PrintTable(const RunReport& r, std::ostream& os) {
  const auto flags = os.flags();
  os << r.input.description << "  (n = " << r.input.n << ", m = " << r.input.m << ", B: " << r.input.kind << ")\n";
  os << std::fixed << std::setprecision(4);
  for (std::size_t k = 0; k < r.spectrum.pairs.size(); ++k) {
    const EigenPair& p = r.spectrum.pairs[k];
    os << "lambda_" << k + 1 << " = " << std::setw(10) << p.lambda;
    if (p.multiplicity > 1) os << " (" << p.multiplicity << ")";
    if (p.recovered) os << " (*)";
    os << "\n";
    for (const auto& u : p.vectors) {
      os << "    u = (";
      for (std::size_t i = 0; i < u.size(); ++i) os << (i ? ", " : "") << std::setw(7) << (std::abs(u[i]) < 5e-5 ? 0.0 : u[i]);
      os << ")\n";
    }
  }
  if (!r.spectrum.pairs.empty() && r.spectrum.pairs.front().paired) {
    os << "(lambda, u) and (-lambda, -u) are both eigenpairs; both signs are listed.\n";
  }
  if (std::any_of(r.spectrum.pairs.begin(), r.spectrum.pairs.end(), [](const EigenPair& p) { return p.recovered; })) {
    os << "(*) eigenvector obtained by the random linear objective recovery.\n";
  }
  os << (r.spectrum.complete ? "complete: all real eigenvalues found\n" : "partial: the descent stopped early\n");
  for (const auto& w : r.spectrum.warnings) os << "warning: " << w << "\n";
  if (r.oracle) os << "oracle " << (r.oracle->agrees ? "agrees" : "DISAGREES") << ": " << r.oracle->detail << "\n";
  os.flags(flags);
}

}  // namespace teig
