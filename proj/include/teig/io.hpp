#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "teig/hierarchy.hpp"
#include "teig/polynomial.hpp"
#include "teig/tensor.hpp"

namespace teig {

/// Text format: header "n m", then one "i1 ... im value" line per entry (1-based).
/// Lines starting with '#' and blank lines are ignored. Entries are symmetrized.
SymmetricTensor ParseTensorText(const std::string& text);
/// JSON format: {"n": .., "m": .., "entries": [{"idx": [..], "val": ..}, ...]}.
SymmetricTensor ParseTensorJson(const std::string& text);
/// Chooses JSON when the first non-blank character is '{'.
SymmetricTensor ParseTensor(const std::string& text);
SymmetricTensor LoadTensor(const std::string& path);

/// One line per symmetric index class, in the text format above.
std::string FormatTensorText(const SymmetricTensor& t);

/// Whitespace-separated entries of a square matrix, row by row.
Eigen::MatrixXd ParseMatrix(const std::string& text);
Eigen::MatrixXd LoadMatrix(const std::string& path);

/// One polynomial per line in the sparse "coeff:e1,..,en" term syntax; '#' starts a comment line.
std::vector<Polynomial> ParseRegion(const std::string& text, int num_vars);
std::vector<Polynomial> LoadRegion(const std::string& path, int num_vars);

std::string ReadFile(const std::string& path);

struct RunInput {
  std::string source;       // "example:<name>" or "file:<path>"
  std::string description;
  int n = 0;
  int m = 0;
  std::string kind;         // z, h, d or b
  int b_order = 0;
  bool operator==(const RunInput&) const = default;
};

struct ConfigEcho {
  double delta0 = 0.0;
  double epsilon0 = 0.0;
  int n_max = 0;            // resolved highest order
  double rank_tol = 0.0;
  double residual_tol = 0.0;
  unsigned long long seed = 0;
  std::string symmetry;
  std::optional<std::pair<double, double>> band;
  int region_size = 0;
  bool operator==(const ConfigEcho&) const = default;
};

struct OracleEcho {
  std::string source;
  std::vector<double> eigenvalues;
  bool agrees = false;
  std::string detail;
  bool operator==(const OracleEcho&) const = default;
};

/// Everything one CLI run reports. Timing fields: spectrum.diagnostics[].seconds, total_seconds.
struct RunReport {
  RunInput input;
  ConfigEcho config;
  Spectrum spectrum;
  double total_seconds = 0.0;
  std::optional<OracleEcho> oracle;
};

bool operator==(const EigenPair& a, const EigenPair& b);
bool operator==(const PairDiagnostics& a, const PairDiagnostics& b);
bool operator==(const Spectrum& a, const Spectrum& b);
bool operator==(const RunReport& a, const RunReport& b);

/// JSON text with full double precision; non-finite numbers are written as null.
std::string ReportToJson(const RunReport& r, int indent = 2);
RunReport ReportFromJson(const std::string& text);

/// Four-decimal table: lambda, multiplicity, one eigenvector per line.
/// Recovered pairs carry "(*)", paired spectra note the sign symmetry.
void PrintTable(const RunReport& r, std::ostream& os);

}  // namespace teig
