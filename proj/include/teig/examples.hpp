#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "teig/hierarchy.hpp"
#include "teig/tensor.hpp"

namespace teig {

struct BuiltinExample {
  std::string name;
  std::string description;
  SymmetricTensor tensor{1, 2};
  BKind kind = BKind::Z;
  Symmetry symmetry = Symmetry::None;
};

/// Names accepted by MakeExample, ex4_1 through ex4_17.
std::vector<std::string> ExampleNames();

/// Builds a named example. param is the parameter a for ex4_3/ex4_4, the dimension n for
/// ex4_11..ex4_14 and ex4_16, and ignored otherwise; seed feeds the random ones.
BuiltinExample MakeExample(const std::string& name, std::optional<double> param = std::nullopt, std::uint64_t seed = 0);

/// Tensor whose entry at each (1-based) index tuple is fn(tuple); fn must be symmetric.
SymmetricTensor TensorFromEntryFunction(int n, int m, const std::function<double(const std::vector<int>&)>& fn);

}  // namespace teig
