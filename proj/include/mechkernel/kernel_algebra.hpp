#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mechkernel/linprog.hpp"
#include "mechkernel/matrix.hpp"
#include "mechkernel/rational.hpp"

namespace mechkernel {

// Finite probability distribution with labeled atoms.
struct Prior {
  std::vector<std::string> labels;
  RatVec atoms;

  Prior() = default;
  Prior(std::vector<std::string> labels, RatVec atoms);
  explicit Prior(RatVec atoms);

  std::size_t size() const { return atoms.size(); }
  bool operator==(const Prior&) const = default;
};

// Column-stochastic kernel from a labeled domain (columns) to a labeled
// codomain (rows). Immutable after construction.
class StochasticKernel {
 public:
  StochasticKernel(Matrix mat, std::vector<std::string> row_labels,
                   std::vector<std::string> col_labels);
  explicit StochasticKernel(Matrix mat);

  const Matrix& matrix() const { return mat_; }
  std::size_t rows() const { return mat_.rows(); }
  std::size_t cols() const { return mat_.cols(); }
  const Rational& at(std::size_t r, std::size_t c) const { return mat_.at(r, c); }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  static StochasticKernel identity(std::size_t n);
  static StochasticKernel identity(const std::vector<std::string>& labels);
  // Every column is the Dirac distribution on row `target`.
  static StochasticKernel pooling(std::size_t rows, std::size_t cols, std::size_t target);

  bool is_deterministic() const;  // all entries 0 or 1

  bool operator==(const StochasticKernel&) const = default;

 private:
  Matrix mat_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

using KernelBasis = std::vector<RatVec>;

std::vector<std::string> index_labels(std::size_t n);
std::vector<std::string> product_labels(const std::vector<std::string>& a,
                                        const std::vector<std::string>& b);

Prior average(const StochasticKernel& g, const Prior& mu);
StochasticKernel compound(const StochasticKernel& g, const StochasticKernel& h);
StochasticKernel kronecker_joint(const std::vector<StochasticKernel>& kernels);
KernelBasis null_space(const StochasticKernel& k);
bool kernel_more_informative(const StochasticKernel& g, const StochasticKernel& h);
bool kernel_equivalent(const StochasticKernel& g, const StochasticKernel& h);

// Returns a column-stochastic S with h = S.g when one exists. Decided by exact
// linear feasibility; throws CapExceeded when entries of S exceed the cap.
std::optional<StochasticKernel> blackwell_more_informative(
    const StochasticKernel& g, const StochasticKernel& h,
    std::size_t solver_cap = kDefaultSolverCap);

}  // namespace mechkernel
