#include "mechkernel/kernel_algebra.hpp"

#include <utility>

#include "mechkernel/errors.hpp"

namespace mechkernel {

namespace {

void check_distribution(const RatVec& atoms, const char* what) {
  Rational total = 0;
  for (const Rational& a : atoms) {
    if (a < 0) throw InvalidInput(std::string(what) + ": negative probability");
    total += a;
  }
  if (total != 1) throw InvalidInput(std::string(what) + ": probabilities do not sum to 1");
}

}  // namespace

Prior::Prior(std::vector<std::string> labels, RatVec atoms)
    : labels(std::move(labels)), atoms(std::move(atoms)) {
  if (this->labels.size() != this->atoms.size()) {
    throw DimensionMismatch("prior: label count does not match atom count");
  }
  check_distribution(this->atoms, "prior");
}

Prior::Prior(RatVec atoms_in)
    : labels(index_labels(atoms_in.size())), atoms(std::move(atoms_in)) {
  check_distribution(atoms, "prior");
}

StochasticKernel::StochasticKernel(Matrix mat, std::vector<std::string> row_labels,
                                   std::vector<std::string> col_labels)
    : mat_(std::move(mat)),
      row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)) {
  if (row_labels_.size() != mat_.rows() || col_labels_.size() != mat_.cols()) {
    throw DimensionMismatch("kernel: label counts do not match matrix shape");
  }
  for (std::size_t c = 0; c < mat_.cols(); ++c) {
    Rational total = 0;
    for (std::size_t r = 0; r < mat_.rows(); ++r) {
      if (mat_.at(r, c) < 0) throw InvalidInput("kernel: negative entry");
      total += mat_.at(r, c);
    }
    if (total != 1) throw InvalidInput("kernel: column " + std::to_string(c) + " does not sum to 1");
  }
}

StochasticKernel::StochasticKernel(Matrix mat)
    : StochasticKernel(Matrix(mat), index_labels(mat.rows()), index_labels(mat.cols())) {}

StochasticKernel StochasticKernel::identity(std::size_t n) {
  return StochasticKernel(Matrix::identity(n));
}

StochasticKernel StochasticKernel::identity(const std::vector<std::string>& labels) {
  return StochasticKernel(Matrix::identity(labels.size()), labels, labels);
}

StochasticKernel StochasticKernel::pooling(std::size_t rows, std::size_t cols,
                                           std::size_t target) {
  if (target >= rows) throw InvalidInput("pooling kernel: target row out of range");
  Matrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) m.at(target, c) = 1;
  return StochasticKernel(std::move(m));
}

bool StochasticKernel::is_deterministic() const {
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols(); ++c) {
      const Rational& v = at(r, c);
      if (v != 0 && v != 1) return false;
    }
  }
  return true;
}

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

std::vector<std::string> product_labels(const std::vector<std::string>& a,
                                        const std::vector<std::string>& b) {
  std::vector<std::string> out;
  out.reserve(a.size() * b.size());
  for (const std::string& x : a) {
    for (const std::string& y : b) out.push_back(x + "," + y);
  }
  return out;
}

Prior average(const StochasticKernel& g, const Prior& mu) {
  if (g.cols() != mu.size()) {
    throw DimensionMismatch("average: kernel domain does not match prior");
  }
  return Prior(g.row_labels(), g.matrix().multiply(mu.atoms));
}

StochasticKernel compound(const StochasticKernel& g, const StochasticKernel& h) {
  if (g.cols() != h.rows()) {
    throw DimensionMismatch("compound: domain of g does not match codomain of h");
  }
  return StochasticKernel(g.matrix().multiply(h.matrix()), g.row_labels(), h.col_labels());
}

StochasticKernel kronecker_joint(const std::vector<StochasticKernel>& kernels) {
  if (kernels.empty()) throw InvalidInput("kronecker_joint: empty kernel list");
  Matrix mat = kernels[0].matrix();
  std::vector<std::string> row_labels = kernels[0].row_labels();
  std::vector<std::string> col_labels = kernels[0].col_labels();
  for (std::size_t i = 1; i < kernels.size(); ++i) {
    mat = mat.kronecker(kernels[i].matrix());
    row_labels = product_labels(row_labels, kernels[i].row_labels());
    col_labels = product_labels(col_labels, kernels[i].col_labels());
  }
  return StochasticKernel(std::move(mat), std::move(row_labels), std::move(col_labels));
}

KernelBasis null_space(const StochasticKernel& k) { return k.matrix().null_space_basis(); }

bool kernel_more_informative(const StochasticKernel& g, const StochasticKernel& h) {
  if (g.cols() != h.cols()) {
    throw DimensionMismatch("kernel order: domains differ");
  }
  return null_space_contained(g.matrix(), h.matrix());
}

bool kernel_equivalent(const StochasticKernel& g, const StochasticKernel& h) {
  return kernel_more_informative(g, h) && kernel_more_informative(h, g);
}

std::optional<StochasticKernel> blackwell_more_informative(const StochasticKernel& g,
                                                           const StochasticKernel& h,
                                                           std::size_t solver_cap) {
  if (g.cols() != h.cols()) {
    throw DimensionMismatch("blackwell order: domains differ");
  }
  // Variables: entries of S, row-major over rows(h) x rows(g).
  const std::size_t sr = h.rows();
  const std::size_t sc = g.rows();
  const std::size_t num_vars = sr * sc;
  auto var = [sc](std::size_t i, std::size_t j) { return i * sc + j; };

  std::vector<LpConstraint> constraints;
  // Columns of S sum to 1.
  for (std::size_t j = 0; j < sc; ++j) {
    LpConstraint c;
    c.coeffs.assign(num_vars, Rational(0));
    for (std::size_t i = 0; i < sr; ++i) c.coeffs[var(i, j)] = 1;
    c.sense = LpSense::Eq;
    c.rhs = 1;
    constraints.push_back(std::move(c));
  }
  // S.g = h entrywise.
  for (std::size_t i = 0; i < sr; ++i) {
    for (std::size_t x = 0; x < g.cols(); ++x) {
      LpConstraint c;
      c.coeffs.assign(num_vars, Rational(0));
      for (std::size_t j = 0; j < sc; ++j) c.coeffs[var(i, j)] = g.at(j, x);
      c.sense = LpSense::Eq;
      c.rhs = h.at(i, x);
      constraints.push_back(std::move(c));
    }
  }

  const std::optional<RatVec> sol = find_feasible(num_vars, constraints, solver_cap);
  if (!sol) return std::nullopt;
  Matrix s(sr, sc);
  for (std::size_t i = 0; i < sr; ++i) {
    for (std::size_t j = 0; j < sc; ++j) s.at(i, j) = (*sol)[var(i, j)];
  }
  return StochasticKernel(std::move(s), h.row_labels(), g.row_labels());
}

}  // namespace mechkernel
