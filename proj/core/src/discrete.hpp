#pragma once

// Sparse operators of the P1 discretization shared by the functionals and the
// solver. Internal to the core library.

#include <Eigen/Sparse>
#include <vector>

#include "hexnls/graph_function.hpp"

namespace hexnls::detail {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// K with u^T K u = gradient_norms(u).l2sq.
SparseMatrix assemble_stiffness(const GraphFunction& layout);

/// diag(w) + tau * K with the rows and columns of fixed degrees of freedom
/// replaced by the identity.
SparseMatrix assemble_system(const GraphFunction& layout, const std::vector<double>& weights, double tau,
                             const std::vector<char>& fixed);

inline Vector to_vector(std::span<const double> x) {
  return Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
}

inline void from_vector(const Vector& v, std::span<double> x) {
  Eigen::Map<Vector>(x.data(), static_cast<Eigen::Index>(x.size())) = v;
}

}  // namespace hexnls::detail
