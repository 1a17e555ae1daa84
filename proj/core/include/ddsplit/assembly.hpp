#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ddsplit/grid.hpp"
#include "ddsplit/partition.hpp"

namespace ddsplit {

/// Sparse finite-difference operator on nodal vectors. Rows of passive nodes
/// (those not listed in active_nodes) are identically zero.
struct SparseOperator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> mat;
  std::vector<int> active_nodes;
  bool symmetric = false;

  int size() const { return static_cast<int>(mat.rows()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return mat * v; }

  /// Wrap a dense matrix (test and scalar-problem convenience).
  static SparseOperator from_dense(const Eigen::MatrixXd& dense,
                                   bool symmetric = false);
};

/// Full operator A with its weighted parts A_k; A = sum of parts entrywise
/// to round-off.
struct SplitOperator {
  SparseOperator full;
  std::vector<SparseOperator> parts;
  const Grid* grid = nullptr;

  int q() const { return static_cast<int>(parts.size()); }
};

/// Flux-form diffusion, centered advection, nodal reaction. Dirichlet rows
/// reference interior nodes only; Neumann drops boundary-face fluxes and
/// uses one-sided advection differences at boundary nodes.
SparseOperator assemble_full(const Grid& grid, const CoefficientField& coeff);

/// Part k weights diffusion with chi_k at faces and advection/reaction with
/// chi_k at nodes. The full operator is assembled independently.
SplitOperator assemble_split(const Grid& grid, const CoefficientField& coeff,
                             const Partition& partition);

/// Max over seeded random probes of ||A v - sum_k A_k v||_inf / ||v||_inf.
double splitting_defect(const SplitOperator& split, int n_probes,
                        std::uint64_t seed);

/// Coordinate triplets, one "row col value" line per stored entry.
void dump_triplets(const SparseOperator& op, std::ostream& out);

}  // namespace ddsplit
