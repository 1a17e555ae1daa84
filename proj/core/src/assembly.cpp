#include "ddsplit/assembly.hpp"

#include <cmath>
#include <ostream>
#include <random>

namespace ddsplit {
namespace {

using Triplet = Eigen::Triplet<double>;

// Assembles the operator with optional partition weights: face_w[d] scales
// the diffusive flux through each face, node_w scales the advection and
// reaction rows. Null weight means the constant 1 (the full operator).
// Zero-weighted contributions are skipped so the sparsity pattern of a part
// stays confined to its subdomain.
SparseOperator assemble_weighted(
    const Grid& grid, const CoefficientField& coeff,
    const std::array<const std::vector<double>*, 2>& face_w,
    const std::vector<double>* node_w) {
  const int nn = grid.node_count();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(nn) * (grid.dim == 1 ? 3 : 5));

  // diffusion in flux form
  for (int d = 0; d < grid.dim; ++d) {
    const double inv_h2 = 1.0 / (grid.spacing[d] * grid.spacing[d]);
    const int nf = grid.face_count(d);
    for (int f = 0; f < nf; ++f) {
      const double w = face_w[d] ? (*face_w[d])[f] : 1.0;
      if (w == 0.0) continue;
      const double c = w * (coeff.lambda_faces[d][f] * inv_h2);
      const Face face = grid.face(d, f);
      if (face.a >= 0 && face.b >= 0) {
        trip.emplace_back(face.a, face.a, -c);
        trip.emplace_back(face.a, face.b, c);
        trip.emplace_back(face.b, face.b, -c);
        trip.emplace_back(face.b, face.a, c);
      } else if (face.b >= 0) {  // Dirichlet boundary on the low side
        trip.emplace_back(face.b, face.b, -c);
      } else if (face.a >= 0) {  // Dirichlet boundary on the high side
        trip.emplace_back(face.a, face.a, -c);
      }
    }
  }

  bool any_rho = false;
  for (int node = 0; node < nn; ++node) {
    const double w = node_w ? (*node_w)[node] : 1.0;
    const int i = node % grid.n[0];
    const int j = node / grid.n[0];

    // centered advection, one-sided at Neumann boundary nodes
    for (int d = 0; d < grid.dim; ++d) {
      const double rho = coeff.rho_nodes[d][node];
      if (rho != 0.0) any_rho = true;
      if (w == 0.0 || rho == 0.0) continue;
      const double h = grid.spacing[d];
      const int id = d == 0 ? i : j;
      auto idx = [&](int shifted) {
        return d == 0 ? grid.node_index(shifted, j) : grid.node_index(i, shifted);
      };
      const bool at_low = id == 0;
      const bool at_high = id == grid.n[d] - 1;
      if (grid.bc == BcKind::Neumann && (at_low || at_high)) {
        const double c = w * (rho / h);
        if (at_low) {
          trip.emplace_back(node, idx(1), -c);
          trip.emplace_back(node, node, c);
        } else {
          trip.emplace_back(node, node, -c);
          trip.emplace_back(node, idx(id - 1), c);
        }
      } else {
        const double c = w * (rho / (2.0 * h));
        if (!at_low) trip.emplace_back(node, idx(id - 1), c);
        if (!at_high) trip.emplace_back(node, idx(id + 1), -c);
      }
    }

    const double sigma = coeff.sigma_nodes[node];
    if (w != 0.0 && sigma != 0.0)
      trip.emplace_back(node, node, -(w * sigma));
  }

  SparseOperator op;
  op.mat.resize(nn, nn);
  op.mat.setFromTriplets(trip.begin(), trip.end());
  op.mat.prune(0.0, 0.0);
  op.symmetric = !any_rho;
  for (int row = 0; row < nn; ++row) {
    if (op.mat.outerIndexPtr()[row + 1] > op.mat.outerIndexPtr()[row])
      op.active_nodes.push_back(row);
  }
  return op;
}

// Entry of a row-major sparse matrix, or nullptr when (row, col) is not in
// the stored pattern.
double* stored_entry(Eigen::SparseMatrix<double, Eigen::RowMajor>& mat,
                     int row, int col) {
  const int begin = mat.outerIndexPtr()[row];
  const int end = mat.outerIndexPtr()[row + 1];
  const int* inner = mat.innerIndexPtr();
  const int* pos = std::lower_bound(inner + begin, inner + end, col);
  if (pos == inner + end || *pos != col) return nullptr;
  return mat.valuePtr() + (pos - inner);
}

// The weighted parts reproduce the full operator only up to round-off in the
// products chi_k * coefficient. Folding that round-off residual into the last
// part that already stores the entry makes the additivity A = sum A_k hold
// bit-exactly without changing any part by more than a few ulps. Residuals
// larger than a few ulps indicate a genuinely broken partition and are left
// in place so defect checks can see them.
void tighten_additivity(SplitOperator& split) {
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  constexpr double kUlpBudget = 64.0 * std::numeric_limits<double>::epsilon();
  for (int pass = 0; pass < 8; ++pass) {
    Sparse residual = split.full.mat;
    for (const auto& part : split.parts) residual -= part.mat;
    residual.prune(0.0, 0.0);
    if (residual.nonZeros() == 0) return;
    bool adjusted = false;
    for (int row = 0; row < residual.outerSize(); ++row) {
      for (Sparse::InnerIterator it(residual, row); it; ++it) {
        const double full_entry = split.full.mat.coeff(row, it.col());
        if (std::abs(it.value()) > kUlpBudget * std::abs(full_entry)) continue;
        for (auto part = split.parts.rbegin(); part != split.parts.rend();
             ++part) {
          if (double* entry = stored_entry(part->mat, row, it.col())) {
            *entry += it.value();
            adjusted = true;
            break;
          }
        }
      }
    }
    if (!adjusted) return;
  }
}

}  // namespace

SparseOperator SparseOperator::from_dense(const Eigen::MatrixXd& dense,
                                          bool symmetric) {
  SparseOperator op;
  op.mat = dense.sparseView();
  op.mat.prune(0.0, 0.0);
  op.symmetric = symmetric;
  for (int row = 0; row < dense.rows(); ++row)
    if (op.mat.outerIndexPtr()[row + 1] > op.mat.outerIndexPtr()[row])
      op.active_nodes.push_back(row);
  return op;
}

SparseOperator assemble_full(const Grid& grid, const CoefficientField& coeff) {
  return assemble_weighted(grid, coeff, {nullptr, nullptr}, nullptr);
}

SplitOperator assemble_split(const Grid& grid, const CoefficientField& coeff,
                             const Partition& partition) {
  SplitOperator split;
  split.grid = &grid;
  split.full = assemble_full(grid, coeff);
  split.parts.reserve(partition.q);
  for (int k = 0; k < partition.q; ++k) {
    std::array<const std::vector<double>*, 2> face_w{nullptr, nullptr};
    for (int d = 0; d < grid.dim; ++d) face_w[d] = &partition.chi_faces[d][k];
    split.parts.push_back(
        assemble_weighted(grid, coeff, face_w, &partition.chi_nodes[k]));
  }
  tighten_additivity(split);
  return split;
}

double splitting_defect(const SplitOperator& split, int n_probes,
                        std::uint64_t seed) {
  if (n_probes < 1) throw InvalidArgument("splitting_defect: n_probes >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int n = split.full.size();
  // A_full v - sum_k A_k v is evaluated through the entrywise difference
  // A_full - sum_k A_k so the result measures the operators themselves and is
  // not polluted by round-off of two separately accumulated matrix-vector
  // products; for an exactly additive splitting it is exactly zero.
  Eigen::SparseMatrix<double, Eigen::RowMajor> diff = split.full.mat;
  for (const auto& part : split.parts) diff -= part.mat;
  diff.prune(0.0, 0.0);
  double worst = 0.0;
  for (int probe = 0; probe < n_probes; ++probe) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    const Eigen::VectorXd defect = diff * v;
    worst = std::max(worst,
                     defect.lpNorm<Eigen::Infinity>() /
                         v.lpNorm<Eigen::Infinity>());
  }
  return worst;
}

void dump_triplets(const SparseOperator& op, std::ostream& out) {
  for (int row = 0; row < op.mat.outerSize(); ++row)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
             op.mat, row);
         it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace ddsplit
