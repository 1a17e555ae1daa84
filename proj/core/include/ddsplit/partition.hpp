#pragma once

#include <array>
#include <string>
#include <vector>

#include "ddsplit/grid.hpp"

namespace ddsplit {

enum class RampKind { Linear, CubicSmoothstep };
enum class CoverKind { Stripes, Blocks, Identity };

/// Partition of unity over an overlapping cover. Weights are closed-form
/// profiles evaluated at nodes and face midpoints, so the sum-to-one
/// identity holds to round-off at both sets of points.
struct Partition {
  int q = 0;
  std::vector<std::vector<double>> chi_nodes;  // q x node_count
  std::array<std::vector<std::vector<double>>, 2>
      chi_faces;  // per dim: q x face_count(d)
  std::vector<std::vector<int>> supports;  // q x sorted node indices, chi > 0
  std::vector<std::vector<std::vector<int>>>
      components;  // q x component x node indices
  double delta = 0.0;
  bool delta_resolved = true;  // delta >= 2 * max spacing
};

struct CoverSpec {
  CoverKind kind = CoverKind::Stripes;
  std::array<int, 2> counts{2, 2};  // stripes: counts[0]; blocks: per dim
  double delta = 0.1;
  RampKind ramp = RampKind::Linear;
};

/// Stripe cover along dimension 0, stripes colored cyclically. The default
/// two colors give q = 2; same-color stripes must stay non-adjacent.
Partition build_stripes(const Grid& grid, int n_stripes, double delta,
                        RampKind ramp, int colors = 2);

/// 2D block cover, blocks grouped into 4 colors so same-color blocks are
/// pairwise disjoint; weights are tensor products of 1D profiles.
Partition build_blocks(const Grid& grid, std::array<int, 2> blocks_per_dim,
                       double delta, RampKind ramp);

Partition build_cover(const Grid& grid, const CoverSpec& spec);

/// Identity partition, q = 1 (chi == 1 everywhere).
Partition build_identity(const Grid& grid);

struct PartitionReport {
  double max_sum_deviation = 0.0;
  int bounds_violations = 0;
  int support_violations = 0;
  int adjacency_violations = 0;
  bool pass(double tol) const {
    return max_sum_deviation <= tol && bounds_violations == 0 &&
           support_violations == 0 && adjacency_violations == 0;
  }
};

PartitionReport verify_partition(const Grid& grid, const Partition& p,
                                 double tol);

}  // namespace ddsplit
