#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ddsplit/errors.hpp"

namespace ddsplit {

enum class BcKind { Dirichlet, Neumann };

/// A face of the dual mesh in a given direction. Node index -1 marks the
/// domain boundary on that side.
struct Face {
  int a;                      // low-side node, -1 on the boundary
  int b;                      // high-side node, -1 on the boundary
  std::array<double, 2> mid;  // physical midpoint
};

/// Structured 1D/2D grid. Dirichlet grids store interior nodes only;
/// Neumann grids include the boundary nodes.
struct Grid {
  int dim = 1;
  std::array<double, 2> extent{1.0, 0.0};
  std::array<int, 2> n{0, 1};  // nodes per dimension (1 in the unused dim)
  std::array<double, 2> spacing{0.0, 0.0};
  BcKind bc = BcKind::Dirichlet;

  int node_count() const { return n[0] * n[1]; }
  int node_index(int i, int j = 0) const { return i + n[0] * j; }

  // coordinate of node index i along dimension d
  double coord1(int d, int i) const {
    return bc == BcKind::Dirichlet ? (i + 1) * spacing[d] : i * spacing[d];
  }
  std::array<double, 2> node_coord(int i, int j = 0) const {
    return {coord1(0, i), dim == 2 ? coord1(1, j) : 0.0};
  }

  int faces_per_line(int d) const {
    return bc == BcKind::Dirichlet ? n[d] + 1 : n[d] - 1;
  }
  int face_lines(int d) const {
    if (dim == 1) return d == 0 ? 1 : 0;
    return d == 0 ? n[1] : n[0];
  }
  int face_count(int d) const { return faces_per_line(d) * face_lines(d); }

  /// Face f in direction d; f = fi + faces_per_line(d) * line.
  Face face(int d, int f) const;

  /// Volume of the dual cell around a node (half cells at Neumann boundaries).
  double cell_volume(int node) const;

  /// Node indices of the stencil neighbors (2 in 1D, up to 4 in 2D).
  void neighbors(int node, std::array<int, 4>& out, int& count) const;
};

Grid build_grid(int dim, std::span<const double> extents,
                std::span<const int> n_per_dim, BcKind bc);

/// Pointwise coefficient functions of the model problem.
struct CoefficientSpec {
  std::function<double(double, double)> lambda;
  std::array<std::function<double(double, double)>, 2> rho;
  std::function<double(double, double)> sigma;
};

/// Coefficients sampled on a grid: diffusion at face midpoints, advection and
/// reaction at nodes, plus the derived dissipativity constants.
struct CoefficientField {
  std::array<std::vector<double>, 2> lambda_faces;  // per dimension
  std::array<std::vector<double>, 2> rho_nodes;     // per dimension
  std::vector<double> sigma_nodes;
  double lambda0 = 0.0;  // min of lambda over faces
  double Psq = 0.0;      // sum over dims of (max |rho_d|)^2
  double sigma0 = 0.0;   // min of sigma over nodes

  bool pure_diffusion() const;
};

CoefficientField sample_coefficients(const Grid& grid,
                                     const CoefficientSpec& spec);

/// Dissipativity shift M = max{0, P^2/(2 lambda0) - sigma0}.
double dissipativity_shift(const CoefficientField& coeff);

struct InitialData {
  Eigen::VectorXd eta;
};

InitialData sample_initial(const Grid& grid,
                           const std::function<double(double, double)>& f);

}  // namespace ddsplit
