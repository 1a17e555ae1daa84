#include "ddsplit/grid.hpp"

#include <algorithm>
#include <cmath>

namespace ddsplit {

Face Grid::face(int d, int f) const {
  const int per_line = faces_per_line(d);
  const int fi = f % per_line;
  const int line = f / per_line;
  Face out{};
  const double m = (fi + 0.5) * spacing[d];
  if (bc == BcKind::Dirichlet) {
    out.a = fi - 1;
    out.b = fi < n[d] ? fi : -1;
  } else {
    out.a = fi;
    out.b = fi + 1;
  }
  if (d == 0) {
    out.mid = {m, dim == 2 ? coord1(1, line) : 0.0};
    if (out.a >= 0) out.a = node_index(out.a, line);
    if (out.b >= 0) out.b = node_index(out.b, line);
  } else {
    out.mid = {coord1(0, line), m};
    if (out.a >= 0) out.a = node_index(line, out.a);
    if (out.b >= 0) out.b = node_index(line, out.b);
  }
  return out;
}

double Grid::cell_volume(int node) const {
  const int i = node % n[0];
  const int j = node / n[0];
  auto w = [&](int d, int idx) {
    double h = spacing[d];
    if (bc == BcKind::Neumann && (idx == 0 || idx == n[d] - 1)) return 0.5 * h;
    return h;
  };
  double v = w(0, i);
  if (dim == 2) v *= w(1, j);
  return v;
}

void Grid::neighbors(int node, std::array<int, 4>& out, int& count) const {
  const int i = node % n[0];
  const int j = node / n[0];
  count = 0;
  if (i > 0) out[count++] = node_index(i - 1, j);
  if (i < n[0] - 1) out[count++] = node_index(i + 1, j);
  if (dim == 2) {
    if (j > 0) out[count++] = node_index(i, j - 1);
    if (j < n[1] - 1) out[count++] = node_index(i, j + 1);
  }
}

Grid build_grid(int dim, std::span<const double> extents,
                std::span<const int> n_per_dim, BcKind bc) {
  if (dim != 1 && dim != 2)
    throw InvalidArgument("build_grid: dim must be 1 or 2");
  if (static_cast<int>(extents.size()) < dim ||
      static_cast<int>(n_per_dim.size()) < dim)
    throw InvalidArgument("build_grid: extents/n_per_dim too short for dim");

  Grid g;
  g.dim = dim;
  g.bc = bc;
  for (int d = 0; d < dim; ++d) {
    if (extents[d] <= 0.0)
      throw InvalidArgument("build_grid: extent must be positive");
    if (n_per_dim[d] < 3)
      throw InvalidArgument(
          "build_grid: need at least 3 nodes per dimension (stencil needs two "
          "neighbors)");
    g.extent[d] = extents[d];
    g.n[d] = n_per_dim[d];
    g.spacing[d] = bc == BcKind::Dirichlet ? extents[d] / (n_per_dim[d] + 1)
                                           : extents[d] / (n_per_dim[d] - 1);
  }
  if (dim == 1) {
    g.extent[1] = 0.0;
    g.n[1] = 1;
    g.spacing[1] = 0.0;
  }
  return g;
}

bool CoefficientField::pure_diffusion() const {
  for (const auto& r : rho_nodes)
    for (double v : r)
      if (v != 0.0) return false;
  for (double v : sigma_nodes)
    if (v != 0.0) return false;
  return true;
}

CoefficientField sample_coefficients(const Grid& grid,
                                     const CoefficientSpec& spec) {
  CoefficientField c;
  double lambda_min = std::numeric_limits<double>::infinity();
  for (int d = 0; d < grid.dim; ++d) {
    const int nf = grid.face_count(d);
    c.lambda_faces[d].resize(nf);
    for (int f = 0; f < nf; ++f) {
      const Face face = grid.face(d, f);
      const double lam = spec.lambda(face.mid[0], face.mid[1]);
      if (!(lam > 0.0))
        throw InvalidArgument(
            "sample_coefficients: lambda <= 0 at a face (ellipticity "
            "violation)");
      c.lambda_faces[d][f] = lam;
      lambda_min = std::min(lambda_min, lam);
    }
  }

  const int nn = grid.node_count();
  c.sigma_nodes.resize(nn);
  double sigma_min = std::numeric_limits<double>::infinity();
  double psq = 0.0;
  for (int d = 0; d < grid.dim; ++d) {
    c.rho_nodes[d].resize(nn);
    double rho_max = 0.0;
    for (int node = 0; node < nn; ++node) {
      const auto x = grid.node_coord(node % grid.n[0], node / grid.n[0]);
      const double r = spec.rho[d] ? spec.rho[d](x[0], x[1]) : 0.0;
      c.rho_nodes[d][node] = r;
      rho_max = std::max(rho_max, std::abs(r));
    }
    psq += rho_max * rho_max;
  }
  for (int node = 0; node < nn; ++node) {
    const auto x = grid.node_coord(node % grid.n[0], node / grid.n[0]);
    const double s = spec.sigma ? spec.sigma(x[0], x[1]) : 0.0;
    c.sigma_nodes[node] = s;
    sigma_min = std::min(sigma_min, s);
  }

  c.lambda0 = lambda_min;
  c.Psq = psq;
  c.sigma0 = sigma_min;
  return c;
}

double dissipativity_shift(const CoefficientField& coeff) {
  return std::max(0.0, coeff.Psq / (2.0 * coeff.lambda0) - coeff.sigma0);
}

InitialData sample_initial(const Grid& grid,
                           const std::function<double(double, double)>& f) {
  InitialData data;
  data.eta.resize(grid.node_count());
  for (int node = 0; node < grid.node_count(); ++node) {
    const auto x = grid.node_coord(node % grid.n[0], node / grid.n[0]);
    data.eta[node] = f(x[0], x[1]);
  }
  return data;
}

}  // namespace ddsplit
