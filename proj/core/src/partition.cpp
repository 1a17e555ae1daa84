#include "ddsplit/partition.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace ddsplit {
namespace {

double ramp_value(RampKind ramp, double t) {
  t = std::clamp(t, 0.0, 1.0);
  if (ramp == RampKind::Linear) return t;
  return t * t * (3.0 - 2.0 * t);  // cubic smoothstep
}

// Trapezoid profiles of an evenly spaced 1D stripe cover on [0, L].
// Profile s is 1 on the stripe core, ramps over width delta across the
// interior stripe boundaries and vanishes outside. Complementary ramps at a
// shared boundary are evaluated from the same expression, which keeps the
// sum-to-one identity at round-off.
struct StripeProfiles {
  double L = 1.0;
  int ns = 2;
  double delta = 0.1;
  RampKind ramp = RampKind::Linear;

  double boundary(int s) const { return s * L / ns; }

  double weight(int s, double x) const {
    const double half = 0.5 * delta;
    double w = 1.0;
    if (s > 0) {
      const double b = boundary(s);
      w *= ramp_value(ramp, (x - (b - half)) / delta);
    }
    if (s < ns - 1) {
      const double b = boundary(s + 1);
      w *= 1.0 - ramp_value(ramp, (x - (b - half)) / delta);
    }
    return w;
  }
};

void find_supports_and_components(const Grid& grid, Partition& p) {
  const int nn = grid.node_count();
  p.supports.assign(p.q, {});
  p.components.assign(p.q, {});
  std::array<int, 4> nbr{};
  int nbr_count = 0;
  for (int k = 0; k < p.q; ++k) {
    std::vector<char> in_support(nn, 0);
    for (int i = 0; i < nn; ++i) {
      if (p.chi_nodes[k][i] > 0.0) {
        in_support[i] = 1;
        p.supports[k].push_back(i);
      }
    }
    std::vector<char> seen(nn, 0);
    for (int start : p.supports[k]) {
      if (seen[start]) continue;
      std::vector<int> comp;
      std::queue<int> queue;
      queue.push(start);
      seen[start] = 1;
      while (!queue.empty()) {
        const int v = queue.front();
        queue.pop();
        comp.push_back(v);
        grid.neighbors(v, nbr, nbr_count);
        for (int t = 0; t < nbr_count; ++t) {
          const int w = nbr[t];
          if (in_support[w] && !seen[w]) {
            seen[w] = 1;
            queue.push(w);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      p.components[k].push_back(std::move(comp));
    }
  }
}

void check_delta_resolved(const Grid& grid, Partition& p) {
  double hmax = 0.0;
  for (int d = 0; d < grid.dim; ++d) hmax = std::max(hmax, grid.spacing[d]);
  p.delta_resolved = p.delta >= 2.0 * hmax;
}

}  // namespace

Partition build_stripes(const Grid& grid, int n_stripes, double delta,
                        RampKind ramp, int colors) {
  if (n_stripes < 2) throw InvalidArgument("build_stripes: need >= 2 stripes");
  if (colors < 2 || colors > n_stripes)
    throw InvalidArgument("build_stripes: colors must be in [2, n_stripes]");
  const double width = grid.extent[0] / n_stripes;
  if (!(delta > 0.0) || delta >= width)
    throw InvalidArgument("build_stripes: overlap too wide for stripe width");

  StripeProfiles prof{grid.extent[0], n_stripes, delta, ramp};

  Partition p;
  p.q = colors;
  p.delta = delta;
  const int nn = grid.node_count();
  p.chi_nodes.assign(p.q, std::vector<double>(nn, 0.0));
  for (int node = 0; node < nn; ++node) {
    const double x = grid.coord1(0, node % grid.n[0]);
    for (int s = 0; s < n_stripes; ++s)
      p.chi_nodes[s % colors][node] += prof.weight(s, x);
  }
  for (int d = 0; d < grid.dim; ++d) {
    const int nf = grid.face_count(d);
    p.chi_faces[d].assign(p.q, std::vector<double>(nf, 0.0));
    for (int f = 0; f < nf; ++f) {
      const double x = grid.face(d, f).mid[0];
      for (int s = 0; s < n_stripes; ++s)
        p.chi_faces[d][s % colors][f] += prof.weight(s, x);
    }
  }

  find_supports_and_components(grid, p);
  check_delta_resolved(grid, p);
  return p;
}

Partition build_blocks(const Grid& grid, std::array<int, 2> blocks_per_dim,
                       double delta, RampKind ramp) {
  if (grid.dim != 2) throw InvalidArgument("build_blocks: 2D grid required");
  for (int d = 0; d < 2; ++d) {
    if (blocks_per_dim[d] < 2)
      throw InvalidArgument("build_blocks: need >= 2 blocks per dimension");
    const double width = grid.extent[d] / blocks_per_dim[d];
    if (!(delta > 0.0) || delta >= width)
      throw InvalidArgument("build_blocks: overlap too wide for block width");
  }

  StripeProfiles px{grid.extent[0], blocks_per_dim[0], delta, ramp};
  StripeProfiles py{grid.extent[1], blocks_per_dim[1], delta, ramp};
  auto color_of = [](int bi, int bj) { return (bi % 2) + 2 * (bj % 2); };

  Partition p;
  p.q = 4;
  p.delta = delta;
  const int nn = grid.node_count();
  p.chi_nodes.assign(4, std::vector<double>(nn, 0.0));
  auto accumulate = [&](std::vector<std::vector<double>>& chi, int idx,
                        double x, double y) {
    for (int bi = 0; bi < blocks_per_dim[0]; ++bi) {
      const double wx = px.weight(bi, x);
      if (wx == 0.0) continue;
      for (int bj = 0; bj < blocks_per_dim[1]; ++bj) {
        const double wy = py.weight(bj, y);
        if (wy == 0.0) continue;
        chi[color_of(bi, bj)][idx] += wx * wy;
      }
    }
  };
  for (int node = 0; node < nn; ++node) {
    const auto x = grid.node_coord(node % grid.n[0], node / grid.n[0]);
    accumulate(p.chi_nodes, node, x[0], x[1]);
  }
  for (int d = 0; d < 2; ++d) {
    const int nf = grid.face_count(d);
    p.chi_faces[d].assign(4, std::vector<double>(nf, 0.0));
    for (int f = 0; f < nf; ++f) {
      const auto mid = grid.face(d, f).mid;
      accumulate(p.chi_faces[d], f, mid[0], mid[1]);
    }
  }

  find_supports_and_components(grid, p);
  check_delta_resolved(grid, p);
  return p;
}

Partition build_cover(const Grid& grid, const CoverSpec& spec) {
  switch (spec.kind) {
    case CoverKind::Identity:
      return build_identity(grid);
    case CoverKind::Stripes:
      return build_stripes(grid, spec.counts[0], spec.delta, spec.ramp);
    case CoverKind::Blocks:
      return build_blocks(grid, {spec.counts[0], spec.counts[1]}, spec.delta,
                          spec.ramp);
  }
  throw InvalidArgument("build_cover: unknown cover kind");
}

Partition build_identity(const Grid& grid) {
  Partition p;
  p.q = 1;
  p.delta = grid.extent[0];
  const int nn = grid.node_count();
  p.chi_nodes.assign(1, std::vector<double>(nn, 1.0));
  for (int d = 0; d < grid.dim; ++d)
    p.chi_faces[d].assign(1, std::vector<double>(grid.face_count(d), 1.0));
  find_supports_and_components(grid, p);
  p.delta_resolved = true;
  return p;
}

PartitionReport verify_partition(const Grid& grid, const Partition& p,
                                 double tol) {
  PartitionReport report;
  const int nn = grid.node_count();

  auto check_bounds = [&](double chi) {
    if (chi < -tol || chi > 1.0 + tol) ++report.bounds_violations;
  };

  for (int i = 0; i < nn; ++i) {
    double sum = 0.0;
    for (int k = 0; k < p.q; ++k) {
      sum += p.chi_nodes[k][i];
      check_bounds(p.chi_nodes[k][i]);
    }
    report.max_sum_deviation =
        std::max(report.max_sum_deviation, std::abs(sum - 1.0));
  }
  for (int d = 0; d < grid.dim; ++d) {
    const int nf = grid.face_count(d);
    for (int f = 0; f < nf; ++f) {
      double sum = 0.0;
      for (int k = 0; k < p.q; ++k) {
        sum += p.chi_faces[d][k][f];
        check_bounds(p.chi_faces[d][k][f]);
      }
      report.max_sum_deviation =
          std::max(report.max_sum_deviation, std::abs(sum - 1.0));
    }
  }

  // chi must vanish exactly outside the declared support
  for (int k = 0; k < p.q; ++k) {
    std::vector<char> in_support(nn, 0);
    for (int i : p.supports[k]) in_support[i] = 1;
    for (int i = 0; i < nn; ++i)
      if (!in_support[i] && p.chi_nodes[k][i] != 0.0)
        ++report.support_violations;
  }

  // components of one color may not touch, not even through a shared
  // stencil neighbor
  std::array<int, 4> nbr{};
  int nbr_count = 0;
  for (int k = 0; k < p.q; ++k) {
    std::vector<int> label(nn, -1);
    for (size_t c = 0; c < p.components[k].size(); ++c)
      for (int i : p.components[k][c]) label[i] = static_cast<int>(c);
    for (int i = 0; i < nn; ++i) {
      grid.neighbors(i, nbr, nbr_count);
      int first = label[i];
      for (int t = 0; t < nbr_count; ++t) {
        const int l = label[nbr[t]];
        if (l < 0) continue;
        if (first < 0)
          first = l;
        else if (l != first)
          ++report.adjacency_violations;
      }
    }
  }

  return report;
}

}  // namespace ddsplit
