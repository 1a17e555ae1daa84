#include "ddsplit/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

namespace ddsplit {

namespace {

struct HaloEntry {
  int local_row;
  int global_col;
  double coeff;  // tau * A[row, col], moved to the right-hand side
};

struct TridiagFactor {
  // in-place LU of a tridiagonal matrix: sub holds the multipliers
  Eigen::VectorXd sub, diag, super;

  void factorize() {
    const int m = static_cast<int>(diag.size());
    for (int i = 1; i < m; ++i) {
      if (std::abs(diag[i - 1]) < 1e-300)
        throw SingularSystem("tridiagonal elimination breakdown");
      const double l = sub[i] / diag[i - 1];
      sub[i] = l;
      diag[i] -= l * super[i - 1];
    }
    if (std::abs(diag[m - 1]) < 1e-300)
      throw SingularSystem("tridiagonal elimination breakdown");
  }

  void solve_inplace(Eigen::VectorXd& x) const {
    const int m = static_cast<int>(diag.size());
    for (int i = 1; i < m; ++i) x[i] -= sub[i] * x[i - 1];
    x[m - 1] /= diag[m - 1];
    for (int i = m - 2; i >= 0; --i)
      x[i] = (x[i] - super[i] * x[i + 1]) / diag[i];
  }
};

}  // namespace

struct ResolventFactor::Component {
  std::vector<int> nodes;  // sorted global indices
  std::vector<HaloEntry> halo;

  enum class Kind { Tridiag, Direct, Iterative } kind = Kind::Direct;
  TridiagFactor tridiag;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu;
  std::unique_ptr<Eigen::BiCGSTAB<Eigen::SparseMatrix<double>>> bicg;
  Eigen::SparseMatrix<double> matrix;  // kept for the iterative backend

  void solve_into(const Eigen::VectorXd& rhs, Eigen::VectorXd& out,
                  const SolverOptions& opts) const {
    const int m = static_cast<int>(nodes.size());
    Eigen::VectorXd local(m);
    for (int i = 0; i < m; ++i) local[i] = rhs[nodes[i]];
    for (const auto& h : halo) local[h.local_row] += h.coeff * rhs[h.global_col];
    if (kind == Kind::Tridiag) {
      tridiag.solve_inplace(local);
    } else if (kind == Kind::Direct) {
      local = lu->solve(local).eval();
    } else {
      Eigen::VectorXd sol = bicg->solve(local);
      if (bicg->info() != Eigen::Success ||
          bicg->error() > opts.tol * 10.0)
        throw NoConvergence("iterative resolvent solve did not converge");
      local = sol;
    }
    for (int i = 0; i < m; ++i) out[nodes[i]] = local[i];
  }
};

ResolventFactor::~ResolventFactor() = default;
ResolventFactor::ResolventFactor(ResolventFactor&&) noexcept = default;
ResolventFactor& ResolventFactor::operator=(ResolventFactor&&) noexcept =
    default;

ResolventFactor::ResolventFactor(const SparseOperator& op, double tau,
                                 double shift_estimate, SolverOptions opts)
    : tau_(tau), n_(op.size()) {
  if (tau * shift_estimate >= 1.0)
    throw InvalidArgument(
        "factorize: tau * M >= 1, resolvent not guaranteed solvable");

  const auto& mat = op.mat;
  std::vector<char> active(n_, 0);
  for (int i : op.active_nodes) active[i] = 1;

  // symmetric closure of the nonzero pattern restricted to active nodes
  std::vector<std::vector<int>> adj(n_);
  for (int row : op.active_nodes) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(mat,
                                                                        row);
         it; ++it) {
      const int col = static_cast<int>(it.col());
      if (col == row || !active[col]) continue;
      adj[row].push_back(col);
      adj[col].push_back(row);
    }
  }

  std::vector<int> comp_of(n_, -1);
  std::vector<std::vector<int>> comp_nodes;
  for (int start : op.active_nodes) {
    if (comp_of[start] >= 0) continue;
    const int c = static_cast<int>(comp_nodes.size());
    comp_nodes.emplace_back();
    std::queue<int> queue;
    queue.push(start);
    comp_of[start] = c;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      comp_nodes[c].push_back(v);
      for (int w : adj[v]) {
        if (comp_of[w] < 0) {
          comp_of[w] = c;
          queue.push(w);
        }
      }
    }
  }

  for (auto& nodes : comp_nodes) {
    std::sort(nodes.begin(), nodes.end());
    auto comp = std::make_unique<Component>();
    comp->nodes = nodes;
    const int m = static_cast<int>(nodes.size());
    std::vector<int> local_of(n_, -1);
    for (int i = 0; i < m; ++i) local_of[nodes[i]] = i;

    std::vector<Eigen::Triplet<double>> trip;
    int bandwidth = 0;
    for (int i = 0; i < m; ++i) {
      const int row = nodes[i];
      double diag_extra = 0.0;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
               mat, row);
           it; ++it) {
        const int col = static_cast<int>(it.col());
        const int lc = local_of[col];
        if (lc < 0) {
          comp->halo.push_back({i, col, tau * it.value()});
          continue;
        }
        if (lc == i)
          diag_extra = -tau * it.value();
        else
          trip.emplace_back(i, lc, -tau * it.value());
        bandwidth = std::max(bandwidth, std::abs(lc - i));
      }
      trip.emplace_back(i, i, 1.0 + diag_extra);
    }

    if (bandwidth <= 1 && opts.backend == SolverOptions::Backend::Direct) {
      comp->kind = Component::Kind::Tridiag;
      comp->tridiag.sub = Eigen::VectorXd::Zero(m);
      comp->tridiag.diag = Eigen::VectorXd::Zero(m);
      comp->tridiag.super = Eigen::VectorXd::Zero(m);
      for (const auto& t : trip) {
        if (t.row() == t.col())
          comp->tridiag.diag[t.row()] += t.value();
        else if (t.col() == t.row() - 1)
          comp->tridiag.sub[t.row()] += t.value();
        else
          comp->tridiag.super[t.row()] += t.value();
      }
      comp->tridiag.factorize();
    } else {
      comp->matrix.resize(m, m);
      comp->matrix.setFromTriplets(trip.begin(), trip.end());
      bool direct_ok = false;
      if (opts.backend == SolverOptions::Backend::Direct) {
        comp->lu =
            std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
        comp->lu->compute(comp->matrix);
        direct_ok = comp->lu->info() == Eigen::Success;
        if (direct_ok) comp->kind = Component::Kind::Direct;
      }
      if (!direct_ok) {
        comp->lu.reset();
        comp->kind = Component::Kind::Iterative;
        comp->bicg = std::make_unique<
            Eigen::BiCGSTAB<Eigen::SparseMatrix<double>>>();
        comp->bicg->setTolerance(opts.tol);
        comp->bicg->setMaxIterations(opts.max_iter);
        comp->bicg->compute(comp->matrix);
      }
    }
    comps_.push_back(std::move(comp));
  }
  opts_ = opts;
}

Eigen::VectorXd ResolventFactor::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_)
    throw InvalidArgument("solve: rhs length mismatch");
  Eigen::VectorXd out = rhs;  // passive entries pass through unchanged
  for (const auto& comp : comps_) comp->solve_into(rhs, out, opts_);
  return out;
}

int ResolventFactor::component_count() const {
  return static_cast<int>(comps_.size());
}

FactorPtr FactorCache::get(const SparseOperator& op, double tau,
                           double shift_estimate, SolverOptions opts) {
  const auto key = std::make_pair(&op, std::bit_cast<std::uint64_t>(tau));
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto factor =
      std::make_shared<ResolventFactor>(op, tau, shift_estimate, opts);
  cache_.emplace(key, factor);
  return factor;
}

}  // namespace ddsplit
