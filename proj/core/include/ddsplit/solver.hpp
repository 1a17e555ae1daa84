#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ddsplit/assembly.hpp"

namespace ddsplit {

struct SolverOptions {
  enum class Backend { Direct, Iterative };
  Backend backend = Backend::Direct;
  double tol = 1e-11;
  int max_iter = 10000;
};

/// Factorization of (I - tau*A) exploiting the subdomain structure: one
/// independent direct factorization per disjoint component of the active
/// node set; passive rows act as the identity.
class ResolventFactor {
 public:
  ResolventFactor(const SparseOperator& op, double tau,
                  double shift_estimate = 0.0, SolverOptions opts = {});
  ~ResolventFactor();
  ResolventFactor(ResolventFactor&&) noexcept;
  ResolventFactor& operator=(ResolventFactor&&) noexcept;

  /// Solve (I - tau*A) w = rhs. Passive entries of w equal rhs exactly.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  double tau() const { return tau_; }
  int component_count() const;

 private:
  struct Component;
  double tau_ = 0.0;
  int n_ = 0;
  SolverOptions opts_;
  std::vector<std::unique_ptr<Component>> comps_;
};

using FactorPtr = std::shared_ptr<const ResolventFactor>;

/// Cache keyed by operator identity and the exact bits of tau; all schemes
/// reuse one tau across every step of an integration.
class FactorCache {
 public:
  FactorPtr get(const SparseOperator& op, double tau,
                double shift_estimate = 0.0, SolverOptions opts = {});
  void clear() { cache_.clear(); }

 private:
  std::map<std::pair<const SparseOperator*, std::uint64_t>, FactorPtr> cache_;
};

}  // namespace ddsplit
