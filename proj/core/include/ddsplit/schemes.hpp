#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddsplit/nonlinear.hpp"
#include "ddsplit/solver.hpp"

namespace ddsplit {

enum class SchemeKind {
  Additive,
  DouglasRachford,
  PeacemanRachford,
  FractionalStepCN,
  SemilinearImplicitF,
  SemilinearExplicitF
};

const char* scheme_name(SchemeKind kind);

struct SchemeConfig {
  SchemeKind kind = SchemeKind::Additive;
  double h = 0.0;
  int m = 0;
  bool strict_restriction = true;
};

struct State {
  Eigen::VectorXd u;
  double t = 0.0;
};

/// Evaluate the kind-specific step restriction (hqM <= 1/2 for the additive
/// family, h*max M_k <= 1/2 for the ADI schemes, hM <= 1 for the fractional
/// step Crank-Nicolson, plus h*M[F] <= 1/2 where the nonlinear resolvent is
/// used). Returns a description of the violation, or nullopt when satisfied.
std::optional<std::string> check_restriction(SchemeKind kind, double h,
                                             std::span<const double> M_parts,
                                             double M_F = 0.0);

// Single steps on prebuilt resolvent factors. The factor tau must match the
// scheme: h*q for the additive family, h for Douglas-Rachford, h/2 for
// Peaceman-Rachford and the fractional step scheme.
State step_additive(const State& state, double h,
                    std::span<const FactorPtr> factors);
State step_douglas_rachford(const State& state, double h,
                            const SparseOperator& A1, const SparseOperator& A2,
                            const ResolventFactor& f1,
                            const ResolventFactor& f2);
State step_peaceman_rachford(const State& state, double h,
                             const SparseOperator& A1,
                             const SparseOperator& A2,
                             const ResolventFactor& f1,
                             const ResolventFactor& f2);
State step_fscn(const State& state, double h,
                std::span<const SparseOperator* const> parts,
                std::span<const FactorPtr> factors);
State step_semilinear_implicitF(const State& state, double h,
                                std::span<const FactorPtr> factors,
                                const Potential& pot);
State step_semilinear_explicitF(const State& state, double h,
                                std::span<const FactorPtr> factors,
                                const Potential& pot);

struct TrajectorySummary {
  State final_state;
  std::vector<double> step_norms;  // L2 norm of u after each step
  double max_norm = 0.0;
  std::optional<std::string> restriction_warning;
};

struct IntegrateOptions {
  std::vector<int> part_order;  // permutation of parts; empty = identity
  SolverOptions solver;
};

/// m applications of S_h starting from eta. Factors are built once per
/// (part, tau) and reused across all steps.
TrajectorySummary integrate(const SchemeConfig& config,
                            const SplitOperator& split, const Potential* pot,
                            const Eigen::VectorXd& eta,
                            std::span<const double> M_parts, double M_F = 0.0,
                            const IntegrateOptions& opts = {});

/// Worker cap from DDSPLIT_THREADS (default 1).
int thread_budget();

}  // namespace ddsplit
