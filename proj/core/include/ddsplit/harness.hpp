#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ddsplit/assembly.hpp"
#include "ddsplit/config.hpp"
#include "ddsplit/expm.hpp"
#include "ddsplit/nonlinear.hpp"

namespace ddsplit {

struct ReferenceSolution {
  Eigen::VectorXd u;
  enum class Method { DenseExpm, FineStep } method = Method::DenseExpm;
  double accuracy = 0.0;  // estimated absolute accuracy
};

Eigen::MatrixXd to_dense(const SparseOperator& op);

/// Discrete reference exp(T*A) eta via dense scaling-and-squaring.
/// Dense path only; node counts above 4096 are rejected.
ReferenceSolution reference_linear(const SparseOperator& A,
                                   const Eigen::VectorXd& eta, double T);

/// Fine-step Strang composition (exact dense linear half-steps, explicit
/// midpoint for the potential). Accuracy estimated by a Richardson check
/// against step size h_ref/2; throws AccuracyNotReached if required_accuracy
/// is positive and the estimate exceeds it.
ReferenceSolution reference_semilinear(const SparseOperator& A,
                                       const Potential& pot,
                                       const Eigen::VectorXd& eta, double T,
                                       double h_ref,
                                       double required_accuracy = 0.0);

/// Discrete L2 norm of u - u_ref weighted by dual-cell volumes.
double error_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& u_ref,
                  const Grid& grid);

/// Least-squares slope of log(error) against log(h).
double convergence_order(std::span<const std::pair<double, double>> pairs);

struct ExperimentRow {
  double h = 0.0;
  int m = 0;
  double error = 0.0;
  double order_running = 0.0;  // NaN on the first row
  double walltime_s = 0.0;
};

struct ExperimentResult {
  std::string scheme;
  int q = 0;
  double delta = 0.0;
  std::vector<ExperimentRow> rows;
  double observed_order = 0.0;
};

/// Everything an h-sweep needs, built once per problem so several schemes
/// can reuse the grid, operators and reference solution.
struct ExperimentSetup {
  Grid grid;
  CoefficientField coeff;
  Partition partition;
  SplitOperator split;
  Eigen::VectorXd eta;
  double M = 0.0;
  Potential pot;
  bool has_potential = false;
};

std::unique_ptr<ExperimentSetup> build_setup(const ExperimentConfig& config);

ReferenceSolution build_reference(const ExperimentSetup& setup,
                                  const ExperimentConfig& config,
                                  bool semilinear);

ExperimentResult run_sweep(const ExperimentSetup& setup,
                           const ExperimentConfig& config, SchemeKind scheme,
                           const ReferenceSolution& ref);

ExperimentResult run_experiment(const ExperimentConfig& config);

void write_csv_header(std::ostream& out);
void write_csv_rows(const ExperimentResult& result, std::ostream& out,
                    bool include_walltime = true);
void write_csv(const ExperimentResult& result, std::ostream& out,
               bool include_walltime = true);
void write_csv(std::span<const ExperimentResult> results, std::ostream& out,
               bool include_walltime = true);

}  // namespace ddsplit
