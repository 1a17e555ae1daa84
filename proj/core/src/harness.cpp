#include "ddsplit/harness.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace ddsplit {

namespace {

constexpr int kDenseLimit = 4096;

Eigen::VectorXd strang_fine_steps(const Eigen::MatrixXd& A,
                                  const Potential& pot,
                                  const Eigen::VectorXd& eta, double T,
                                  int steps) {
  const double h = T / steps;
  const Eigen::MatrixXd E_half = expm((0.5 * h) * A);
  Eigen::VectorXd u = eta;
  for (int s = 0; s < steps; ++s) {
    u = E_half * u;
    // explicit midpoint for u' = F(u)
    const Eigen::VectorXd mid = u + (0.5 * h) * eval_F(u, pot);
    u += h * eval_F(mid, pot);
    u = E_half * u;
  }
  return u;
}

}  // namespace

Eigen::MatrixXd to_dense(const SparseOperator& op) {
  return Eigen::MatrixXd(op.mat);
}

ReferenceSolution reference_linear(const SparseOperator& A,
                                   const Eigen::VectorXd& eta, double T) {
  if (A.size() > kDenseLimit)
    throw TooLargeForDense("reference_linear: node count above dense limit");
  ReferenceSolution ref;
  ref.method = ReferenceSolution::Method::DenseExpm;
  ref.u = expm(T * to_dense(A)) * eta;
  ref.accuracy = 1e-12 * (ref.u.norm() + eta.norm());
  return ref;
}

ReferenceSolution reference_semilinear(const SparseOperator& A,
                                       const Potential& pot,
                                       const Eigen::VectorXd& eta, double T,
                                       double h_ref,
                                       double required_accuracy) {
  if (A.size() > kDenseLimit)
    throw TooLargeForDense("reference_semilinear: node count above dense limit");
  const Eigen::MatrixXd dense = to_dense(A);
  const int steps = std::max(1, static_cast<int>(std::ceil(T / h_ref)));
  const Eigen::VectorXd coarse = strang_fine_steps(dense, pot, eta, T, steps);
  const Eigen::VectorXd fine = strang_fine_steps(dense, pot, eta, T, 2 * steps);

  ReferenceSolution ref;
  ref.method = ReferenceSolution::Method::FineStep;
  ref.u = fine;
  ref.accuracy = (coarse - fine).norm();
  if (required_accuracy > 0.0 && ref.accuracy > required_accuracy)
    throw AccuracyNotReached(
        "reference_semilinear: Richardson estimate exceeds required margin");
  return ref;
}

double error_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& u_ref,
                  const Grid& grid) {
  if (u.size() != u_ref.size())
    throw InvalidArgument("error_norm: length mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double d = u[i] - u_ref[i];
    sum += d * d * grid.cell_volume(static_cast<int>(i));
  }
  return std::sqrt(sum);
}

double convergence_order(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3)
    throw InvalidArgument("convergence_order: need at least 3 (h, error) pairs");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(pairs.size());
  for (const auto& [h, err] : pairs) {
    if (!(err > 0.0) || !std::isfinite(err))
      throw DegenerateErrors("convergence_order: zero or non-finite error");
    const double x = std::log(h);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::unique_ptr<ExperimentSetup> build_setup(const ExperimentConfig& config) {
  validate_config(config);
  auto setup = std::make_unique<ExperimentSetup>();
  setup->grid = make_grid(config.problem);
  setup->coeff =
      sample_coefficients(setup->grid, make_coefficient_spec(config.problem));
  setup->partition = build_cover(setup->grid, config.cover);
  const PartitionReport report =
      verify_partition(setup->grid, setup->partition, 1e-12);
  if (!report.pass(1e-12))
    throw ValidationError(
        "run_experiment: cover fails partition-of-unity verification");
  setup->split =
      assemble_split(setup->grid, setup->coeff, setup->partition);
  setup->split.grid = &setup->grid;
  setup->M = dissipativity_shift(setup->coeff);
  setup->eta = sample_initial(setup->grid, make_initial(config.problem)).eta;
  if (config.nonlinearity.kind == "potential") {
    setup->pot = Potential(config.nonlinearity.p);
    setup->has_potential = true;
  }
  return setup;
}

ReferenceSolution build_reference(const ExperimentSetup& setup,
                                  const ExperimentConfig& config,
                                  bool semilinear) {
  const double T = config.sweep.T;
  if (semilinear) {
    const int m_min = config.sweep.m0 << (config.sweep.levels - 1);
    const double h_min = T / m_min;
    return reference_semilinear(setup.split.full, setup.pot, setup.eta, T,
                                h_min / 64.0);
  }
  return reference_linear(setup.split.full, setup.eta, T);
}

ExperimentResult run_sweep(const ExperimentSetup& setup,
                           const ExperimentConfig& config, SchemeKind scheme,
                           const ReferenceSolution& ref) {
  const bool semilinear = scheme == SchemeKind::SemilinearImplicitF ||
                          scheme == SchemeKind::SemilinearExplicitF;
  if (semilinear && !setup.has_potential)
    throw ValidationError(
        "run_sweep: semilinear scheme needs nonlinearity.kind = potential");

  const std::vector<double> M_parts(setup.partition.q, setup.M);
  const double T = config.sweep.T;

  ExperimentResult result;
  result.scheme = scheme_name(scheme);
  result.q = setup.partition.q;
  result.delta = setup.partition.delta;

  IntegrateOptions opts;
  opts.part_order = config.part_order;
  opts.solver = config.solver;

  std::vector<std::pair<double, double>> pairs;
  for (int level = 0; level < config.sweep.levels; ++level) {
    const int m = config.sweep.m0 << level;
    const double h = T / m;
    SchemeConfig sc{scheme, h, m, config.strict_restriction};

    const auto start = std::chrono::steady_clock::now();
    const TrajectorySummary traj = integrate(
        sc, setup.split, semilinear ? &setup.pot : nullptr, setup.eta,
        std::span<const double>(M_parts), setup.pot.M_F, opts);
    const auto stop = std::chrono::steady_clock::now();

    ExperimentRow row;
    row.h = h;
    row.m = m;
    row.error = error_norm(traj.final_state.u, ref.u, setup.grid);
    row.walltime_s = std::chrono::duration<double>(stop - start).count();
    if (!pairs.empty() && row.error > 0.0 && pairs.back().second > 0.0)
      row.order_running = std::log(pairs.back().second / row.error) /
                          std::log(pairs.back().first / h);
    else
      row.order_running = std::numeric_limits<double>::quiet_NaN();
    pairs.emplace_back(h, row.error);
    result.rows.push_back(row);
  }

  result.observed_order = convergence_order(pairs);

  // the reference must sit well below the errors it is measuring
  double min_error = std::numeric_limits<double>::infinity();
  for (const auto& [h, err] : pairs) min_error = std::min(min_error, err);
  if (ref.accuracy > min_error / 100.0)
    throw AccuracyNotReached(
        "run_sweep: reference accuracy too coarse for the measured errors");

  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto setup = build_setup(config);
  const bool semilinear = config.scheme == SchemeKind::SemilinearImplicitF ||
                          config.scheme == SchemeKind::SemilinearExplicitF;
  const ReferenceSolution ref = build_reference(*setup, config, semilinear);
  return run_sweep(*setup, config, config.scheme, ref);
}

void write_csv_header(std::ostream& out) {
  out << "scheme,q,delta,h,m,error,order_running,walltime_s\n";
}

void write_csv_rows(const ExperimentResult& result, std::ostream& out,
                    bool include_walltime) {
  for (const auto& row : result.rows) {
    out << result.scheme << ',' << result.q << ','
        << std::setprecision(17) << result.delta << ',' << row.h << ','
        << row.m << ',' << row.error << ',';
    if (std::isnan(row.order_running))
      out << "";
    else
      out << std::setprecision(6) << row.order_running;
    out << ',';
    if (include_walltime) out << std::setprecision(6) << row.walltime_s;
    out << '\n';
  }
}

void write_csv(const ExperimentResult& result, std::ostream& out,
               bool include_walltime) {
  write_csv_header(out);
  write_csv_rows(result, out, include_walltime);
}

void write_csv(std::span<const ExperimentResult> results, std::ostream& out,
               bool include_walltime) {
  write_csv_header(out);
  for (const auto& r : results) write_csv_rows(r, out, include_walltime);
}

}  // namespace ddsplit
