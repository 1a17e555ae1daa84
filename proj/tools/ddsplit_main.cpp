// ddsplit: domain-decomposition operator splitting experiments.
//
//   ddsplit run    --config <path> [--out <csv>] [--dry-run]
//   ddsplit verify --config <path>
//   ddsplit orders --config <path> --schemes <comma list> [--out <csv>]
//
// Worker count is capped by the DDSPLIT_THREADS environment variable.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ddsplit/harness.hpp"

namespace {

// exit codes by failure category
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRestriction = 3;
constexpr int kExitSolver = 4;
constexpr int kExitDiverged = 5;

using namespace ddsplit;

void print_plan(const ExperimentConfig& c) {
  std::cout << "plan:\n"
            << "  grid: " << c.problem.dim << "D, n = " << c.problem.n[0];
  if (c.problem.dim == 2) std::cout << " x " << c.problem.n[1];
  std::cout << ", bc = "
            << (c.problem.bc == BcKind::Dirichlet ? "dirichlet" : "neumann")
            << "\n  coefficients: " << c.problem.coeff_preset
            << "\n  cover: "
            << (c.cover.kind == CoverKind::Stripes   ? "stripes"
                : c.cover.kind == CoverKind::Blocks  ? "blocks"
                                                     : "identity")
            << ", delta = " << c.cover.delta
            << "\n  scheme: " << scheme_name(c.scheme) << ", T = " << c.sweep.T
            << ", h sweep = " << c.sweep.levels << " levels from T/"
            << c.sweep.m0 << "\n";
}

int cmd_run(const std::string& config_path, std::string out_path,
            bool dry_run) {
  const ExperimentConfig config = parse_config(config_path);
  if (dry_run) {
    print_plan(config);
    return kExitOk;
  }
  const ExperimentResult result = run_experiment(config);
  if (out_path.empty()) out_path = config.out_csv;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    write_csv(result, out);
  } else {
    write_csv(result, std::cout);
  }
  std::cout << "observed order (" << result.scheme
            << "): " << std::setprecision(4) << result.observed_order << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& config_path) {
  const ExperimentConfig config = parse_config(config_path);
  const auto setup = build_setup(config);
  bool ok = true;
  auto row = [&](const std::string& name, bool pass, double value) {
    ok = ok && pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << std::left
              << std::setw(28) << name << std::setprecision(3)
              << std::scientific << value << std::defaultfloat << "\n";
  };

  const PartitionReport report =
      verify_partition(setup->grid, setup->partition, 1e-14);
  row("partition sum-to-one", report.max_sum_deviation <= 1e-14,
      report.max_sum_deviation);
  row("partition bounds", report.bounds_violations == 0,
      report.bounds_violations);
  row("partition supports", report.support_violations == 0,
      report.support_violations);
  row("partition adjacency", report.adjacency_violations == 0,
      report.adjacency_violations);

  const double defect = splitting_defect(setup->split, 10, config.seed);
  const double defect_tol = setup->partition.q == 1 ? 0.0 : 1e-13;
  row("splitting defect", defect <= defect_tol, defect);

  // resolvent residual on a random right-hand side per part
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double tau = config.sweep.T / config.sweep.m0 * setup->partition.q;
  double worst_residual = 0.0;
  for (const auto& part : setup->split.parts) {
    ResolventFactor factor(part, tau, setup->M, config.solver);
    Eigen::VectorXd rhs(part.size());
    for (int i = 0; i < part.size(); ++i) rhs[i] = dist(rng);
    const Eigen::VectorXd w = factor.solve(rhs);
    const double res = (w - tau * part.apply(w) - rhs).lpNorm<Eigen::Infinity>() /
                       rhs.lpNorm<Eigen::Infinity>();
    worst_residual = std::max(worst_residual, res);
  }
  row("resolvent residual", worst_residual <= 1e-10, worst_residual);

  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_orders(const std::string& config_path, const std::string& schemes_arg,
               std::string out_path) {
  if (schemes_arg.empty())
    throw ValidationError("orders: --schemes list must not be empty");
  std::vector<SchemeKind> kinds;
  std::stringstream ss(schemes_arg);
  std::string token;
  while (std::getline(ss, token, ','))
    if (!token.empty()) kinds.push_back(parse_scheme_kind(token));
  if (kinds.empty())
    throw ValidationError("orders: --schemes list must not be empty");

  ExperimentConfig config = parse_config(config_path);
  const auto setup = build_setup(config);

  // references shared across schemes, one per family
  bool have_linear = false, have_semilinear = false;
  ReferenceSolution linear_ref, semilinear_ref;

  std::vector<ExperimentResult> results;
  for (SchemeKind kind : kinds) {
    config.scheme = kind;
    validate_config(config);
    const bool semilinear = kind == SchemeKind::SemilinearImplicitF ||
                            kind == SchemeKind::SemilinearExplicitF;
    if (semilinear && !have_semilinear) {
      semilinear_ref = build_reference(*setup, config, true);
      have_semilinear = true;
    }
    if (!semilinear && !have_linear) {
      linear_ref = build_reference(*setup, config, false);
      have_linear = true;
    }
    results.push_back(run_sweep(*setup, config, kind,
                                semilinear ? semilinear_ref : linear_ref));
    std::cout << "observed order (" << results.back().scheme
              << "): " << std::setprecision(4)
              << results.back().observed_order << "\n";
  }

  if (out_path.empty()) out_path = config.out_csv;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    write_csv(std::span<const ExperimentResult>(results), out);
  } else {
    write_csv(std::span<const ExperimentResult>(results), std::cout);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"domain-decomposition operator splitting experiments"};
  app.require_subcommand(1);

  std::string config_path, out_path, schemes_arg;
  bool dry_run = false;

  auto* run = app.add_subcommand("run", "run one experiment, write CSV");
  run->add_option("--config", config_path, "config file (JSON)")->required();
  run->add_option("--out", out_path, "output CSV path");
  run->add_flag("--dry-run", dry_run, "validate and print the plan only");

  auto* verify =
      app.add_subcommand("verify", "partition / splitting / solver checks");
  verify->add_option("--config", config_path, "config file (JSON)")->required();

  auto* orders =
      app.add_subcommand("orders", "order studies for several schemes");
  orders->add_option("--config", config_path, "config file (JSON)")->required();
  orders->add_option("--schemes", schemes_arg, "comma-separated scheme kinds")
      ->required();
  orders->add_option("--out", out_path, "combined CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_path, dry_run);
    if (verify->parsed()) return cmd_verify(config_path);
    return cmd_orders(config_path, schemes_arg, out_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const StepRestrictionViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRestriction;
  } catch (const Diverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const SingularSystem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
