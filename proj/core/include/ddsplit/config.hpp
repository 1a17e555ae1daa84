#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ddsplit/grid.hpp"
#include "ddsplit/partition.hpp"
#include "ddsplit/schemes.hpp"

namespace ddsplit {

struct ProblemConfig {
  int dim = 1;
  std::array<double, 2> extent{1.0, 1.0};
  std::array<int, 2> n{63, 63};
  BcKind bc = BcKind::Dirichlet;

  // coefficient preset: constant | smooth-trig | advection-x
  std::string coeff_preset = "constant";
  double lambda = 1.0;
  std::array<double, 2> rho{0.0, 0.0};
  double sigma = 0.0;
  double amplitude = 0.5;  // smooth-trig modulation

  // initial data preset: sine-product | cosine-product | indicator
  std::string initial_preset = "sine-product";
  double initial_amplitude = 1.0;
  std::array<double, 2> indicator_lo{0.25, 0.25};
  std::array<double, 2> indicator_hi{0.75, 0.75};
};

struct SweepConfig {
  double T = 0.25;
  int m0 = 8;      // coarsest step count
  int levels = 5;  // successive halvings of h
};

struct NonlinearityConfig {
  std::string kind = "none";  // none | potential
  int p = 3;
};

struct ExperimentConfig {
  ProblemConfig problem;
  CoverSpec cover;
  SchemeKind scheme = SchemeKind::Additive;
  bool strict_restriction = true;
  std::vector<int> part_order;
  SweepConfig sweep;
  NonlinearityConfig nonlinearity;
  SolverOptions solver;
  std::string out_csv;
  std::uint64_t seed = 1;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_string(const std::string& text);

SchemeKind parse_scheme_kind(const std::string& name);

Grid make_grid(const ProblemConfig& problem);
CoefficientSpec make_coefficient_spec(const ProblemConfig& problem);
std::function<double(double, double)> make_initial(const ProblemConfig& problem);

/// Cross-field validation shared by file parsing and programmatic configs;
/// throws ValidationError naming the offending key.
void validate_config(const ExperimentConfig& config);

}  // namespace ddsplit
