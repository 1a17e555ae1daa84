#include "ddsplit/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace ddsplit {
namespace {

using nlohmann::json;

std::string normalized(std::string s) {
  std::string out;
  for (char c : s)
    if (c != '-' && c != '_')
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback,
         const std::string& section) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config key '" + section + "." + key +
                          "' has the wrong type");
  }
}

template <std::size_t N, typename T>
std::array<T, N> get_array(const json& j, const std::string& key,
                           std::array<T, N> fallback,
                           const std::string& section) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() > N)
    throw ValidationError("config key '" + section + "." + key +
                          "' must be an array of at most " +
                          std::to_string(N) + " numbers");
  std::array<T, N> out = fallback;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get<T>();
  return out;
}

}  // namespace

SchemeKind parse_scheme_kind(const std::string& name) {
  const std::string n = normalized(name);
  if (n == "additive") return SchemeKind::Additive;
  if (n == "douglasrachford" || n == "dr") return SchemeKind::DouglasRachford;
  if (n == "peacemanrachford" || n == "pr") return SchemeKind::PeacemanRachford;
  if (n == "fscn" || n == "fractionalstepcn") return SchemeKind::FractionalStepCN;
  if (n == "semilinearimplicit" || n == "semilinearimplicitf")
    return SchemeKind::SemilinearImplicitF;
  if (n == "semilinearexplicit" || n == "semilinearexplicitf")
    return SchemeKind::SemilinearExplicitF;
  throw ValidationError("scheme.kind: unknown scheme '" + name + "'");
}

ExperimentConfig parse_config_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }

  ExperimentConfig c;

  if (j.contains("problem")) {
    const auto& p = j.at("problem");
    c.problem.dim = get_or<int>(p, "dim", c.problem.dim, "problem");
    c.problem.extent =
        get_array<2>(p, "extent", c.problem.extent, "problem");
    c.problem.n = get_array<2>(p, "n", c.problem.n, "problem");
    const std::string bc =
        normalized(get_or<std::string>(p, "bc", "dirichlet", "problem"));
    if (bc == "dirichlet")
      c.problem.bc = BcKind::Dirichlet;
    else if (bc == "neumann")
      c.problem.bc = BcKind::Neumann;
    else
      throw ValidationError("problem.bc must be 'dirichlet' or 'neumann'");

    if (p.contains("coefficients")) {
      const auto& co = p.at("coefficients");
      c.problem.coeff_preset =
          get_or<std::string>(co, "preset", c.problem.coeff_preset,
                              "problem.coefficients");
      c.problem.lambda =
          get_or<double>(co, "lambda", c.problem.lambda, "problem.coefficients");
      c.problem.rho = get_array<2>(co, "rho", c.problem.rho,
                                   "problem.coefficients");
      c.problem.sigma =
          get_or<double>(co, "sigma", c.problem.sigma, "problem.coefficients");
      c.problem.amplitude = get_or<double>(co, "amplitude",
                                           c.problem.amplitude,
                                           "problem.coefficients");
    }
    if (p.contains("initial")) {
      const auto& in = p.at("initial");
      c.problem.initial_preset = get_or<std::string>(
          in, "preset", c.problem.initial_preset, "problem.initial");
      c.problem.initial_amplitude = get_or<double>(
          in, "amplitude", c.problem.initial_amplitude, "problem.initial");
      c.problem.indicator_lo = get_array<2>(in, "lo", c.problem.indicator_lo,
                                            "problem.initial");
      c.problem.indicator_hi = get_array<2>(in, "hi", c.problem.indicator_hi,
                                            "problem.initial");
    }
  }

  if (j.contains("cover")) {
    const auto& cv = j.at("cover");
    const std::string kind =
        normalized(get_or<std::string>(cv, "kind", "stripes", "cover"));
    if (kind == "stripes")
      c.cover.kind = CoverKind::Stripes;
    else if (kind == "blocks")
      c.cover.kind = CoverKind::Blocks;
    else if (kind == "identity")
      c.cover.kind = CoverKind::Identity;
    else
      throw ValidationError("cover.kind must be stripes, blocks or identity");
    c.cover.counts = get_array<2>(cv, "counts", c.cover.counts, "cover");
    c.cover.delta = get_or<double>(cv, "delta", c.cover.delta, "cover");
    const std::string ramp =
        normalized(get_or<std::string>(cv, "ramp", "linear", "cover"));
    if (ramp == "linear")
      c.cover.ramp = RampKind::Linear;
    else if (ramp == "cubicsmoothstep" || ramp == "cubic")
      c.cover.ramp = RampKind::CubicSmoothstep;
    else
      throw ValidationError("cover.ramp must be linear or cubic-smoothstep");
  }

  if (j.contains("scheme")) {
    const auto& s = j.at("scheme");
    c.scheme = parse_scheme_kind(
        get_or<std::string>(s, "kind", "additive", "scheme"));
    c.strict_restriction =
        get_or<bool>(s, "strict", c.strict_restriction, "scheme");
    c.sweep.T = get_or<double>(s, "T", c.sweep.T, "scheme");
    c.sweep.m0 = get_or<int>(s, "m0", c.sweep.m0, "scheme");
    c.sweep.levels = get_or<int>(s, "levels", c.sweep.levels, "scheme");
    if (s.contains("part_order"))
      c.part_order = s.at("part_order").get<std::vector<int>>();
  }

  if (j.contains("nonlinearity")) {
    const auto& nl = j.at("nonlinearity");
    c.nonlinearity.kind = normalized(
        get_or<std::string>(nl, "kind", c.nonlinearity.kind, "nonlinearity"));
    c.nonlinearity.p = get_or<int>(nl, "p", c.nonlinearity.p, "nonlinearity");
  }

  if (j.contains("solver")) {
    const auto& so = j.at("solver");
    const std::string backend =
        normalized(get_or<std::string>(so, "backend", "direct", "solver"));
    if (backend == "direct")
      c.solver.backend = SolverOptions::Backend::Direct;
    else if (backend == "iterative")
      c.solver.backend = SolverOptions::Backend::Iterative;
    else
      throw ValidationError("solver.backend must be direct or iterative");
    c.solver.tol = get_or<double>(so, "tol", c.solver.tol, "solver");
    c.solver.max_iter =
        get_or<int>(so, "max_iter", c.solver.max_iter, "solver");
  }

  if (j.contains("output"))
    c.out_csv = get_or<std::string>(j.at("output"), "csv", "", "output");
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed, "");

  validate_config(c);
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config file not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_string(buf.str());
}

void validate_config(const ExperimentConfig& c) {
  if (c.problem.dim != 1 && c.problem.dim != 2)
    throw ValidationError("problem.dim must be 1 or 2");
  for (int d = 0; d < c.problem.dim; ++d) {
    if (c.problem.extent[d] <= 0.0)
      throw ValidationError("problem.extent entries must be positive");
    if (c.problem.n[d] < 3)
      throw ValidationError("problem.n entries must be >= 3");
  }
  const std::string cp = normalized(c.problem.coeff_preset);
  if (cp != "constant" && cp != "smoothtrig" && cp != "advectionx")
    throw ValidationError(
        "problem.coefficients.preset must be constant, smooth-trig or "
        "advection-x");
  if (cp == "smoothtrig" && std::abs(c.problem.amplitude) >= c.problem.lambda)
    throw ValidationError(
        "problem.coefficients.amplitude must be smaller than lambda "
        "(ellipticity)");
  const std::string ip = normalized(c.problem.initial_preset);
  if (ip != "sineproduct" && ip != "cosineproduct" && ip != "indicator")
    throw ValidationError(
        "problem.initial.preset must be sine-product, cosine-product or "
        "indicator");

  if (c.cover.kind != CoverKind::Identity && c.cover.delta <= 0.0)
    throw ValidationError("cover.delta must be positive");
  if (c.cover.kind == CoverKind::Blocks && c.problem.dim != 2)
    throw ValidationError("cover.kind = blocks requires problem.dim = 2");

  int q = 1;
  if (c.cover.kind == CoverKind::Stripes) q = 2;
  if (c.cover.kind == CoverKind::Blocks) q = 4;
  const bool adi = c.scheme == SchemeKind::DouglasRachford ||
                   c.scheme == SchemeKind::PeacemanRachford;
  if (adi && q != 2)
    throw ValidationError(
        "scheme.kind: Douglas-Rachford/Peaceman-Rachford require a q=2 cover "
        "(cover.kind = stripes)");
  if (!c.part_order.empty()) {
    if (static_cast<int>(c.part_order.size()) != q)
      throw ValidationError("scheme.part_order must list each part exactly once");
    std::vector<int> sorted = c.part_order;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < q; ++k)
      if (sorted[k] != k)
        throw ValidationError(
            "scheme.part_order must be a permutation of 0..q-1");
  }

  if (c.sweep.T <= 0.0) throw ValidationError("scheme.T must be positive");
  if (c.sweep.m0 < 1) throw ValidationError("scheme.m0 must be >= 1");
  if (c.sweep.levels < 1) throw ValidationError("scheme.levels must be >= 1");

  const bool semilinear = c.scheme == SchemeKind::SemilinearImplicitF ||
                          c.scheme == SchemeKind::SemilinearExplicitF;
  if (c.nonlinearity.kind != "none" && c.nonlinearity.kind != "potential")
    throw ValidationError("nonlinearity.kind must be none or potential");
  if (semilinear && c.nonlinearity.kind != "potential")
    throw ValidationError(
        "scheme.kind: semilinear schemes need nonlinearity.kind = potential");
  if (c.nonlinearity.kind == "potential" &&
      (c.nonlinearity.p < 3 || c.nonlinearity.p % 2 == 0))
    throw ValidationError("nonlinearity.p must be an odd integer >= 3");

  if (c.solver.tol <= 0.0) throw ValidationError("solver.tol must be positive");
  if (c.solver.max_iter < 1)
    throw ValidationError("solver.max_iter must be >= 1");
}

Grid make_grid(const ProblemConfig& p) {
  return build_grid(p.dim, std::span<const double>(p.extent.data(), 2),
                    std::span<const int>(p.n.data(), 2), p.bc);
}

CoefficientSpec make_coefficient_spec(const ProblemConfig& p) {
  const std::string preset = normalized(p.coeff_preset);
  CoefficientSpec spec;
  const double lambda = p.lambda;
  const double sigma = p.sigma;
  const std::array<double, 2> rho = p.rho;

  if (preset == "constant" || preset == "advectionx") {
    spec.lambda = [lambda](double, double) { return lambda; };
  } else {  // smooth-trig
    const double amp = p.amplitude;
    const double Lx = p.extent[0];
    const double Ly = p.dim == 2 ? p.extent[1] : 1.0;
    const int dim = p.dim;
    spec.lambda = [=](double x, double y) {
      double v = std::sin(2.0 * std::numbers::pi * x / Lx);
      if (dim == 2) v *= std::cos(2.0 * std::numbers::pi * y / Ly);
      return lambda + amp * v;
    };
  }

  if (preset == "advectionx") {
    spec.rho[0] = [rho](double, double) { return rho[0]; };
    spec.sigma = [](double, double) { return 0.0; };
  } else {
    spec.rho[0] = [rho](double, double) { return rho[0]; };
    spec.rho[1] = [rho](double, double) { return rho[1]; };
    spec.sigma = [sigma](double, double) { return sigma; };
  }
  return spec;
}

std::function<double(double, double)> make_initial(const ProblemConfig& p) {
  const std::string preset = normalized(p.initial_preset);
  const double amp = p.initial_amplitude;
  const double Lx = p.extent[0];
  const double Ly = p.dim == 2 ? p.extent[1] : 1.0;
  const int dim = p.dim;
  if (preset == "sineproduct") {
    return [=](double x, double y) {
      double v = amp * std::sin(std::numbers::pi * x / Lx);
      if (dim == 2) v *= std::sin(std::numbers::pi * y / Ly);
      return v;
    };
  }
  if (preset == "cosineproduct") {
    return [=](double x, double y) {
      double v = amp * std::cos(std::numbers::pi * x / Lx);
      if (dim == 2) v *= std::cos(std::numbers::pi * y / Ly);
      return v;
    };
  }
  const auto lo = p.indicator_lo;
  const auto hi = p.indicator_hi;
  return [=](double x, double y) {
    bool inside = x >= lo[0] * Lx && x <= hi[0] * Lx;
    if (dim == 2) inside = inside && y >= lo[1] * Ly && y <= hi[1] * Ly;
    return inside ? amp : 0.0;
  };
}

}  // namespace ddsplit
