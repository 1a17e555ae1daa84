#include "ddsplit/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <sstream>

namespace ddsplit {

const char* scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Additive: return "additive";
    case SchemeKind::DouglasRachford: return "douglas-rachford";
    case SchemeKind::PeacemanRachford: return "peaceman-rachford";
    case SchemeKind::FractionalStepCN: return "fscn";
    case SchemeKind::SemilinearImplicitF: return "semilinear-implicit";
    case SchemeKind::SemilinearExplicitF: return "semilinear-explicit";
  }
  return "?";
}

int thread_budget() {
  static const int budget = [] {
    const char* env = std::getenv("DDSPLIT_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
  }();
  return budget;
}

std::optional<std::string> check_restriction(SchemeKind kind, double h,
                                             std::span<const double> M_parts,
                                             double M_F) {
  const int q = static_cast<int>(M_parts.size());
  double M = 0.0;
  for (double m : M_parts) M = std::max(M, m);

  auto violation = [&](double value, double limit,
                       const std::string& expr) -> std::optional<std::string> {
    if (value <= limit) return std::nullopt;
    std::ostringstream msg;
    msg << "step restriction violated: " << expr << " = " << value << " > "
        << limit;
    return msg.str();
  };

  switch (kind) {
    case SchemeKind::Additive:
      return violation(h * q * M, 0.5, "h*q*M");
    case SchemeKind::DouglasRachford:
    case SchemeKind::PeacemanRachford:
      return violation(h * M, 0.5, "h*max(M[A1],M[A2])");
    case SchemeKind::FractionalStepCN:
      return violation(h * M, 1.0, "h*M");
    case SchemeKind::SemilinearImplicitF: {
      if (auto v = violation(h * q * M, 0.5, "h*q*M")) return v;
      return violation(h * M_F, 0.5, "h*M[F]");
    }
    case SchemeKind::SemilinearExplicitF:
      return violation(h * q * M, 0.5, "h*q*M");
  }
  return std::nullopt;
}

namespace {

// (1/q) sum of the per-part resolvent solves; solves run in parallel when
// DDSPLIT_THREADS allows, combined in a fixed order.
Eigen::VectorXd additive_substep(const Eigen::VectorXd& u,
                                 std::span<const FactorPtr> factors) {
  const int q = static_cast<int>(factors.size());
  std::vector<Eigen::VectorXd> parts(q);
  if (thread_budget() > 1 && q > 1) {
    std::vector<std::future<Eigen::VectorXd>> futures;
    futures.reserve(q);
    for (int k = 0; k < q; ++k)
      futures.push_back(std::async(std::launch::async,
                                   [&, k] { return factors[k]->solve(u); }));
    for (int k = 0; k < q; ++k) parts[k] = futures[k].get();
  } else {
    for (int k = 0; k < q; ++k) parts[k] = factors[k]->solve(u);
  }
  Eigen::VectorXd out = parts[0];
  for (int k = 1; k < q; ++k) out += parts[k];
  return out / static_cast<double>(q);
}

}  // namespace

State step_additive(const State& state, double h,
                    std::span<const FactorPtr> factors) {
  return {additive_substep(state.u, factors), state.t + h};
}

State step_douglas_rachford(const State& state, double h,
                            const SparseOperator& A1, const SparseOperator& A2,
                            const ResolventFactor& f1,
                            const ResolventFactor& f2) {
  // (I + h^2 A1 A2) u as two sparse products; the product matrix is never
  // formed
  Eigen::VectorXd w = state.u + h * h * A1.apply(A2.apply(state.u));
  w = f1.solve(w);
  return {f2.solve(w), state.t + h};
}

State step_peaceman_rachford(const State& state, double h,
                             const SparseOperator& A1,
                             const SparseOperator& A2,
                             const ResolventFactor& f1,
                             const ResolventFactor& f2) {
  const double half = 0.5 * h;
  Eigen::VectorXd v = state.u + half * A2.apply(state.u);
  v = f1.solve(v);
  v += half * A1.apply(v);
  return {f2.solve(v), state.t + h};
}

State step_fscn(const State& state, double h,
                std::span<const SparseOperator* const> parts,
                std::span<const FactorPtr> factors) {
  const int q = static_cast<int>(parts.size());
  const double half = 0.5 * h;
  auto sweep = [&](bool forward) {
    Eigen::VectorXd v = state.u;
    for (int s = 0; s < q; ++s) {
      const int k = forward ? s : q - 1 - s;
      v += half * parts[k]->apply(v);
      v = factors[k]->solve(v);
    }
    return v;
  };
  Eigen::VectorXd fwd, bwd;
  if (thread_budget() > 1) {
    auto future = std::async(std::launch::async, sweep, true);
    bwd = sweep(false);
    fwd = future.get();
  } else {
    fwd = sweep(true);
    bwd = sweep(false);
  }
  return {0.5 * (fwd + bwd), state.t + h};
}

State step_semilinear_implicitF(const State& state, double h,
                                std::span<const FactorPtr> factors,
                                const Potential& pot) {
  Eigen::VectorXd v = additive_substep(state.u, factors);
  return {resolve_F(v, h, pot), state.t + h};
}

State step_semilinear_explicitF(const State& state, double h,
                                std::span<const FactorPtr> factors,
                                const Potential& pot) {
  Eigen::VectorXd v = state.u + h * eval_F(state.u, pot);
  return {additive_substep(v, factors), state.t + h};
}

TrajectorySummary integrate(const SchemeConfig& config,
                            const SplitOperator& split, const Potential* pot,
                            const Eigen::VectorXd& eta,
                            std::span<const double> M_parts, double M_F,
                            const IntegrateOptions& opts) {
  const int q = split.q();
  const double h = config.h;

  std::vector<int> order(q);
  if (opts.part_order.empty()) {
    for (int k = 0; k < q; ++k) order[k] = k;
  } else {
    if (static_cast<int>(opts.part_order.size()) != q)
      throw InvalidArgument("integrate: part_order length must equal q");
    order = opts.part_order;
  }

  const bool adi = config.kind == SchemeKind::DouglasRachford ||
                   config.kind == SchemeKind::PeacemanRachford;
  if (adi && q != 2)
    throw InvalidArgument(
        "integrate: Douglas-Rachford/Peaceman-Rachford require q = 2");
  const bool semilinear = config.kind == SchemeKind::SemilinearImplicitF ||
                          config.kind == SchemeKind::SemilinearExplicitF;
  if (semilinear && !pot)
    throw InvalidArgument("integrate: semilinear scheme needs a potential");

  TrajectorySummary summary;
  if (auto viol = check_restriction(config.kind, h, M_parts, M_F)) {
    if (config.strict_restriction) throw StepRestrictionViolated(*viol);
    summary.restriction_warning = viol;
  }

  double M = 0.0;
  for (double m : M_parts) M = std::max(M, m);
  double tau = h * q;
  if (config.kind == SchemeKind::DouglasRachford) tau = h;
  if (config.kind == SchemeKind::PeacemanRachford ||
      config.kind == SchemeKind::FractionalStepCN)
    tau = 0.5 * h;

  FactorCache cache;
  std::vector<FactorPtr> factors;
  std::vector<const SparseOperator*> parts;
  for (int k = 0; k < q; ++k) {
    parts.push_back(&split.parts[order[k]]);
    factors.push_back(cache.get(split.parts[order[k]], tau, M, opts.solver));
  }

  State state{eta, 0.0};
  summary.step_norms.reserve(config.m);
  for (int step = 0; step < config.m; ++step) {
    switch (config.kind) {
      case SchemeKind::Additive:
        state = step_additive(state, h, factors);
        break;
      case SchemeKind::DouglasRachford:
        state = step_douglas_rachford(state, h, *parts[0], *parts[1],
                                      *factors[0], *factors[1]);
        break;
      case SchemeKind::PeacemanRachford:
        state = step_peaceman_rachford(state, h, *parts[0], *parts[1],
                                       *factors[0], *factors[1]);
        break;
      case SchemeKind::FractionalStepCN:
        state = step_fscn(state, h, parts, factors);
        break;
      case SchemeKind::SemilinearImplicitF:
        state = step_semilinear_implicitF(state, h, factors, *pot);
        break;
      case SchemeKind::SemilinearExplicitF:
        state = step_semilinear_explicitF(state, h, factors, *pot);
        break;
    }
    if (!state.u.allFinite())
      throw Diverged("integrate: non-finite state at step " +
                     std::to_string(step + 1));
    const double norm = state.u.norm();
    summary.step_norms.push_back(norm);
    summary.max_norm = std::max(summary.max_norm, norm);
  }
  summary.final_state = std::move(state);
  return summary;
}

}  // namespace ddsplit
