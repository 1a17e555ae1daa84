#include "ddsplit/nonlinear.hpp"

#include <algorithm>
#include <cmath>

namespace ddsplit {

namespace {

double int_pow(double v, int p) {
  double r = 1.0;
  double base = v;
  int e = p;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace

double Potential::lipschitz_on(double r) const {
  // F'(v) = 1 - p v^(p-1); extremes on [-r, r] at v = 0 and |v| = r
  return std::max(1.0, std::abs(1.0 - p * int_pow(r, p - 1)));
}

double eval_F_scalar(double v, const Potential& pot) {
  return v - int_pow(v, pot.p);
}

Eigen::VectorXd eval_F(const Eigen::VectorXd& v, const Potential& pot) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = eval_F_scalar(v[i], pot);
  return out;
}

double resolve_F_scalar(double v, double h, const Potential& pot) {
  if (h == 0.0) return v;
  if (h * pot.M_F > 0.5)
    throw InvalidArgument("resolve_F: h * M[F] must be <= 1/2");
  const int p = pot.p;
  const double tol = 1e-13 * std::max(1.0, std::abs(v));
  // g is strictly increasing, so [-|v|-1, |v|+1] brackets the root
  double lo = std::min(v, -std::abs(v) - 1.0);
  double hi = std::max(v, std::abs(v) + 1.0);
  auto g = [&](double w) { return (1.0 - h) * w + h * int_pow(w, p) - v; };
  double w = v;
  for (int iter = 0; iter < 50; ++iter) {
    const double gw = g(w);
    if (std::abs(gw) <= tol) return w;
    if (gw > 0.0)
      hi = w;
    else
      lo = w;
    const double dg = (1.0 - h) + h * p * int_pow(w, p - 1);
    double next = w - gw / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
    w = next;
  }
  if (std::abs(g(w)) <= tol) return w;
  throw NewtonFailed("resolve_F: scalar Newton did not converge");
}

Eigen::VectorXd resolve_F(const Eigen::VectorXd& v, double h,
                          const Potential& pot) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = resolve_F_scalar(v[i], h, pot);
  return out;
}

}  // namespace ddsplit
