#pragma once

#include <Eigen/Dense>

#include "ddsplit/errors.hpp"

namespace ddsplit {

/// The cubic-type reaction potential F v = v - v^p for odd p >= 3.
/// Its dissipativity shift is 1 independent of p; the Lipschitz constant is
/// finite only on bounded ranges.
struct Potential {
  int p = 3;
  double M_F = 1.0;

  Potential() = default;
  explicit Potential(int p_) : p(p_) {
    if (p < 3 || p % 2 == 0)
      throw InvalidArgument("Potential: p must be an odd integer >= 3");
  }

  /// Lipschitz constant of F on [-r, r]: max |1 - p v^(p-1)| over the range.
  double lipschitz_on(double r) const;
};

/// Pointwise F v = v - v^p.
Eigen::VectorXd eval_F(const Eigen::VectorXd& v, const Potential& pot);
double eval_F_scalar(double v, const Potential& pot);

/// Pointwise resolvent: the w with w - h*F(w) = v, i.e.
/// (1-h) w + h w^p = v. Unique for h <= 1/2 since the left side is strictly
/// increasing; solved by safeguarded Newton.
Eigen::VectorXd resolve_F(const Eigen::VectorXd& v, double h,
                          const Potential& pot);
double resolve_F_scalar(double v, double h, const Potential& pot);

}  // namespace ddsplit
