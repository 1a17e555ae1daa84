#pragma once

#include <Eigen/Dense>

namespace ddsplit {

/// Dense matrix exponential by scaling and squaring with Pade approximants
/// of order up to (13,13), following Higham's degree-selection thresholds.
Eigen::MatrixXd expm(const Eigen::MatrixXd& A);

}  // namespace ddsplit
