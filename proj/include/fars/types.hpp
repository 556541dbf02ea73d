#pragma once

#include <Eigen/Dense>

namespace fars {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

} // namespace fars
