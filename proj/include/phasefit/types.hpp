#pragma once

#include <Eigen/Dense>

namespace phasefit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

}  // namespace phasefit
