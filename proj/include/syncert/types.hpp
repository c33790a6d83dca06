#pragma once

#include <Eigen/Dense>

namespace syncert {

using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

}  // namespace syncert
