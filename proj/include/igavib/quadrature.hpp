#pragma once

#include <Eigen/Dense>

namespace igavib {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    Eigen::VectorXd points;
    Eigen::VectorXd weights;
    int size() const { return static_cast<int>(points.size()); }
};

const GaussRule& gauss_legendre(int n);

}  // namespace igavib
