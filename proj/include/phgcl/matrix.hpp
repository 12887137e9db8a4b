#pragma once

#include <cstddef>
#include <vector>

namespace phgcl {

/// Dense row-major matrix of doubles. Small value type shared by graph
/// features and correlation inputs; the autodiff engine has its own Tensor.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

}  // namespace phgcl
