#include "phgcl/tensor.hpp"

#include "phgcl/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phgcl {

namespace {
std::string shape_of(const Matrix& m) {
    return "[" + std::to_string(m.rows) + "x" + std::to_string(m.cols) + "]";
}
}  // namespace

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: inner dimensions differ: " + shape_of(a) + " * " +
                                    shape_of(b));
    }
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            const double* brow = &b.data[static_cast<std::size_t>(k) * b.cols];
            double* orow = &out.data[static_cast<std::size_t>(i) * out.cols];
            for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix mat_transpose(const Matrix& a) {
    Matrix out(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) out.at(j, i) = a.at(i, j);
    }
    return out;
}

Matrix xavier_init(int rows, int cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("xavier_init: shape must be positive");
    }
    const double bound = std::sqrt(6.0 / (rows + cols));
    RngStream rng(seed);
    Matrix out(rows, cols);
    for (double& x : out.data) x = rng.uniform(-bound, bound);
    return out;
}

}  // namespace phgcl
