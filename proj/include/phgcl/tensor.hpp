#pragma once

#include "phgcl/matrix.hpp"

#include <cstdint>

namespace phgcl {

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_transpose(const Matrix& a);

// Uniform on +/- sqrt(6 / (fan_in + fan_out)), fan_in = rows, fan_out = cols.
Matrix xavier_init(int rows, int cols, std::uint64_t seed);

}  // namespace phgcl
