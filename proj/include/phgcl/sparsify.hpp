#pragma once

#include "phgcl/graph.hpp"

namespace phgcl {

// Binarizes a symmetric correlation matrix into an unlabeled unit-weight
// graph by keeping the ceil(rho * n(n-1)/2) off-diagonal pairs with the
// largest |corr|. Ties break deterministically by (|corr| desc, u asc,
// v asc). The diagonal is ignored. Rows of the correlation matrix become
// the node features of the result.
//
// Throws std::invalid_argument when corr is not square/symmetric or rho
// is outside (0, 1].
Graph sparsify(const Matrix& corr, double rho);

}  // namespace phgcl
