#pragma once

#include "phgcl/graph.hpp"

#include <cstdint>

namespace phgcl {

// Two-class synthetic graph collection. Each graph is a 2-block stochastic
// block model: class 0 uses intra-block edge probability 0.3 + class_gap,
// class 1 uses 0.3 - class_gap, and both share an inter-block probability
// of 0.1. Node features are a one-hot block id plus N(0, 0.1^2) noise, with
// a class-dependent mean shift of +/- class_gap on the first feature.
// Labels alternate 0,1,0,1,... so an even n_graphs gives balanced classes.
//
// Throws std::invalid_argument if class_gap pushes an edge probability out
// of [0,1], if n_graphs is odd or non-positive, if n_nodes < 1, or if
// d_f < 2 (the one-hot block id alone needs two columns).
Dataset generate_synthetic(int n_graphs, int n_nodes, int d_f, double class_gap,
                           std::uint64_t seed);

}  // namespace phgcl
