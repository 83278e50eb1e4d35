#pragma once

#include "mplex/graph.hpp"

namespace mplex {

/// Dominant-eigenvector node weights of one layer, normalized to unit L2.
/// All entries are non-negative (Perron-Frobenius). An edgeless layer yields
/// the all-zero vector with the degenerate flag set.
struct CentralityVector {
    std::string layer_id;
    Vec values;
    bool degenerate = false;
    int iterations = 0;
    bool converged = false;
};

inline constexpr double kCentralityTol = 1e-10;
inline constexpr int kCentralityMaxIter = 10000;

/// Power iteration from the uniform positive vector until the L2 difference
/// of successive normalized iterates drops below tol. Undirected layers
/// iterate on A, directed ones on A^T (prestige flows along in-edges).
/// Iteration runs on A + eps*I with eps proportional to the max row sum;
/// the shift leaves eigenvectors untouched but makes the Perron eigenvalue
/// strictly dominant on bipartite components.
CentralityVector eigenvector_centrality(const Layer& layer,
                                        double tol = kCentralityTol,
                                        int max_iter = kCentralityMaxIter);

} // namespace mplex
