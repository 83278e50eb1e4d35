#include "mplex/centrality.hpp"

namespace mplex {

namespace {
// Relative spectral shift. Large enough that the +/- eigenvalue pair of a
// bipartite component separates within a few hundred iterations at 1e-10.
constexpr double kShiftScale = 0.05;
} // namespace

CentralityVector eigenvector_centrality(const Layer& layer, double tol, int max_iter) {
    if (!(tol > 0.0))
        throw std::invalid_argument("centrality tol must be positive");
    if (max_iter < 1)
        throw std::invalid_argument("centrality max_iter must be >= 1");

    const int n = layer.n();
    CentralityVector out;
    out.layer_id = layer.layer_id;
    out.values = Vec::Zero(n);

    const Mat& a = layer.adjacency;
    const double max_row_sum = layer.directed ? a.colwise().sum().maxCoeff()
                                              : a.rowwise().sum().maxCoeff();
    if (n == 0 || max_row_sum <= 0.0) {
        out.degenerate = true;
        out.converged = true;
        return out;
    }

    const double eps = kShiftScale * max_row_sum;
    Vec x = Vec::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Vec y(n);
    for (int it = 1; it <= max_iter; ++it) {
        if (layer.directed)
            y.noalias() = a.transpose() * x;
        else
            y.noalias() = a * x;
        y += eps * x;
        y /= y.norm();
        out.iterations = it;
        if ((y - x).norm() < tol) {
            out.converged = true;
            x = y;
            break;
        }
        x = y;
    }
    out.values = x;
    return out;
}

} // namespace mplex
