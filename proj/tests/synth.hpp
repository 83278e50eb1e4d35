#pragma once

// Seeded graph generators for tests and the acceptance experiments.

#include "mplex/graph.hpp"
#include "mplex/rng.hpp"

#include <queue>
#include <string>
#include <vector>

namespace synth {

using mplex::Layer;
using mplex::Mat;
using mplex::MultilayerNetwork;
using mplex::Rng;

inline std::string node_name(int i) {
    return "n" + std::to_string(i);
}

inline void register_nodes(MultilayerNetwork& net, int n) {
    for (int i = 0; i < n; ++i)
        net.nodes.add(node_name(i));
}

inline Layer layer_from_matrix(std::string id, Mat a, bool directed = false) {
    return Layer{std::move(id), directed, std::move(a)};
}

inline bool connected(const Mat& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0)
        return true;
    std::vector<char> seen(n, 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop();
        for (int v = 0; v < n; ++v) {
            if (!seen[v] && (a(u, v) > 0.0 || a(v, u) > 0.0)) {
                seen[v] = 1;
                ++reached;
                queue.push(v);
            }
        }
    }
    return reached == n;
}

// Undirected G(n, p), resampled until connected.
inline Mat random_connected_adjacency(int n, double p, Rng& rng) {
    for (;;) {
        Mat a = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.next_open01() < p)
                    a(i, j) = a(j, i) = 1.0;
        if (connected(a))
            return a;
    }
}

// Undirected Bernoulli draw from a symmetric probability matrix.
inline Mat bernoulli_adjacency(const Mat& prob, Rng& rng) {
    const int n = static_cast<int>(prob.rows());
    Mat a = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.next_open01() < prob(i, j))
                a(i, j) = a(j, i) = 1.0;
    return a;
}

// Symmetric edge-probability matrix from non-negative latent factors with
// heavy-tailed entries: prob = min(cap, scale * X X^T), zero diagonal.
inline Mat factor_probabilities(int n, int k_gen, double scale, double cap, Rng& rng) {
    Mat x(n, k_gen);
    for (int i = 0; i < n; ++i)
        for (int z = 0; z < k_gen; ++z) {
            const double u = rng.next_open01();
            x(i, z) = u < 0.15 ? -std::log(rng.next_open01()) : 0.08 * rng.next_open01();
        }
    Mat prob = scale * (x * x.transpose());
    prob = prob.cwiseMin(cap);
    prob.diagonal().setZero();
    return prob;
}

// Multiplex for the MAP-vs-MLE experiments: a target layer, `family` layers
// drawn from the target's probability matrix, and `independent` layers drawn
// from unrelated factor models. 100 nodes by default.
inline MultilayerNetwork family_multiplex(std::uint64_t seed, int n = 100, int k_gen = 16,
                                          int family = 3, int independent = 2,
                                          double scale = 1.0, double cap = 0.9) {
    Rng rng(seed);
    MultilayerNetwork net;
    register_nodes(net, n);

    const Mat prob = factor_probabilities(n, k_gen, scale, cap, rng);
    net.layers.push_back(layer_from_matrix("target", bernoulli_adjacency(prob, rng)));
    for (int l = 0; l < family; ++l)
        net.layers.push_back(
            layer_from_matrix("family" + std::to_string(l + 1), bernoulli_adjacency(prob, rng)));
    for (int l = 0; l < independent; ++l) {
        const Mat other = factor_probabilities(n, k_gen, scale, cap, rng);
        net.layers.push_back(
            layer_from_matrix("indep" + std::to_string(l + 1), bernoulli_adjacency(other, rng)));
    }
    return net;
}

// Nine dense-ish layers with heavy-tailed fitness, sized like a trade
// multiplex (214 nodes). Each layer has its own fitness draw.
inline MultilayerNetwork trade_multiplex(std::uint64_t seed, int n = 214, int layers = 9) {
    Rng rng(seed);
    MultilayerNetwork net;
    register_nodes(net, n);
    for (int l = 0; l < layers; ++l) {
        Eigen::VectorXd fitness(n);
        for (int i = 0; i < n; ++i)
            fitness(i) = std::pow(rng.next_open01(), 2.2); // many small, few large
        Mat prob = 0.55 * (fitness * fitness.transpose());
        prob = prob.cwiseMin(0.95);
        prob.diagonal().setZero();
        net.layers.push_back(
            layer_from_matrix("t" + std::to_string(l + 1), bernoulli_adjacency(prob, rng)));
    }
    return net;
}

} // namespace synth
