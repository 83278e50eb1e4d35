#pragma once

#include "mplex/graph.hpp"
#include "mplex/simhash.hpp"

namespace mplex {

/// Stand-in for "a large number": pushes the prior-mean pseudo-edge of an
/// unsupported pair down to 1e-6 while keeping the updates finite.
inline constexpr double kBetaLarge = 1e6;

enum class PriorMode { structural, functional, flat };

/// Per-pair Gamma prior parameters. alpha >= 1 and beta > 0 everywhere
/// except in flat mode, where the stored field is alpha = 1, beta = 0 and
/// the estimator drops the prior terms exactly.
struct GammaPriorField {
    PriorMode mode = PriorMode::flat;
    Mat alpha;
    Mat beta;
    std::vector<std::pair<std::string, double>> contributing_layers;

    int n() const { return static_cast<int>(alpha.rows()); }

    /// Dense matrix-pair file plus a JSON sidecar (mode, weights, beta cap).
    void save(const std::string& path) const;
    static GammaPriorField load(const std::string& path);
};

/// Weighted-sum prior over the top_l most similar layers. Per pair, with
/// S1 = sum_r mu_r * A^r_ij and S0 = sum_r mu_r:
///   S1 >= 1      -> alpha = S1, beta = max(S0, S0/S1)
///   0 < S1 < 1   -> alpha = 1,  beta = S0/S1   (prior mean preserved)
///   S1 == 0      -> alpha = 1,  beta = kBetaLarge
/// Similarities are clipped to [0, 1] first (Pearson scores can be negative).
GammaPriorField structural_prior(const MultilayerNetwork& network,
                                 const SimilarityReport& report, int top_l);

/// Unit-weight prior over functionally similar layers: alpha = sum_r A^r_ij,
/// beta = layer count; pairs with sum < 1 fall back to (1, kBetaLarge).
/// The estimator substitutes A_ij := alpha_ij/beta_ij in this mode.
GammaPriorField functional_prior(const MultilayerNetwork& aux_network);

GammaPriorField flat_prior(int n);

} // namespace mplex
