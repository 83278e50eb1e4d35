#pragma once

#include "mplex/graph.hpp"
#include "mplex/prior.hpp"

#include <cstdint>

namespace mplex {

enum class FitMode { map, mle };

/// Source/target node vectors. E = S * T^T gives the expected link weights.
struct FactorModel {
    Mat S; // n x K, entries >= 0
    Mat T; // n x K, entries >= 0
    int K = 0;
    std::uint64_t seed = 0;
};

struct FitConfig {
    int K = 50;
    int max_iter = 2000;
    double rel_tol = 1e-8;
    std::uint64_t seed = 0;
    FitMode mode = FitMode::map;
    bool tie_vectors = false;          // force T = S after each sweep
    bool substitute_prior_mean = false; // use alpha/beta in place of A (unknown target)
};

/// Log-posterior value per iteration (entry 0 is the initial model).
/// The sequence is non-decreasing up to 1e-9 absolute slack.
struct FitTrace {
    std::vector<double> log_posterior;
    int iterations = 0;
    bool converged = false;
};

/// E = S * T^T.
Mat expected_links(const FactorModel& model);

/// Simplex responsibilities q_ijz = s_iz t_jz / sum_z s_iz t_jz. An all-zero
/// product row falls back to uniform 1/K and sets the degenerate flag.
Vec update_q(const FactorModel& model, int i, int j, bool* degenerate = nullptr);

/// Log posterior: sum over ordered pairs i != j of
///   (A_ij + alpha_ij - 1) log E_ij - (beta_ij + 1) E_ij
/// with 0 * log 0 taken as 0. A positive coefficient against E_ij = 0 yields
/// -infinity (flagged through neg_inf if given). Flat priors reduce this to
/// the Poisson log-likelihood up to constants.
double log_posterior(const Layer& target, const GammaPriorField& prior,
                     const FactorModel& model, bool* neg_inf = nullptr);

/// Alternating multiplicative updates of S and T until the log posterior
/// converges. Deterministic for a given seed. In mle mode (or with a flat
/// prior) the prior terms vanish exactly; in functional mode, or when
/// substitute_prior_mean is set, the observed adjacency is replaced by the
/// prior mean alpha/beta.
std::pair<FactorModel, FitTrace> fit(const Layer& target, const GammaPriorField& prior,
                                     const FitConfig& cfg);

/// Directed: E as-is. Undirected: (E + E^T)/2 with zeroed diagonal.
Mat predict_scores(const FactorModel& model, bool directed);

} // namespace mplex
