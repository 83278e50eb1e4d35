#pragma once

#include "mplex/estimator.hpp"
#include "mplex/graph.hpp"
#include "mplex/simhash.hpp"

#include <iosfwd>

namespace mplex {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Which node pairs are scored. all_unobserved: every pair not observed as
/// an edge in the reduced layer; positives are the hidden edges, negatives
/// the true non-edges.
enum class EvalPolicy { all_unobserved };

struct EvalReport {
    double auc = 0.0; // mean over runs
    std::vector<RocPoint> roc; // first run's curve
    double removal_fraction = 0.0;
    FitMode mode = FitMode::map;
    int K = 0;
    int top_l = 0;
    std::uint64_t seed = 0; // base seed
    int runs = 0;
    std::vector<std::uint64_t> per_run_seeds;
    std::vector<double> per_run_auc;
    bool extrapolated = false;
};

/// Mann-Whitney rank AUC (ties count 1/2) plus the ROC curve with one point
/// per distinct score threshold. Throws on a degenerate evaluation set
/// (no positives or no negatives).
EvalReport auc_report(const Mat& scores, const Layer& truth, const RemovalPlan& hidden,
                      EvalPolicy policy = EvalPolicy::all_unobserved);

/// Similarity/prior knobs shared by the experiment cells.
struct CellConfig {
    int phi = kDefaultPhi;
    SimMethod method = SimMethod::hamming;
    std::uint64_t hash_seed = kTokenHashSeed;
    int hash_seed_count = 1;
};

/// At 100% removal the reduced target digests to nothing, so the ranking is
/// taken from a removal at this fraction under the same run seed and the
/// fit substitutes the prior mean for the (empty) observations.
inline constexpr double kExtrapolationFraction = 0.8;

/// One experiment cell: per run r in [0, runs), with seed base_seed + r,
/// remove the fraction, rank similar layers against the reduced target,
/// build the prior (structural for map, flat for mle), fit, and score.
EvalReport run_cell(const MultilayerNetwork& network, const std::string& target_id,
                    const FitConfig& fit_cfg, double fraction, int top_l, int runs,
                    std::uint64_t base_seed, const CellConfig& cell = CellConfig{});

struct SimRow {
    std::string target;
    double fraction = 0.0;
    int phi = 0;
    int run = 0;
    double similarity = 0.0;
    std::string reference; // "self" or a comparison layer id
};

struct AucRow {
    std::string target;
    FitMode mode = FitMode::map;
    int K = 0;
    int top_l = 0;
    double fraction = 0.0;
    int run = 0;
    std::uint64_t seed = 0;
    double auc = 0.0;
};

/// Digest the reduced target at each (fraction, run) and compare it against
/// the original layer ("self") and its top_ref most similar layers.
std::vector<SimRow> similarity_sweep(const MultilayerNetwork& network,
                                     const std::string& target_id,
                                     const std::vector<double>& fractions, int phi,
                                     int runs, std::uint64_t base_seed, int top_ref = 5,
                                     std::uint64_t hash_seed = kTokenHashSeed,
                                     int hash_seed_count = 1);

/// run_cell per vector dimension, both map and mle modes.
std::vector<AucRow> dimension_sweep(const MultilayerNetwork& network,
                                    const std::string& target_id,
                                    const std::vector<int>& dims, double fraction,
                                    int top_l, int runs, std::uint64_t base_seed,
                                    const FitConfig& base_cfg,
                                    const CellConfig& cell = CellConfig{}, int jobs = 1);

/// run_cell per removal fraction, both map and mle modes.
std::vector<AucRow> removal_sweep(const MultilayerNetwork& network,
                                  const std::string& target_id,
                                  const std::vector<double>& fractions, int top_l,
                                  int runs, std::uint64_t base_seed,
                                  const FitConfig& base_cfg,
                                  const CellConfig& cell = CellConfig{}, int jobs = 1);

/// run_cell per (top_l, fraction), map mode.
std::vector<AucRow> top_l_sweep(const MultilayerNetwork& network,
                                const std::string& target_id,
                                const std::vector<int>& top_ls,
                                const std::vector<double>& fractions, int runs,
                                std::uint64_t base_seed, const FitConfig& base_cfg,
                                const CellConfig& cell = CellConfig{}, int jobs = 1);

/// sweep_auc.csv: target,mode,K,top_l,fraction,run,seed,auc
void write_auc_csv(std::ostream& out, const std::vector<AucRow>& rows);
/// sweep_sim.csv: target,fraction,phi,run,similarity,reference
void write_sim_csv(std::ostream& out, const std::vector<SimRow>& rows);

/// Fixed-format float for CSV output (12 significant digits).
std::string fmt_g(double v);

const char* mode_name(FitMode m);

} // namespace mplex
