#include "mplex/eval.hpp"
#include "mplex/centrality.hpp"
#include "mplex/prior.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

namespace mplex {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const char* mode_name(FitMode m) {
    return m == FitMode::map ? "map" : "mle";
}

EvalReport auc_report(const Mat& scores, const Layer& truth, const RemovalPlan& hidden,
                      EvalPolicy policy) {
    (void)policy; // all_unobserved is the only policy
    const int n = truth.n();
    if (scores.rows() != n || scores.cols() != n)
        throw std::invalid_argument("score matrix dimension does not match layer");

    std::set<std::pair<int, int>> hidden_set;
    for (auto [i, j] : hidden.removed) {
        if (!truth.directed && i > j)
            std::swap(i, j);
        hidden_set.emplace(i, j);
    }

    // Eval set: all pairs that are not observed edges of the reduced layer.
    std::vector<std::pair<double, int>> samples; // (score, is_positive)
    for (int i = 0; i < n; ++i) {
        const int j0 = truth.directed ? 0 : i + 1;
        for (int j = j0; j < n; ++j) {
            if (j == i)
                continue;
            const bool is_true_edge = truth.adjacency(i, j) > 0.0;
            const bool is_hidden = hidden_set.count({i, j}) > 0;
            if (is_true_edge && !is_hidden)
                continue; // observed edge, not evaluated
            if (!std::isfinite(scores(i, j)))
                throw std::invalid_argument("non-finite score on evaluation pair");
            samples.emplace_back(scores(i, j), is_hidden ? 1 : 0);
        }
    }

    long pos = 0;
    for (const auto& s : samples)
        pos += s.second;
    const long neg = static_cast<long>(samples.size()) - pos;
    if (pos == 0 || neg == 0)
        throw std::runtime_error("degenerate evaluation set");

    // Mann-Whitney with midranks for ties.
    std::sort(samples.begin(), samples.end());
    double rank_sum_pos = 0.0;
    for (std::size_t lo = 0; lo < samples.size();) {
        std::size_t hi = lo;
        long tied_pos = 0;
        while (hi < samples.size() && samples[hi].first == samples[lo].first) {
            tied_pos += samples[hi].second;
            ++hi;
        }
        const double midrank = 0.5 * (static_cast<double>(lo + 1) + static_cast<double>(hi));
        rank_sum_pos += midrank * static_cast<double>(tied_pos);
        lo = hi;
    }

    EvalReport rep;
    rep.auc = (rank_sum_pos - 0.5 * static_cast<double>(pos) * static_cast<double>(pos + 1)) /
              (static_cast<double>(pos) * static_cast<double>(neg));

    // ROC: walk thresholds from high to low, one point per distinct score.
    rep.roc.push_back({0.0, 0.0});
    long tp = 0, fp = 0;
    for (auto it = samples.rbegin(); it != samples.rend();) {
        const double v = it->first;
        while (it != samples.rend() && it->first == v) {
            tp += it->second;
            fp += 1 - it->second;
            ++it;
        }
        rep.roc.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                           static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return rep;
}

EvalReport run_cell(const MultilayerNetwork& network, const std::string& target_id,
                    const FitConfig& fit_cfg, double fraction, int top_l, int runs,
                    std::uint64_t base_seed, const CellConfig& cell) {
    const Layer& target = network.layer(target_id);
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("removal fraction must be in [0, 1]");
    if (runs < 1)
        throw std::invalid_argument("runs must be >= 1");
    if (fit_cfg.mode == FitMode::map) {
        const int comparison_layers = static_cast<int>(network.layers.size()) - 1;
        if (top_l < 1 || top_l > comparison_layers)
            throw std::invalid_argument("top_l must be in [1, number of non-target layers]");
    }
    if (edge_count(target) == 0)
        throw std::invalid_argument("target layer has no edges");

    EvalReport agg;
    agg.removal_fraction = fraction;
    agg.mode = fit_cfg.mode;
    agg.K = fit_cfg.K;
    agg.top_l = top_l;
    agg.seed = base_seed;
    agg.runs = runs;

    std::exception_ptr first_error;
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(r);
        try {
            auto [reduced, plan] = remove_edges(target, fraction, seed);

            FitConfig cfg = fit_cfg;
            cfg.seed = seed;
            GammaPriorField prior = flat_prior(target.n());
            if (fit_cfg.mode == FitMode::map) {
                const bool extrapolate = fraction >= 1.0;
                const Layer* probe = &reduced;
                Layer fallback;
                if (extrapolate) {
                    fallback = remove_edges(target, kExtrapolationFraction, seed).first;
                    probe = &fallback;
                    cfg.substitute_prior_mean = true;
                    agg.extrapolated = true;
                }
                SimilarityReport ranking =
                    rank_against(network, *probe, target_id, cell.phi, cell.method,
                                 cell.hash_seed, cell.hash_seed_count);
                prior = structural_prior(network, ranking, top_l);
            }

            auto [model, trace] = fit(reduced, prior, cfg);
            const Mat scores = predict_scores(model, target.directed);
            EvalReport rep = auc_report(scores, target, plan);

            if (agg.per_run_auc.empty())
                agg.roc = std::move(rep.roc);
            agg.per_run_seeds.push_back(seed);
            agg.per_run_auc.push_back(rep.auc);
        } catch (...) {
            if (!first_error)
                first_error = std::current_exception();
        }
    }
    if (agg.per_run_auc.empty())
        std::rethrow_exception(first_error);
    agg.auc = std::accumulate(agg.per_run_auc.begin(), agg.per_run_auc.end(), 0.0) /
              static_cast<double>(agg.per_run_auc.size());
    return agg;
}

std::vector<SimRow> similarity_sweep(const MultilayerNetwork& network,
                                     const std::string& target_id,
                                     const std::vector<double>& fractions, int phi,
                                     int runs, std::uint64_t base_seed, int top_ref,
                                     std::uint64_t hash_seed, int hash_seed_count) {
    if (fractions.empty())
        throw std::invalid_argument("fractions list is empty");
    if (runs < 1)
        throw std::invalid_argument("runs must be >= 1");
    if (hash_seed_count < 1)
        throw std::invalid_argument("hash_seed_count must be >= 1");
    const Layer& target = network.layer(target_id);

    // Reference digests: the original target and its most similar layers,
    // chosen once from the full target.
    const CentralityVector target_cv = eigenvector_centrality(target);
    std::vector<const Layer*> refs;
    if (top_ref > 0 && network.layers.size() > 1) {
        SimilarityReport full = rank_layers(network, target_id, phi, SimMethod::hamming,
                                            hash_seed, hash_seed_count);
        const int take = std::min<int>(top_ref, static_cast<int>(full.entries.size()));
        for (int k = 0; k < take; ++k)
            refs.push_back(&network.layer(full.entries[k].first));
    }
    std::vector<CentralityVector> ref_cv;
    ref_cv.reserve(refs.size());
    for (const Layer* l : refs)
        ref_cv.push_back(eigenvector_centrality(*l));

    std::vector<SimRow> rows;
    for (const double f : fractions) {
        for (int r = 0; r < runs; ++r) {
            const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(r);
            const Layer reduced = remove_edges(target, f, seed).first;
            const CentralityVector reduced_cv = eigenvector_centrality(reduced);

            double self_sum = 0.0;
            std::vector<double> ref_sum(refs.size(), 0.0);
            for (int s = 0; s < hash_seed_count; ++s) {
                const std::uint64_t hs = hash_seed + static_cast<std::uint64_t>(s);
                const LayerDigest dr = layer_digest(reduced_cv, network.nodes, phi, hs);
                const LayerDigest dt = layer_digest(target_cv, network.nodes, phi, hs);
                self_sum += hamming_similarity(dr, dt);
                for (std::size_t k = 0; k < refs.size(); ++k) {
                    const LayerDigest dl = layer_digest(ref_cv[k], network.nodes, phi, hs);
                    ref_sum[k] += hamming_similarity(dr, dl);
                }
            }
            rows.push_back({target_id, f, phi, r, self_sum / hash_seed_count, "self"});
            for (std::size_t k = 0; k < refs.size(); ++k)
                rows.push_back({target_id, f, phi, r, ref_sum[k] / hash_seed_count,
                                refs[k]->layer_id});
        }
    }
    return rows;
}

namespace {

// Fixed-size job list executed on up to `jobs` threads; slot-indexed results
// keep the output order independent of scheduling.
void parallel_cells(int jobs, std::size_t count, const std::function<void(std::size_t)>& work) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(count);
    const int workers = std::min<std::size_t>(jobs, count);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    work(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::vector<AucRow> report_rows(const std::string& target, const EvalReport& rep) {
    std::vector<AucRow> rows;
    for (std::size_t k = 0; k < rep.per_run_auc.size(); ++k) {
        const std::uint64_t seed = rep.per_run_seeds[k];
        rows.push_back({target, rep.mode, rep.K, rep.top_l, rep.removal_fraction,
                        static_cast<int>(seed - rep.seed), seed, rep.per_run_auc[k]});
    }
    return rows;
}

} // namespace

std::vector<AucRow> dimension_sweep(const MultilayerNetwork& network,
                                    const std::string& target_id,
                                    const std::vector<int>& dims, double fraction,
                                    int top_l, int runs, std::uint64_t base_seed,
                                    const FitConfig& base_cfg, const CellConfig& cell,
                                    int jobs) {
    if (dims.empty())
        throw std::invalid_argument("dims list is empty");
    struct Job { int K; FitMode mode; };
    std::vector<Job> grid;
    for (const int k : dims)
        for (const FitMode m : {FitMode::mle, FitMode::map})
            grid.push_back({k, m});

    std::vector<EvalReport> reports(grid.size());
    parallel_cells(jobs, grid.size(), [&](std::size_t g) {
        FitConfig cfg = base_cfg;
        cfg.K = grid[g].K;
        cfg.mode = grid[g].mode;
        reports[g] = run_cell(network, target_id, cfg, fraction, top_l, runs, base_seed, cell);
    });

    std::vector<AucRow> rows;
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (auto& r : report_rows(target_id, reports[g]))
            rows.push_back(std::move(r));
    return rows;
}

std::vector<AucRow> removal_sweep(const MultilayerNetwork& network,
                                  const std::string& target_id,
                                  const std::vector<double>& fractions, int top_l,
                                  int runs, std::uint64_t base_seed,
                                  const FitConfig& base_cfg, const CellConfig& cell,
                                  int jobs) {
    if (fractions.empty())
        throw std::invalid_argument("fractions list is empty");
    struct Job { double fraction; FitMode mode; };
    std::vector<Job> grid;
    for (const double f : fractions)
        for (const FitMode m : {FitMode::mle, FitMode::map})
            grid.push_back({f, m});

    std::vector<EvalReport> reports(grid.size());
    parallel_cells(jobs, grid.size(), [&](std::size_t g) {
        FitConfig cfg = base_cfg;
        cfg.mode = grid[g].mode;
        reports[g] = run_cell(network, target_id, cfg, grid[g].fraction, top_l, runs,
                              base_seed, cell);
    });

    std::vector<AucRow> rows;
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (auto& r : report_rows(target_id, reports[g]))
            rows.push_back(std::move(r));
    return rows;
}

std::vector<AucRow> top_l_sweep(const MultilayerNetwork& network,
                                const std::string& target_id,
                                const std::vector<int>& top_ls,
                                const std::vector<double>& fractions, int runs,
                                std::uint64_t base_seed, const FitConfig& base_cfg,
                                const CellConfig& cell, int jobs) {
    if (top_ls.empty() || fractions.empty())
        throw std::invalid_argument("sweep lists must be non-empty");
    struct Job { int top_l; double fraction; };
    std::vector<Job> grid;
    for (const int l : top_ls)
        for (const double f : fractions)
            grid.push_back({l, f});

    std::vector<EvalReport> reports(grid.size());
    parallel_cells(jobs, grid.size(), [&](std::size_t g) {
        FitConfig cfg = base_cfg;
        cfg.mode = FitMode::map;
        reports[g] = run_cell(network, target_id, cfg, grid[g].fraction, grid[g].top_l,
                              runs, base_seed, cell);
    });

    std::vector<AucRow> rows;
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (auto& r : report_rows(target_id, reports[g]))
            rows.push_back(std::move(r));
    return rows;
}

void write_auc_csv(std::ostream& out, const std::vector<AucRow>& rows) {
    out << "target,mode,K,top_l,fraction,run,seed,auc\n";
    for (const auto& r : rows)
        out << r.target << ',' << mode_name(r.mode) << ',' << r.K << ',' << r.top_l
            << ',' << fmt_g(r.fraction) << ',' << r.run << ',' << r.seed << ','
            << fmt_g(r.auc) << '\n';
}

void write_sim_csv(std::ostream& out, const std::vector<SimRow>& rows) {
    out << "target,fraction,phi,run,similarity,reference\n";
    for (const auto& r : rows)
        out << r.target << ',' << fmt_g(r.fraction) << ',' << r.phi << ',' << r.run
            << ',' << fmt_g(r.similarity) << ',' << r.reference << '\n';
}

} // namespace mplex
