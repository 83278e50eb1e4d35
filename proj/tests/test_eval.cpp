#include "doctest.h"

#include "mplex/eval.hpp"
#include "oracles.hpp"
#include "synth.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace mplex;

namespace {

// Layer/plan/scores triple for a hand-built evaluation:
// truth = path 0-1-2-3, hidden = {(1,2)}, so the reduced layer observes
// {01, 23} and the eval set is {02, 03, 13, 12}.
struct HandCase {
    Layer truth{"t", false, Mat::Zero(4, 4)};
    RemovalPlan plan;
    Mat scores = Mat::Zero(4, 4);
};

HandCase hand_case() {
    HandCase h;
    h.truth.adjacency(0, 1) = h.truth.adjacency(1, 0) = 1.0;
    h.truth.adjacency(1, 2) = h.truth.adjacency(2, 1) = 1.0;
    h.truth.adjacency(2, 3) = h.truth.adjacency(3, 2) = 1.0;
    h.plan.fraction = 1.0 / 3.0;
    h.plan.seed = 0;
    h.plan.removed = {{1, 2}};
    return h;
}

void set_sym(Mat& m, int i, int j, double v) {
    m(i, j) = m(j, i) = v;
}

} // namespace

TEST_CASE("perfect separation gives AUC 1, all ties give 0.5") {
    auto h = hand_case();
    set_sym(h.scores, 1, 2, 0.9); // hidden edge on top
    set_sym(h.scores, 0, 2, 0.1);
    set_sym(h.scores, 0, 3, 0.2);
    set_sym(h.scores, 1, 3, 0.3);
    const auto rep = auc_report(h.scores, h.truth, h.plan);
    CHECK(rep.auc == 1.0);

    const auto tied = auc_report(Mat::Zero(4, 4), h.truth, h.plan);
    CHECK(tied.auc == 0.5);
}

TEST_CASE("observed edges are excluded from the evaluation set") {
    auto h = hand_case();
    // score the observed edges sky-high; they must not matter
    set_sym(h.scores, 0, 1, 100.0);
    set_sym(h.scores, 2, 3, 100.0);
    set_sym(h.scores, 1, 2, 0.9);
    const auto rep = auc_report(h.scores, h.truth, h.plan);
    CHECK(rep.auc == 1.0);
}

TEST_CASE("rank AUC equals the quadratic pairwise oracle") {
    Rng rng(808);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 10 + static_cast<int>(rng.next_below(22)); // up to ~500 pairs
        Mat truth = synth::random_connected_adjacency(n, 0.35, rng);
        Layer layer{"l", false, truth};
        const double frac = 0.2 + 0.5 * rng.next_open01();
        const auto [reduced, plan] = remove_edges(layer, frac, trial);
        if (plan.removed.empty())
            continue;

        Mat scores(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = rng.next_open01();
                if (rng.next_below(3) == 0)
                    v = std::round(v * 8.0) / 8.0; // force ties
                scores(i, j) = v;
            }
        scores = 0.5 * (scores + scores.transpose()).eval();

        const auto rep = auc_report(scores, layer, plan);

        // oracle over the same evaluation set
        std::set<std::pair<int, int>> hidden(plan.removed.begin(), plan.removed.end());
        std::vector<double> s;
        std::vector<int> labels;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const bool is_edge = truth(i, j) > 0;
                const bool is_hidden = hidden.count({i, j}) > 0;
                if (is_edge && !is_hidden)
                    continue;
                s.push_back(scores(i, j));
                labels.push_back(is_hidden ? 1 : 0);
            }
        CHECK(rep.auc == oracle::pairwise_auc(s, labels));
    }
}

TEST_CASE("ROC shape and trapezoid consistency") {
    Rng rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 12;
        Layer layer{"l", false, synth::random_connected_adjacency(n, 0.4, rng)};
        const auto [reduced, plan] = remove_edges(layer, 0.5, trial);
        Mat scores(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                scores(i, j) = std::round(rng.next_open01() * 6.0) / 6.0;
        scores = 0.5 * (scores + scores.transpose()).eval();

        const auto rep = auc_report(scores, layer, plan);
        REQUIRE(rep.roc.size() >= 2);
        CHECK(rep.roc.front().fpr == 0.0);
        CHECK(rep.roc.front().tpr == 0.0);
        CHECK(rep.roc.back().fpr == 1.0);
        CHECK(rep.roc.back().tpr == 1.0);
        for (std::size_t k = 1; k < rep.roc.size(); ++k) {
            CHECK(rep.roc[k].fpr >= rep.roc[k - 1].fpr);
            CHECK(rep.roc[k].tpr >= rep.roc[k - 1].tpr);
        }
        CHECK(std::abs(oracle::trapezoid_area(rep.roc) - rep.auc) < 1e-9);
    }
}

TEST_CASE("AUC invariant under strictly increasing score transforms") {
    auto h = hand_case();
    set_sym(h.scores, 1, 2, 0.4);
    set_sym(h.scores, 0, 2, 0.1);
    set_sym(h.scores, 0, 3, 0.6);
    set_sym(h.scores, 1, 3, 0.4);
    const auto rep1 = auc_report(h.scores, h.truth, h.plan);
    Mat transformed = (2.0 * h.scores.array() + 1.0).exp();
    const auto rep2 = auc_report(transformed, h.truth, h.plan);
    CHECK(rep1.auc == rep2.auc);
}

TEST_CASE("degenerate evaluation sets are rejected") {
    auto h = hand_case();
    h.plan.removed.clear(); // no positives
    CHECK_THROWS_WITH_AS(auc_report(h.scores, h.truth, h.plan), "degenerate evaluation set",
                         std::runtime_error);

    // complete graph: no negatives
    Mat full = Mat::Constant(3, 3, 1.0);
    full.diagonal().setZero();
    Layer complete{"c", false, full};
    RemovalPlan plan;
    plan.removed = {{0, 1}};
    CHECK_THROWS_AS(auc_report(Mat::Zero(3, 3), complete, plan), std::runtime_error);
}

TEST_CASE("run_cell seeds, determinism and validation") {
    const auto net = synth::family_multiplex(2026, 40, 8);
    FitConfig cfg;
    cfg.K = 8;
    cfg.max_iter = 150;

    cfg.mode = FitMode::mle;
    const auto mle1 = run_cell(net, "target", cfg, 0.4, 1, 3, 100);
    const auto mle2 = run_cell(net, "target", cfg, 0.4, 1, 3, 100);
    CHECK(mle1.per_run_auc == mle2.per_run_auc);
    CHECK(mle1.per_run_seeds == std::vector<std::uint64_t>{100, 101, 102});
    CHECK(mle1.auc > 0.0);
    CHECK(mle1.auc < 1.0);
    CHECK_FALSE(mle1.extrapolated);

    cfg.mode = FitMode::map;
    const auto map1 = run_cell(net, "target", cfg, 0.4, 3, 2, 7);
    CHECK(map1.per_run_auc.size() == 2);
    CHECK(map1.top_l == 3);

    CHECK_THROWS_AS(run_cell(net, "target", cfg, 0.4, 0, 2, 7), std::invalid_argument);
    CHECK_THROWS_AS(run_cell(net, "target", cfg, 0.4, 9, 2, 7), std::invalid_argument);
    CHECK_THROWS_AS(run_cell(net, "target", cfg, -0.2, 3, 2, 7), std::invalid_argument);
    CHECK_THROWS_AS(run_cell(net, "nope", cfg, 0.4, 3, 2, 7), std::invalid_argument);
}

TEST_CASE("run_cell at full removal extrapolates the ranking") {
    const auto net = synth::family_multiplex(99, 30, 6);
    FitConfig cfg;
    cfg.K = 6;
    cfg.max_iter = 120;
    cfg.mode = FitMode::map;
    const auto rep = run_cell(net, "target", cfg, 1.0, 3, 2, 50);
    CHECK(rep.extrapolated);
    CHECK(rep.per_run_auc.size() == 2);
    for (const double a : rep.per_run_auc)
        CHECK(std::isfinite(a));

    cfg.mode = FitMode::mle;
    const auto mle = run_cell(net, "target", cfg, 1.0, 1, 2, 50);
    CHECK(mle.auc == doctest::Approx(0.5)); // empty observations, all-tied scores
}

TEST_CASE("similarity_sweep emits self and reference rows") {
    const auto net = synth::family_multiplex(7, 30, 6);
    const auto rows = similarity_sweep(net, "target", {0.0, 0.5}, 64, 2, 5, 3);
    // per (fraction, run): one self row + 3 reference rows (top_ref clipped to layers)
    CHECK(rows.size() == 2 * 2 * (1 + 3));
    for (const auto& r : rows) {
        if (r.fraction == 0.0 && r.reference == "self")
            CHECK(r.similarity == 1.0);
        CHECK(r.phi == 64);
        CHECK(r.similarity >= 0.0);
        CHECK(r.similarity <= 1.0);
    }
    const auto again = similarity_sweep(net, "target", {0.0, 0.5}, 64, 2, 5, 3);
    for (std::size_t k = 0; k < rows.size(); ++k)
        CHECK(rows[k].similarity == again[k].similarity);
}

TEST_CASE("sweeps produce the expected grid of rows") {
    const auto net = synth::family_multiplex(3, 30, 6);
    FitConfig cfg;
    cfg.K = 5;
    cfg.max_iter = 80;

    const auto dim_rows = dimension_sweep(net, "target", {2, 4}, 0.4, 2, 2, 10, cfg);
    CHECK(dim_rows.size() == 2 * 2 * 2); // dims x modes x runs

    const auto rem_rows = removal_sweep(net, "target", {0.2, 0.6}, 2, 2, 10, cfg);
    CHECK(rem_rows.size() == 2 * 2 * 2); // fractions x modes x runs

    const auto top_rows = top_l_sweep(net, "target", {1, 3}, {0.4}, 2, 10, cfg);
    CHECK(top_rows.size() == 2 * 1 * 2); // top_ls x fractions x runs
    for (const auto& r : top_rows)
        CHECK(r.mode == FitMode::map);

    // parallel execution returns the same rows in the same order
    const auto rem_par = removal_sweep(net, "target", {0.2, 0.6}, 2, 2, 10, cfg, CellConfig{}, 4);
    REQUIRE(rem_par.size() == rem_rows.size());
    for (std::size_t k = 0; k < rem_rows.size(); ++k) {
        CHECK(rem_par[k].auc == rem_rows[k].auc);
        CHECK(rem_par[k].seed == rem_rows[k].seed);
    }
}

TEST_CASE("CSV writers emit the documented schemas") {
    std::ostringstream auc_out;
    write_auc_csv(auc_out, {{"t", FitMode::map, 50, 5, 0.4, 0, 10, 0.875}});
    CHECK(auc_out.str() == "target,mode,K,top_l,fraction,run,seed,auc\n"
                           "t,map,50,5,0.4,0,10,0.875\n");

    std::ostringstream sim_out;
    write_sim_csv(sim_out, {{"t", 0.8, 512, 3, 0.8125, "self"}});
    CHECK(sim_out.str() == "target,fraction,phi,run,similarity,reference\n"
                           "t,0.8,512,3,0.8125,self\n");
}
