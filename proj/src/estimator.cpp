#include "mplex/estimator.hpp"
#include "mplex/rng.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mplex {

namespace {

constexpr double kDenomFloor = 1e-12;

// Eq-7 sum over off-diagonal pairs given precomputed coefficient matrices:
// numer = A_eff + alpha - 1, bp1 = beta + 1.
double posterior_value(const Mat& numer, const Mat& bp1, const Mat& e, bool* neg_inf) {
    const auto n = e.rows();
    double acc = 0.0;
    bool hit_neg_inf = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const double c = numer(i, j);
            const double eij = e(i, j);
            if (c > 0.0) {
                if (eij > 0.0)
                    acc += c * std::log(eij);
                else
                    hit_neg_inf = true; // c * log 0
            }
            acc -= bp1(i, j) * eij;
        }
    }
    if (neg_inf)
        *neg_inf = hit_neg_inf;
    return hit_neg_inf ? -std::numeric_limits<double>::infinity() : acc;
}

Mat uniform_open01(int rows, int cols, Rng& rng) {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int z = 0; z < cols; ++z)
            m(i, z) = rng.next_open01();
    return m;
}

} // namespace

Mat expected_links(const FactorModel& model) {
    return model.S * model.T.transpose();
}

Vec update_q(const FactorModel& model, int i, int j, bool* degenerate) {
    const Vec prod = model.S.row(i).cwiseProduct(model.T.row(j)).transpose();
    const double total = prod.sum();
    if (degenerate)
        *degenerate = !(total > 0.0);
    if (!(total > 0.0))
        return Vec::Constant(model.K, 1.0 / model.K);
    return prod / total;
}

double log_posterior(const Layer& target, const GammaPriorField& prior,
                     const FactorModel& model, bool* neg_inf) {
    if (prior.n() != target.n())
        throw std::invalid_argument("prior dimension does not match layer");
    const Mat numer = target.adjacency + (prior.alpha.array() - 1.0).matrix();
    const Mat bp1 = prior.beta.array() + 1.0;
    return posterior_value(numer, bp1, expected_links(model), neg_inf);
}

std::pair<FactorModel, FitTrace> fit(const Layer& target, const GammaPriorField& prior,
                                     const FitConfig& cfg) {
    const int n = target.n();
    if (prior.n() != n)
        throw std::invalid_argument("prior dimension does not match layer");
    if (cfg.K < 1)
        throw std::invalid_argument("K must be >= 1");
    if (!(cfg.rel_tol > 0.0))
        throw std::invalid_argument("rel_tol must be positive");
    if (cfg.max_iter < 1)
        throw std::invalid_argument("max_iter must be >= 1");

    const bool flat = cfg.mode == FitMode::mle || prior.mode == PriorMode::flat;
    if (!flat && prior.alpha.minCoeff() < 1.0)
        throw std::invalid_argument("prior alpha below 1 would drive node vectors negative");

    // Effective adjacency: observed edges, or the prior mean when the target
    // is unknown.
    Mat a_eff;
    if (!flat && (prior.mode == PriorMode::functional || cfg.substitute_prior_mean))
        a_eff = prior.alpha.cwiseQuotient(prior.beta);
    else
        a_eff = target.adjacency;

    // numer = A + alpha - 1 (zero diagonal: pairs i == j are outside the
    // model); bp1z = beta + 1 with zero diagonal for the same reason.
    Mat numer, bp1z;
    if (flat) {
        numer = a_eff;
        bp1z = Mat::Constant(n, n, 1.0);
    } else {
        numer = a_eff + (prior.alpha.array() - 1.0).matrix();
        bp1z = (prior.beta.array() + 1.0).matrix();
    }
    numer.diagonal().setZero();
    bp1z.diagonal().setZero();

    FactorModel model;
    model.K = cfg.K;
    model.seed = cfg.seed;
    Rng rng(cfg.seed);
    model.S = uniform_open01(n, cfg.K, rng);
    model.T = cfg.tie_vectors ? model.S : uniform_open01(n, cfg.K, rng);

    FitTrace trace;
    Mat e = expected_links(model);
    trace.log_posterior.push_back(posterior_value(numer, bp1z, e, nullptr));

    Mat ratio(n, n), num(n, cfg.K), den(n, cfg.K);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        // S sweep (Eq. 11 with q eliminated)
        ratio = numer.cwiseQuotient(e.cwiseMax(kDenomFloor));
        num.noalias() = ratio * model.T;
        den.noalias() = bp1z * model.T;
        model.S = model.S.cwiseProduct(num).cwiseQuotient(den.cwiseMax(kDenomFloor));

        if (cfg.tie_vectors) {
            model.T = model.S;
        } else {
            // T sweep (Eq. 12) against the updated S
            e.noalias() = model.S * model.T.transpose();
            ratio = numer.cwiseQuotient(e.cwiseMax(kDenomFloor));
            num.noalias() = ratio.transpose() * model.S;
            den.noalias() = bp1z.transpose() * model.S;
            model.T = model.T.cwiseProduct(num).cwiseQuotient(den.cwiseMax(kDenomFloor));
        }

        if (!model.S.allFinite() || !model.T.allFinite()) {
            std::ostringstream os;
            os << "non-finite factor entries at iteration " << it;
            throw std::runtime_error(os.str());
        }

        e.noalias() = model.S * model.T.transpose();
        const double value = posterior_value(numer, bp1z, e, nullptr);
        const double prev = trace.log_posterior.back();
        trace.log_posterior.push_back(value);
        trace.iterations = it;
        if (std::isfinite(value) &&
            std::abs(value - prev) < cfg.rel_tol * std::max(std::abs(value), 1e-30)) {
            trace.converged = true;
            break;
        }
    }
    return {std::move(model), std::move(trace)};
}

Mat predict_scores(const FactorModel& model, bool directed) {
    Mat e = expected_links(model);
    if (directed)
        return e;
    Mat sym = 0.5 * (e + e.transpose());
    sym.diagonal().setZero();
    return sym;
}

} // namespace mplex
