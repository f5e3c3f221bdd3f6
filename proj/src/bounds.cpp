#include "atlab/bounds.hpp"

#include <cmath>

#include "atlab/sde.hpp"

namespace atlab {

double log_det(const SpdMatrix& m) {
    const Matrix l = cholesky(m);
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

double kl_gaussian_vs_isotropic(const SpdMatrix& sigma, const PacBayesContext& ctx) {
    const int d = sigma.dim();
    double mean_sq = 0.0;
    if (!ctx.prior_mean.empty()) {
        if (static_cast<int>(ctx.prior_mean.size()) != d)
            throw DimensionMismatch("kl_gaussian_vs_isotropic: prior mean length mismatch");
        mean_sq = dot(ctx.prior_mean, ctx.prior_mean);
    }
    const double lam0 = ctx.prior_scale;
    return mean_sq / (2.0 * lam0) - 0.5 * d + 0.5 * d * std::log(lam0) +
           sigma.trace() / (2.0 * lam0) - 0.5 * log_det(sigma);
}

double pac_bayes_bound(double kl, const PacBayesContext& ctx) {
    if (ctx.confidence <= 0.0 || ctx.confidence >= 1.0)
        throw InvalidConfidence("pac_bayes_bound: confidence must lie in (0, 1)");
    if (ctx.sample_size < 2) throw ConfigError("pac_bayes_bound: sample size must be >= 2");
    const double n = static_cast<double>(ctx.sample_size);
    return std::sqrt((kl + std::log(1.0 / ctx.confidence) + std::log(n) + 2.0) / (2.0 * n - 1.0));
}

BoundReport bound_for_pgdat(const QuadraticRiskModel& model, double alpha, int b, int K,
                            const PacBayesContext& ctx) {
    BoundReport rep;
    rep.alpha = alpha;
    rep.b = b;
    rep.K = K;
    rep.r = alpha / static_cast<double>(b);
    rep.sigma = analytic_stationary_cov(model, alpha, b, K);
    rep.trace_sigma = rep.sigma.trace();
    rep.logdet_sigma = log_det(rep.sigma);
    rep.kl = kl_gaussian_vs_isotropic(rep.sigma, ctx);
    rep.g = pac_bayes_bound(rep.kl, ctx);
    return rep;
}

KlRProfile kl_r_profile(const SpdMatrix& e, int d, double lambda0, double r) {
    if (r <= 0.0) throw ConfigError("kl_r_profile: r must be positive");
    const double tr_e = e.trace();
    const double logdet_e = log_det(e);
    KlRProfile p;
    p.paper_expression = r * tr_e / (4.0 * lambda0) - 0.5 * d * std::log(r / 2.0) - 0.5 * logdet_e;
    p.true_derivative = tr_e / (4.0 * lambda0) - 0.5 * d / r;
    return p;
}

}  // namespace atlab
