#include "atlab/optimizers.hpp"

#include <algorithm>
#include <cmath>

namespace atlab {

Vec project_linf(Vec delta, double eps) {
    for (double& v : delta) v = std::clamp(v, -eps, eps);
    return delta;
}

Vec lp_norm_subgradient(const Vec& delta, int p) {
    const int n = static_cast<int>(delta.size());
    Vec g(n, 0.0);
    if (p == 2) {
        const double nrm = norm2(delta);
        if (nrm == 0.0) return g;
        for (int i = 0; i < n; ++i) g[i] = delta[i] / nrm;
    } else if (p == 1) {
        for (int i = 0; i < n; ++i) g[i] = (delta[i] > 0.0) - (delta[i] < 0.0);
    } else {  // p == 0: infinity norm
        const double m = norm_inf(delta);
        if (m == 0.0) return g;
        int ties = 0;
        for (int i = 0; i < n; ++i)
            if (std::fabs(delta[i]) == m) ++ties;
        for (int i = 0; i < n; ++i)
            if (std::fabs(delta[i]) == m) g[i] = ((delta[i] > 0.0) ? 1.0 : -1.0) / ties;
    }
    return g;
}

namespace {

Vec batch_input_grad(const GradientOracle& oracle, const Vec& theta, const SampleBatch& batch,
                     const Vec& delta) {
    Vec g(oracle.input_dim(), 0.0);
    for (const Sample& s : batch) axpy(1.0, oracle.grad_input(theta, vadd(s.x, delta), s.label), g);
    return g;
}

}  // namespace

Vec pgd_attack(const GradientOracle& oracle, const Vec& theta, const SampleBatch& batch,
               const AttackSpec& attack) {
    if (batch.empty()) throw DimensionMismatch("pgd_attack: empty batch");
    const int b = static_cast<int>(batch.size());
    Vec delta(oracle.input_dim(), 0.0);
    for (int k = 0; k < attack.steps; ++k) {
        Vec ascent = batch_input_grad(oracle, theta, batch, delta);
        for (double& v : ascent) v /= b;
        if (attack.budget == BudgetKind::Lagrange && attack.lambda != 0.0)
            axpy(-attack.lambda, lp_norm_subgradient(delta, attack.p), ascent);
        if (attack.sign_ascent)
            for (double& v : ascent) v = (v > 0.0) - (v < 0.0);
        axpy(attack.inner_rate, ascent, delta);
        if (attack.budget == BudgetKind::LinfBall) delta = project_linf(std::move(delta), attack.eps);
    }
    return delta;
}

Vec taylor_delta_approx(const GradientOracle& oracle, const Vec& theta, const SampleBatch& batch,
                        int steps, double inner_rate) {
    Vec g(oracle.input_dim(), 0.0);
    if (steps == 0 || batch.empty()) return g;
    g = batch_input_grad(oracle, theta, batch, Vec(oracle.input_dim(), 0.0));
    const double c = steps * inner_rate / static_cast<double>(batch.size());
    for (double& v : g) v *= c;
    return g;
}

Vec adversarial_grad(const GradientOracle& oracle, const Vec& theta, const SampleBatch& batch,
                     const AttackSpec& attack) {
    if (batch.empty()) throw DimensionMismatch("adversarial_grad: empty batch");
    const Vec delta = pgd_attack(oracle, theta, batch, attack);
    Vec g(oracle.param_dim(), 0.0);
    for (const Sample& s : batch) axpy(1.0, oracle.grad_theta(theta, vadd(s.x, delta), s.label), g);
    for (double& v : g) v /= static_cast<double>(batch.size());
    return g;
}

void pgdat_step(PgdAtState& state, const GradientOracle& oracle, const SampleBatch& batch) {
    if (static_cast<int>(batch.size()) != state.batch_size)
        throw DimensionMismatch("pgdat_step: batch size does not match state");
    Vec g = adversarial_grad(oracle, state.theta, batch, state.attack);
    if (state.weight_decay != 0.0) axpy(state.weight_decay, state.theta, g);
    axpy(-state.outer_rate, g, state.theta);
    ++state.step_count;
}

Vec sgd_step(const Vec& theta, double alpha, const Vec& grad) {
    Vec t(theta);
    axpy(-alpha, grad, t);
    return t;
}

std::pair<Vec, Vec> heavy_ball_step(const Vec& theta, const Vec& momentum, const Vec& grad,
                                    double alpha, double beta) {
    Vec d = scaled(grad, 1.0 - beta);
    axpy(beta, momentum, d);
    Vec t(theta);
    axpy(-alpha, d, t);
    return {std::move(t), std::move(d)};
}

DeatState::DeatState(Vec theta0, double alpha_o, double k1_, double k2_, int b, AttackSpec att)
    : theta(std::move(theta0)),
      outer_rate(alpha_o),
      rescaled_rate(alpha_o / std::sqrt((1.0 + k1_) * (1.0 + k1_) + k1_ * k1_)),
      k1(k1_),
      k2(k2_),
      h_prev(theta.size(), 0.0),
      h_prev2(theta.size(), 0.0),
      batch_size(b),
      attack(att) {}

void deat_step(DeatState& state, const GradientOracle& oracle, const SampleBatch& batch,
               DeatTrace* trace) {
    if (static_cast<int>(batch.size()) != state.batch_size)
        throw DimensionMismatch("deat_step: batch size does not match state");
    Vec g = adversarial_grad(oracle, state.theta, batch, state.attack);
    if (state.weight_decay != 0.0) axpy(state.weight_decay, state.theta, g);

    if (trace && trace->grads.empty()) {
        trace->rescaled_rate = state.rescaled_rate;
        trace->k1 = state.k1;
        trace->k2 = state.k2;
        trace->theta0 = state.theta;
    }

    Vec h = scaled(state.h_prev2, state.k2);
    axpy(1.0 - state.k2, g, h);

    Vec direction = scaled(h, 1.0 + state.k1);
    axpy(-state.k1, state.h_prev, direction);
    axpy(-state.rescaled_rate, direction, state.theta);

    state.h_prev2 = std::move(state.h_prev);
    state.h_prev = h;
    ++state.step_count;

    if (trace) {
        trace->grads.push_back(std::move(g));
        trace->h.push_back(std::move(h));
        trace->thetas.push_back(state.theta);
    }
}

double deat_pnm_equivalence(const DeatTrace& trace) {
    const double xi = trace.rescaled_rate * (1.0 - trace.k2);
    Vec x_prev2 = trace.theta0;
    Vec x_prev = trace.theta0;
    Vec x_cur = trace.theta0;
    double max_dev = 0.0;
    for (std::size_t t = 0; t < trace.grads.size(); ++t) {
        Vec x_next(x_cur);
        axpy(-xi, trace.grads[t], x_next);
        axpy(trace.k2, vsub(x_prev, x_prev2), x_next);
        // recorded side: x_{t+1} = theta_{t+1} + alpha'_O k1 h_t, which turns
        // the theta update into x_{t+1} = x_t - alpha'_O h_t exactly
        Vec ref(trace.thetas[t]);
        axpy(trace.rescaled_rate * trace.k1, trace.h[t], ref);
        max_dev = std::max(max_dev, norm_inf(vsub(x_next, ref)));
        x_prev2 = std::move(x_prev);
        x_prev = std::move(x_cur);
        x_cur = std::move(x_next);
    }
    return max_dev;
}

SpdMatrix measure_update_noise(const NoiseMeasurementConfig& cfg, const QuadraticRiskModel& model,
                               const Vec& theta_pin, long n_samples, RngStream& rng) {
    const QuadraticOracle oracle(model);
    const int d = model.dim();
    Vec h_prev(d, 0.0), h_prev2(d, 0.0);

    auto direction = [&](void) -> Vec {
        const SampleBatch batch = to_samples(model.draw_batch(cfg.batch_size, rng));
        Vec g = adversarial_grad(oracle, theta_pin, batch, cfg.attack);
        if (cfg.kind != OptimizerKind::Deat) return g;
        Vec h = scaled(h_prev2, cfg.k2);
        axpy(1.0 - cfg.k2, g, h);
        Vec dir = scaled(h, 1.0 + cfg.k1);
        axpy(-cfg.k1, h_prev, dir);
        h_prev2 = std::move(h_prev);
        h_prev = std::move(h);
        return dir;
    };

    for (int t = 0; t < cfg.warmup_steps; ++t) direction();
    MomentAccumulator acc(d);
    for (long t = 0; t < n_samples; ++t) acc.add(direction());
    return acc.covariance();
}

}  // namespace atlab
