#pragma once

#include <utility>
#include <vector>

#include "atlab/linalg.hpp"
#include "atlab/oracle.hpp"
#include "atlab/quad_model.hpp"
#include "atlab/rng.hpp"
#include "atlab/vec.hpp"

namespace atlab {

enum class BudgetKind { LinfBall, Lagrange };

struct AttackSpec {
    int steps = 0;              // K; 0 means no attack
    double inner_rate = 0.1;    // alpha_I
    BudgetKind budget = BudgetKind::LinfBall;
    double eps = 0.5;           // perturbation budget for linf_ball
    double lambda = 0.0;        // Lagrange weight
    int p = 2;                  // norm order for the Lagrange penalty: 1, 2, or 0 meaning inf
    bool sign_ascent = false;   // non-default FGSM-style ascent
};

Vec project_linf(Vec delta, double eps);

// Subgradient of ||delta||_p, with the value 0 chosen at delta = 0 for p = 2
// and p = 1; for p = inf the sign vector on the max-coordinate set averaged
// uniformly over ties.
Vec lp_norm_subgradient(const Vec& delta, int p);

// K ascent steps on the shared batch perturbation, starting from delta = 0.
Vec pgd_attack(const GradientOracle& oracle, const Vec& theta, const SampleBatch& batch,
               const AttackSpec& attack);

// First-order prediction (K alpha_I / b) sum_j grad_x l(theta, x_j).
Vec taylor_delta_approx(const GradientOracle& oracle, const Vec& theta, const SampleBatch& batch,
                        int steps, double inner_rate);

// Averaged adversarial gradient at theta for the given batch: the outer-loop
// direction shared by PGD-AT and DEAT.
Vec adversarial_grad(const GradientOracle& oracle, const Vec& theta, const SampleBatch& batch,
                     const AttackSpec& attack);

struct PgdAtState {
    Vec theta;
    double outer_rate;
    int batch_size;
    AttackSpec attack;
    double weight_decay = 0.0;
    long step_count = 0;
};

void pgdat_step(PgdAtState& state, const GradientOracle& oracle, const SampleBatch& batch);

Vec sgd_step(const Vec& theta, double alpha, const Vec& grad);

// d_new = (1 - beta) g + beta d; theta' = theta - alpha d_new.
std::pair<Vec, Vec> heavy_ball_step(const Vec& theta, const Vec& momentum, const Vec& grad,
                                    double alpha, double beta);

struct DeatState {
    Vec theta;
    double outer_rate;           // alpha_O
    double rescaled_rate;        // alpha_O / sqrt((1+k1)^2 + k1^2)
    double k1;
    double k2;
    Vec h_prev;                  // h_{t-1}
    Vec h_prev2;                 // h_{t-2}
    int batch_size;
    AttackSpec attack;
    double weight_decay = 0.0;
    long step_count = 0;

    DeatState(Vec theta0, double alpha_o, double k1_, double k2_, int b, AttackSpec att);
};

// Optional per-step record for the dual-momentum equivalence replay.
struct DeatTrace {
    double rescaled_rate = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    Vec theta0;                      // theta before the first recorded step
    std::vector<Vec> grads;          // ghat_t
    std::vector<Vec> h;              // h_t
    std::vector<Vec> thetas;         // theta after each step
};

void deat_step(DeatState& state, const GradientOracle& oracle, const SampleBatch& batch,
               DeatTrace* trace = nullptr);

// Replays x_{t+1} = x_t - xi ghat_t + k2 (x_{t-1} - x_{t-2}) with
// x_t = theta_t + alpha'_O k1 h_{t-1} and xi = alpha'_O (1 - k2), and returns
// the max deviation from the recorded trajectory. (This substitution gives
// x_{t+1} = x_t - alpha'_O h_t exactly; the commonly printed form drops the
// alpha'_O factor and flips the sign of the k1 term.)
double deat_pnm_equivalence(const DeatTrace& trace);

enum class OptimizerKind { Sgd, PgdAt, Deat, HeavyBall };

struct NoiseMeasurementConfig {
    OptimizerKind kind = OptimizerKind::PgdAt;
    AttackSpec attack;
    int batch_size = 1;
    double k1 = 0.0;
    double k2 = 0.0;
    int warmup_steps = 200;
};

// Pins theta, warms the momentum buffers up on fresh batches, then returns
// the empirical covariance of the pre-learning-rate update direction over
// n_samples further fresh batches.
SpdMatrix measure_update_noise(const NoiseMeasurementConfig& cfg, const QuadraticRiskModel& model,
                               const Vec& theta_pin, long n_samples, RngStream& rng);

}  // namespace atlab
