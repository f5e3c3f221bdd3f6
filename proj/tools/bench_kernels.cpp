// Timing comparison between the serial reference kernels and their OpenMP
// counterparts. Also checks that both produce identical results.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "atlab/dataset.hpp"
#include "atlab/mlp.hpp"
#include "atlab/quad_model.hpp"
#include "atlab/sde.hpp"

using namespace atlab;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

void report(const char* name, double serial_s, double parallel_s, double diff) {
    std::printf("%-22s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   max|diff| %.3g\n",
                name, serial_s, parallel_s, serial_s / parallel_s, diff);
}

}  // namespace

int main() {
    // OU simulation: 3-d model, 32 chains.
    {
        Matrix a(3, 3);
        a(0, 0) = 2.0; a(1, 1) = 1.0; a(2, 2) = 0.5;
        a(0, 1) = a(1, 0) = 0.3;
        Matrix h = Matrix::identity(3);
        h(1, 2) = h(2, 1) = 0.2;
        const QuadraticRiskModel model{SpdMatrix(a), SpdMatrix(h)};
        const OuProcessSpec spec = build_pgdat_sde(model, 0.05, 2, 3);

        double t0 = now_seconds();
        const TrajectoryStats serial = simulate_serial(spec, 32, 0.5, 7);
        double t1 = now_seconds();
        const TrajectoryStats parallel = simulate(spec, 32, 0.5, 7);
        double t2 = now_seconds();
        report("simulate (EM chains)", t1 - t0, t2 - t1,
               max_abs_diff(serial.empirical_cov.as_matrix(), parallel.empirical_cov.as_matrix()));
    }

    // Robust accuracy: MLP on two_gaussians, per-sample PGD.
    {
        TwoGaussiansConfig cfg;
        cfg.n_train = 64;
        cfg.n_test = 4000;
        RngStream rng(11, 0);
        const auto [train, test] = gen_two_gaussians(cfg, rng);
        Mlp net({{cfg.dim, 64, 64, 2}});
        RngStream init_rng(11, 1);
        const Vec params = net.init_params(init_rng);
        AttackSpec attack;
        attack.steps = 20;
        attack.eps = 0.1;
        attack.inner_rate = 0.025;

        double t0 = now_seconds();
        const double acc_serial = robust_accuracy_serial(net, params, test, attack);
        double t1 = now_seconds();
        const double acc_parallel = robust_accuracy(net, params, test, attack);
        double t2 = now_seconds();
        report("robust_accuracy", t1 - t0, t2 - t1, std::abs(acc_serial - acc_parallel));
    }

    return 0;
}
