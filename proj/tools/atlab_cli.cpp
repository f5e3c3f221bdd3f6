// Command-line front end: SDE simulation, stationary checks, PAC-Bayes bound
// grids, training, sweeps, statistics, noise measurement, and plotting.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "atlab/bounds.hpp"
#include "atlab/dataset.hpp"
#include "atlab/fixture.hpp"
#include "atlab/mlp.hpp"
#include "atlab/optimizers.hpp"
#include "atlab/plots.hpp"
#include "atlab/quad_model.hpp"
#include "atlab/sde.hpp"
#include "atlab/stats.hpp"
#include "atlab/sweep.hpp"

namespace {

using namespace atlab;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

QuadraticRiskModel model_from_options(const std::string& config_path, int dim, double a_scale,
                                      double h_scale) {
    if (!config_path.empty()) return QuadraticRiskModel::from_json(read_file(config_path));
    return QuadraticRiskModel(SpdMatrix(Matrix::identity(dim) * a_scale),
                              SpdMatrix(Matrix::identity(dim) * h_scale));
}

nlohmann::json matrix_json(const SpdMatrix& m) {
    return nlohmann::json(m.as_matrix().data());
}

void emit(const nlohmann::json& j, const std::string& out) {
    if (out.empty())
        std::cout << j.dump(2) << std::endl;
    else
        write_file_atomic(out, j.dump(2) + "\n");
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

void dump_trajectories(const OuProcessSpec& spec, int n_chains, std::uint64_t seed,
                       const std::string& path) {
    std::ostringstream os;
    const int d = spec.drift.dim();
    os << "chain,step,t";
    for (int i = 1; i <= d; ++i) os << ",theta_" << i;
    os << '\n';
    const long steps = static_cast<long>(std::llround(spec.horizon / spec.dt));
    const double sqrt_dt = std::sqrt(spec.dt);
    for (int c = 0; c < n_chains; ++c) {
        RngStream rng(seed, c);
        Vec theta = spec.initial_state;
        Vec z(d);
        for (long s = 0; s < steps; ++s) {
            const Vec drift_term = spec.drift.apply(theta);
            for (int i = 0; i < d; ++i) z[i] = rng.normal();
            const Vec noise = spec.diffusion.apply(z);
            for (int i = 0; i < d; ++i) theta[i] += -drift_term[i] * spec.dt + noise[i] * sqrt_dt;
            os << c << ',' << s << ',' << format_number((s + 1) * spec.dt);
            for (int i = 0; i < d; ++i) os << ',' << format_number(theta[i]);
            os << '\n';
        }
    }
    write_file_atomic(path, os.str());
}

nlohmann::json correlation_json(const Vec& xs, const Vec& ys, bool exact_perm) {
    const CorrelationReport rep = correlation_report(xs, ys);
    nlohmann::json j;
    j["pearson_r"] = rep.pearson.coefficient;
    j["p_pearson"] = rep.pearson.p_value;
    j["spearman_rho"] = rep.spearman.coefficient;
    j["p_spearman"] = rep.spearman.p_value;
    j["kendall_tau"] = rep.kendall.coefficient;
    j["p_kendall"] = rep.kendall.p_value;
    if (exact_perm && xs.size() <= 10) {
        j["p_pearson_exact"] = permutation_p_value_pearson(xs, ys);
        j["p_kendall_exact"] = permutation_p_value_kendall(xs, ys);
    }
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"adversarial-training optimization laboratory"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    std::string out, config_path;
    int jobs = 0;
    app.add_option("--seed", seed, "base RNG seed")->capture_default_str();
    app.add_option("--out", out, "output file or directory");
    app.add_option("--config", config_path, "JSON config path");
    app.add_option("--jobs", jobs, "worker threads (0 = library default)");

    // shared model/hyperparameter options
    int dim = 1, b = 1, K = 0, chains = 64;
    double alpha = 0.1, a_scale = 1.0, h_scale = 1.0, dt = -1.0, horizon = -1.0, burn_in = 0.5;

    auto* sim = app.add_subcommand("simulate-sde", "Euler-Maruyama OU simulation vs analytic covariance");
    sim->add_option("--dim", dim)->capture_default_str();
    sim->add_option("--alpha", alpha)->capture_default_str();
    sim->add_option("--b", b)->capture_default_str();
    sim->add_option("--K", K)->capture_default_str();
    sim->add_option("--chains", chains)->capture_default_str();
    sim->add_option("--a-scale", a_scale)->capture_default_str();
    sim->add_option("--h-scale", h_scale)->capture_default_str();
    sim->add_option("--dt", dt, "time step (default 0.01/lambda_max)");
    sim->add_option("--horizon", horizon, "horizon T (default 20/lambda_min)");
    sim->add_option("--burn-in", burn_in)->capture_default_str();
    std::string traj_csv;
    sim->add_option("--traj-csv", traj_csv, "per-chain trajectory dump path");

    auto* ver = app.add_subcommand("verify-stationary", "discrete optimizer covariance vs analytic");
    long n_steps = 200000;
    ver->add_option("--dim", dim)->capture_default_str();
    ver->add_option("--alpha", alpha)->capture_default_str();
    ver->add_option("--b", b)->capture_default_str();
    ver->add_option("--K", K)->capture_default_str();
    ver->add_option("--steps", n_steps)->capture_default_str();
    ver->add_option("--chains", chains)->capture_default_str();
    ver->add_option("--a-scale", a_scale)->capture_default_str();
    ver->add_option("--h-scale", h_scale)->capture_default_str();

    auto* bnd = app.add_subcommand("bounds", "PAC-Bayes bound grid as CSV");
    std::string alphas_csv = "0.05,0.1,0.2,0.4", bs_csv = "1", ks_csv = "0";
    double lambda0 = 1.0, confidence = 0.05;
    long sample_size = 10000;
    bnd->add_option("--dim", dim)->capture_default_str();
    bnd->add_option("--alphas", alphas_csv)->capture_default_str();
    bnd->add_option("--bs", bs_csv)->capture_default_str();
    bnd->add_option("--Ks", ks_csv)->capture_default_str();
    bnd->add_option("--lambda0", lambda0)->capture_default_str();
    bnd->add_option("--N", sample_size)->capture_default_str();
    bnd->add_option("--confidence", confidence)->capture_default_str();
    bnd->add_option("--a-scale", a_scale)->capture_default_str();
    bnd->add_option("--h-scale", h_scale)->capture_default_str();

    auto* trn = app.add_subcommand("train", "single training run on two_gaussians");
    auto* swp = app.add_subcommand("sweep", "grid sweep from a JSON config");
    std::string optimizer = "pgdat";
    int epochs = 30, batch_size = 128;
    double eps = 0.1, k1 = 1.0, k2 = 0.8;
    trn->add_option("--optimizer", optimizer)->capture_default_str();
    trn->add_option("--alpha", alpha)->capture_default_str();
    trn->add_option("--epochs", epochs)->capture_default_str();
    trn->add_option("--batch-size", batch_size)->capture_default_str();
    trn->add_option("--eps", eps)->capture_default_str();
    trn->add_option("--K", K, "PGD steps")->capture_default_str();
    trn->add_option("--k1", k1)->capture_default_str();
    trn->add_option("--k2", k2)->capture_default_str();
    std::string checkpoint_path;
    trn->add_option("--checkpoint", checkpoint_path, "write final params as JSON checkpoint");

    auto* sts = app.add_subcommand("stats", "correlation coefficients and t-test");
    std::string records_path, fixture_name;
    bool exact_perm = false;
    sts->add_option("--records", records_path, "records CSV path");
    sts->add_option("--fixture", fixture_name, "bundled fixture name (table2)");
    sts->add_flag("--exact-perm", exact_perm, "add exact permutation p-values (n <= 10)");

    auto* noi = app.add_subcommand("noise", "update-direction noise amplification measurement");
    long n_noise = 100000;
    double noise_k2 = 0.05;
    noi->add_option("--dim", dim)->capture_default_str();
    noi->add_option("--k1", k1)->capture_default_str();
    noi->add_option("--k2", noise_k2, "DEAT buffer averaging")->capture_default_str();
    noi->add_option("--K", K)->capture_default_str();
    noi->add_option("--alpha", alpha)->capture_default_str();
    noi->add_option("--b", b)->capture_default_str();
    noi->add_option("--n", n_noise)->capture_default_str();
    noi->add_option("--a-scale", a_scale)->capture_default_str();
    noi->add_option("--h-scale", h_scale)->capture_default_str();

    auto* plt = app.add_subcommand("plot", "accuracy-vs-alpha chart from a records CSV");
    plt->add_option("--records", records_path, "records CSV path")->required();

    // let --seed/--out/--config/--jobs appear after the subcommand too
    for (CLI::App* s : app.get_subcommands(nullptr)) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*sim) {
        const QuadraticRiskModel model = model_from_options(config_path, dim, a_scale, h_scale);
        const OuProcessSpec spec = build_pgdat_sde(model, alpha, b, K, dt, horizon);
        const TrajectoryStats stats = simulate(spec, chains, burn_in, seed);
        const SpdMatrix analytic = analytic_stationary_cov(model, alpha, b, K);
        const double rel = (stats.empirical_cov.as_matrix() - analytic.as_matrix()).frobenius_norm() /
                           analytic.frobenius_norm();
        nlohmann::json j;
        j["n_chains"] = stats.n_chains;
        j["n_kept_steps"] = stats.n_kept_steps;
        j["dt"] = spec.dt;
        j["horizon"] = spec.horizon;
        j["empirical_mean"] = stats.empirical_mean;
        j["empirical_cov"] = matrix_json(stats.empirical_cov);
        j["analytic_cov"] = matrix_json(analytic);
        j["relative_error_frobenius"] = rel;
        emit(j, out);
        if (!traj_csv.empty()) dump_trajectories(spec, std::min(chains, 4), seed, traj_csv);
    } else if (*ver) {
        const QuadraticRiskModel model = model_from_options(config_path, dim, a_scale, h_scale);
        const StationaryCheck check = discrete_iterate_stationary_check(
            model, K == 0 ? OptimizerKind::Sgd : OptimizerKind::PgdAt, alpha, b, K, n_steps,
            chains, seed);
        nlohmann::json j;
        j["empirical_cov"] = matrix_json(check.empirical_cov);
        j["analytic_cov"] = matrix_json(check.analytic_cov);
        j["relative_error_frobenius"] = check.relative_error_frobenius;
        j["max_entry_relative_error"] = check.max_entry_relative_error;
        emit(j, out);
    } else if (*bnd) {
        const QuadraticRiskModel model = model_from_options(config_path, dim, a_scale, h_scale);
        PacBayesContext ctx;
        ctx.prior_scale = lambda0;
        ctx.sample_size = sample_size;
        ctx.confidence = confidence;
        std::ostringstream csv;
        csv << "alpha,b,K,r,trace_sigma,logdet_sigma,kl,G\n";
        for (double ka : parse_list(ks_csv))
            for (double bb : parse_list(bs_csv))
                for (double a : parse_list(alphas_csv)) {
                    const BoundReport rep =
                        bound_for_pgdat(model, a, static_cast<int>(bb), static_cast<int>(ka), ctx);
                    csv << format_number(rep.alpha) << ',' << rep.b << ',' << rep.K << ','
                        << format_number(rep.r) << ',' << format_number(rep.trace_sigma) << ','
                        << format_number(rep.logdet_sigma) << ',' << format_number(rep.kl) << ','
                        << format_number(rep.g) << '\n';
                }
        if (out.empty())
            std::cout << csv.str();
        else
            write_file_atomic(out, csv.str());
    } else if (*trn) {
        TwoGaussiansConfig dcfg;
        RngStream data_rng(seed, 9001);
        const auto [train, test] = gen_two_gaussians(dcfg, data_rng);
        TrainConfig tc;
        tc.arch.layer_widths = {dcfg.dim, 32, 32, 2};
        tc.optimizer = optimizer;
        tc.alpha = alpha;
        tc.epochs = epochs;
        tc.batch_size = batch_size;
        tc.attack.budget = BudgetKind::LinfBall;
        tc.attack.eps = eps;
        tc.attack.steps = (K > 0) ? K : 10;
        tc.attack.inner_rate = eps / 4.0;
        tc.k1 = k1;
        tc.k2 = k2;
        const TrainOutcome outcome = train_single(tc, train, test, static_cast<long>(seed));
        nlohmann::json j;
        j["record"] = nlohmann::json::parse(records_to_json({outcome.record}))[0];
        emit(j, out);
        if (!checkpoint_path.empty())
            write_file_atomic(checkpoint_path,
                              checkpoint_to_json(tc.arch, outcome.params, seed, 0));
    } else if (*swp) {
        if (config_path.empty()) throw ConfigError("sweep: --config is required");
        SweepConfig cfg = sweep_config_from_json(read_file(config_path));
        if (!out.empty()) cfg.out_dir = out;
        const SweepResult result = run_sweep(cfg, jobs);
        // directional soft check, reported but never a gate
        nlohmann::json j;
        j["run_dir"] = result.run_dir;
        j["cells"] = result.records.size();
        Vec alphas_seen, mean_acc_pgdat;
        double deat_sum = 0.0, pgdat_sum = 0.0;
        long deat_n = 0, pgdat_n = 0;
        for (const auto& s : accuracy_vs_alpha(result.records)) {
            if (s.label == "pgdat") {
                alphas_seen = s.xs;
                mean_acc_pgdat = s.ys;
            }
        }
        for (const ExperimentRecord& r : result.records) {
            if (!r.error.empty()) continue;
            if (r.optimizer_kind == "deat") {
                deat_sum += r.robust_test_acc;
                ++deat_n;
            } else if (r.optimizer_kind == "pgdat") {
                pgdat_sum += r.robust_test_acc;
                ++pgdat_n;
            }
        }
        if (deat_n > 0 && pgdat_n > 0)
            j["mean_acc_diff_deat_minus_pgdat"] = deat_sum / deat_n - pgdat_sum / pgdat_n;
        if (alphas_seen.size() >= 3)
            j["pgdat_alpha_spearman"] = spearman_rho(alphas_seen, mean_acc_pgdat).coefficient;
        std::cout << j.dump(2) << std::endl;
    } else if (*sts) {
        nlohmann::json j;
        if (fixture_name == "table2") {
            for (const ArchFixture& arch : table2_fixture()) {
                nlohmann::json aj;
                aj["pgdat_vs_alpha"] = correlation_json(arch.alphas(), arch.pgdat_column(), exact_perm);
                aj["deat_vs_alpha"] = correlation_json(arch.alphas(), arch.deat_column(), exact_perm);
                const TTestResult tt = paired_t_test(arch.diff_column());
                aj["t_test"]["mean_improvement"] = tt.mean;
                aj["t_test"]["p_value"] = tt.p_value;
                j[arch.arch_tag] = std::move(aj);
            }
        } else if (!records_path.empty()) {
            const auto records = records_from_csv_file(records_path);
            std::map<std::string, std::pair<Vec, Vec>> per_opt;
            for (const ExperimentRecord& r : records) {
                per_opt[r.optimizer_kind].first.push_back(r.alpha);
                per_opt[r.optimizer_kind].second.push_back(r.robust_test_acc);
            }
            for (const auto& [opt, cols] : per_opt)
                j[opt]["acc_vs_alpha"] = correlation_json(cols.first, cols.second, exact_perm);
        } else {
            throw ConfigError("stats: pass --records <csv> or --fixture table2");
        }
        emit(j, out);
    } else if (*noi) {
        const QuadraticRiskModel model = model_from_options(config_path, dim, a_scale, h_scale);
        const Vec theta_pin(model.dim(), 0.0);
        AttackSpec attack;
        attack.steps = K;
        attack.inner_rate = alpha;
        attack.budget = BudgetKind::Lagrange;
        NoiseMeasurementConfig base{OptimizerKind::PgdAt, attack, b, 0.0, 0.0, 200};
        NoiseMeasurementConfig deat{OptimizerKind::Deat, attack, b, k1, noise_k2, 200};
        RngStream rng1(seed, 1), rng2(seed, 2);
        const SpdMatrix cov_base = measure_update_noise(base, model, theta_pin, n_noise, rng1);
        const SpdMatrix cov_deat = measure_update_noise(deat, model, theta_pin, n_noise, rng2);
        nlohmann::json j;
        j["pgdat_cov"] = matrix_json(cov_base);
        j["deat_cov"] = matrix_json(cov_deat);
        j["trace_ratio"] = cov_deat.trace() / cov_base.trace();
        j["predicted_factor"] = (1.0 + k1) * (1.0 + k1) + k1 * k1;
        emit(j, out);
    } else if (*plt) {
        const auto records = records_from_csv_file(records_path);
        const auto series = accuracy_vs_alpha(records);
        const std::string dir = out.empty() ? "plots" : out;
        fs::create_directories(dir);
        emit_line_chart(series, "robust test accuracy vs learning rate", "alpha",
                        "robust test accuracy", dir + "/acc_vs_alpha.svg",
                        dir + "/acc_vs_alpha.csv");
        std::cout << "wrote " << dir << "/acc_vs_alpha.{svg,csv}" << std::endl;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const atlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const atlab::IoError& e) {
        std::cerr << "io error: " << e.what() << std::endl;
        return 4;
    } catch (const atlab::NotPositiveDefinite& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return 3;
    } catch (const atlab::Diverged& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return 3;
    } catch (const atlab::NoConvergence& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
