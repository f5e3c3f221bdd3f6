#include "atlab/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace atlab {

namespace fs = std::filesystem;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

namespace {

AttackSpec attack_from_json(const nlohmann::json& j) {
    AttackSpec a;
    if (j.contains("budget")) {
        const std::string b = j.at("budget").get<std::string>();
        if (b == "linf") a.budget = BudgetKind::LinfBall;
        else if (b == "lagrange") a.budget = BudgetKind::Lagrange;
        else throw ConfigError("attack.budget must be linf or lagrange");
    }
    if (j.contains("eps")) a.eps = j.at("eps").get<double>();
    if (j.contains("steps")) a.steps = j.at("steps").get<int>();
    if (j.contains("K")) a.steps = j.at("K").get<int>();
    if (j.contains("inner_rate")) a.inner_rate = j.at("inner_rate").get<double>();
    if (j.contains("lambda")) a.lambda = j.at("lambda").get<double>();
    if (j.contains("p")) {
        const auto& p = j.at("p");
        if (p.is_string()) a.p = 0;  // "inf"
        else a.p = p.get<int>();
    }
    if (j.contains("sign_ascent")) a.sign_ascent = j.at("sign_ascent").get<bool>();
    return a;
}

}  // namespace

SweepConfig sweep_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("sweep config: ") + e.what());
    }
    SweepConfig cfg;
    if (j.contains("dataset")) {
        const auto& d = j.at("dataset");
        if (d.contains("dim")) cfg.dataset.dim = d.at("dim").get<int>();
        if (d.contains("separation")) cfg.dataset.separation = d.at("separation").get<double>();
        if (d.contains("n_train")) cfg.dataset.n_train = d.at("n_train").get<int>();
        if (d.contains("n_test")) cfg.dataset.n_test = d.at("n_test").get<int>();
    }
    if (j.contains("arch")) {
        const auto& a = j.at("arch");
        cfg.base.arch.layer_widths = a.at("layer_widths").get<std::vector<int>>();
        if (a.contains("activation"))
            cfg.base.arch.activation =
                a.at("activation").get<std::string>() == "tanh" ? Activation::Tanh : Activation::Relu;
        if (a.contains("tag")) cfg.base.arch_tag = a.at("tag").get<std::string>();
    } else {
        cfg.base.arch.layer_widths = {cfg.dataset.dim, 32, 32, 2};
    }
    if (j.contains("optimizers")) cfg.optimizers = j.at("optimizers").get<std::vector<std::string>>();
    if (j.contains("alphas")) cfg.alphas = j.at("alphas").get<std::vector<double>>();
    if (j.contains("seeds_per_cell")) cfg.seeds_per_cell = j.at("seeds_per_cell").get<int>();
    if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<long>();
    if (j.contains("epochs")) cfg.base.epochs = j.at("epochs").get<int>();
    if (j.contains("batch_size")) cfg.base.batch_size = j.at("batch_size").get<int>();
    if (j.contains("attack")) cfg.base.attack = attack_from_json(j.at("attack"));
    if (j.contains("k1")) cfg.base.k1 = j.at("k1").get<double>();
    if (j.contains("k2")) cfg.base.k2 = j.at("k2").get<double>();
    if (j.contains("beta")) cfg.base.beta = j.at("beta").get<double>();
    if (j.contains("weight_decay")) cfg.base.weight_decay = j.at("weight_decay").get<double>();
    if (j.contains("record_timing")) cfg.record_timing = j.at("record_timing").get<bool>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (cfg.base.arch.layer_widths.front() != cfg.dataset.dim)
        throw ConfigError("sweep config: arch input width does not match dataset dim");
    return cfg;
}

std::string sweep_config_hash(const SweepConfig& cfg) {
    std::ostringstream os;
    os << cfg.dataset.dim << '|' << cfg.dataset.separation << '|' << cfg.dataset.n_train << '|'
       << cfg.dataset.n_test << '|' << cfg.base.epochs << '|' << cfg.base.batch_size << '|'
       << cfg.base.attack.steps << '|' << cfg.base.attack.eps << '|' << cfg.base.attack.inner_rate
       << '|' << cfg.base.k1 << '|' << cfg.base.k2 << '|' << cfg.base.weight_decay << '|'
       << cfg.seeds_per_cell << '|' << cfg.base_seed;
    for (int w : cfg.base.arch.layer_widths) os << 'w' << w;
    for (const std::string& o : cfg.optimizers) os << 'o' << o;
    for (double a : cfg.alphas) os << 'a' << a;
    // FNV-1a
    std::uint64_t h = 1469598103934665603ull;
    for (char c : os.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

TrainOutcome train_single(const TrainConfig& cfg, const Dataset& train, const Dataset& test,
                          long seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const Mlp net(cfg.arch);
    RngStream init_rng(static_cast<std::uint64_t>(seed), 1);
    RngStream batch_rng(static_cast<std::uint64_t>(seed), 2);

    Vec params = net.init_params(init_rng);
    const MlpOracle oracle(net);

    AttackSpec train_attack = cfg.attack;
    if (cfg.alpha_i > 0.0) train_attack.inner_rate = cfg.alpha_i;

    const int b = cfg.batch_size;
    const long steps_per_epoch = std::max<long>(1, static_cast<long>(train.size()) / b);

    Vec h_prev(params.size(), 0.0), h_prev2(params.size(), 0.0), momentum(params.size(), 0.0);
    const double rescale =
        cfg.alpha / std::sqrt((1.0 + cfg.k1) * (1.0 + cfg.k1) + cfg.k1 * cfg.k1);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (long s = 0; s < steps_per_epoch; ++s) {
            SampleBatch batch;
            batch.reserve(b);
            for (int i = 0; i < b; ++i) {
                const std::size_t idx = batch_rng.next_u64() % train.size();
                batch.push_back({train.xs[idx], train.ys[idx]});
            }
            Vec g = adversarial_grad(oracle, params, batch, train_attack);
            if (cfg.weight_decay != 0.0) axpy(cfg.weight_decay, params, g);

            if (cfg.optimizer == "sgd") {
                axpy(-cfg.alpha, g, params);
            } else if (cfg.optimizer == "pgdat") {
                axpy(-cfg.alpha, g, params);
            } else if (cfg.optimizer == "heavy_ball") {
                auto [next, d] = heavy_ball_step(params, momentum, g, cfg.alpha, cfg.beta);
                params = std::move(next);
                momentum = std::move(d);
            } else if (cfg.optimizer == "deat") {
                Vec h = scaled(h_prev2, cfg.k2);
                axpy(1.0 - cfg.k2, g, h);
                Vec dir = scaled(h, 1.0 + cfg.k1);
                axpy(-cfg.k1, h_prev, dir);
                axpy(-rescale, dir, params);
                h_prev2 = std::move(h_prev);
                h_prev = std::move(h);
            } else {
                throw ConfigError("train_single: unknown optimizer " + cfg.optimizer);
            }
        }
    }

    const AttackSpec eval_attack = cfg.attack;

    TrainOutcome out;
    out.record.arch_tag = cfg.arch_tag;
    out.record.optimizer_kind = cfg.optimizer;
    out.record.alpha = cfg.alpha;
    out.record.seed = seed;
    out.record.epochs = cfg.epochs;
    out.record.robust_train_acc = robust_accuracy(net, params, train, eval_attack);
    out.record.robust_test_acc = robust_accuracy(net, params, test, eval_attack);
    out.record.clean_test_acc = clean_accuracy(net, params, test);
    out.record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.params = std::move(params);
    return out;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
    std::ostringstream os;
    os << "arch,optimizer,alpha,seed,robust_train_acc,robust_test_acc,clean_test_acc,epochs,"
          "wall_seconds\n";
    for (const ExperimentRecord& r : records) {
        if (!r.error.empty()) continue;  // failures live in the JSON
        os << r.arch_tag << ',' << r.optimizer_kind << ',' << format_number(r.alpha) << ','
           << r.seed << ',' << format_number(r.robust_train_acc) << ','
           << format_number(r.robust_test_acc) << ',' << format_number(r.clean_test_acc) << ','
           << r.epochs << ',' << format_number(r.wall_seconds) << '\n';
    }
    return os.str();
}

std::string records_to_json(const std::vector<ExperimentRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ExperimentRecord& r : records) {
        nlohmann::json j;
        j["arch"] = r.arch_tag;
        j["optimizer"] = r.optimizer_kind;
        j["alpha"] = r.alpha;
        j["seed"] = r.seed;
        j["robust_train_acc"] = r.robust_train_acc;
        j["robust_test_acc"] = r.robust_test_acc;
        j["clean_test_acc"] = r.clean_test_acc;
        j["epochs"] = r.epochs;
        j["wall_seconds"] = r.wall_seconds;
        if (!r.error.empty()) j["error"] = r.error;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

std::vector<ExperimentRecord> records_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("records_from_csv_file: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("records_from_csv_file: empty file " + path);
    std::vector<ExperimentRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        ExperimentRecord r;
        std::getline(ls, r.arch_tag, ',');
        std::getline(ls, r.optimizer_kind, ',');
        std::getline(ls, field, ',');
        r.alpha = std::stod(field);
        std::getline(ls, field, ',');
        r.seed = std::stol(field);
        std::getline(ls, field, ',');
        r.robust_train_acc = std::stod(field);
        std::getline(ls, field, ',');
        r.robust_test_acc = std::stod(field);
        std::getline(ls, field, ',');
        r.clean_test_acc = std::stod(field);
        std::getline(ls, field, ',');
        r.epochs = std::stoi(field);
        std::getline(ls, field, ',');
        r.wall_seconds = std::stod(field);
        records.push_back(std::move(r));
    }
    return records;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("write_file_atomic: cannot open " + tmp);
        out << content;
        if (!out) throw IoError("write_file_atomic: write failed for " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("write_file_atomic: rename failed for " + path + ": " + ec.message());
}

SweepResult run_sweep(const SweepConfig& cfg, int jobs) {
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
    RngStream data_rng(static_cast<std::uint64_t>(cfg.base_seed), 9001);
    const auto [train, test] = gen_two_gaussians(cfg.dataset, data_rng);

    struct Cell {
        std::string optimizer;
        double alpha;
        long seed;
    };
    std::vector<Cell> cells;
    for (const std::string& opt : cfg.optimizers)
        for (double alpha : cfg.alphas)
            for (int s = 0; s < cfg.seeds_per_cell; ++s)
                cells.push_back({opt, alpha, cfg.base_seed + s});

    std::vector<ExperimentRecord> records(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(cells.size()); ++i) {
        TrainConfig tc = cfg.base;
        tc.optimizer = cells[i].optimizer;
        tc.alpha = cells[i].alpha;
        try {
            records[i] = train_single(tc, train, test, cells[i].seed).record;
        } catch (const std::exception& e) {
            records[i].arch_tag = tc.arch_tag;
            records[i].optimizer_kind = tc.optimizer;
            records[i].alpha = tc.alpha;
            records[i].seed = cells[i].seed;
            records[i].error = e.what();
        }
        if (!cfg.record_timing) records[i].wall_seconds = 0.0;
    }

    SweepResult result;
    result.records = std::move(records);
    result.run_dir = cfg.out_dir + "/" + sweep_config_hash(cfg);
    fs::create_directories(result.run_dir);
    write_file_atomic(result.run_dir + "/records.csv", records_to_csv(result.records));
    write_file_atomic(result.run_dir + "/records.json", records_to_json(result.records));
    return result;
}

}  // namespace atlab
