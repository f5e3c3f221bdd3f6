#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atlab/dataset.hpp"
#include "atlab/mlp.hpp"
#include "atlab/optimizers.hpp"

namespace atlab {

struct ExperimentRecord {
    std::string arch_tag;
    std::string optimizer_kind;
    double alpha = 0.0;
    long seed = 0;
    double robust_train_acc = 0.0;
    double robust_test_acc = 0.0;
    double clean_test_acc = 0.0;
    int epochs = 0;
    double wall_seconds = 0.0;
    std::string error;  // empty on success
};

struct TrainConfig {
    MlpSpec arch;
    std::string arch_tag = "mlp";
    std::string optimizer = "pgdat";  // sgd | pgdat | deat | heavy_ball
    double alpha = 0.1;               // alpha_O (and alpha_I unless overridden)
    double alpha_i = -1.0;            // < 0: use alpha
    int epochs = 30;
    int batch_size = 128;
    AttackSpec attack;
    double k1 = 1.0;
    double k2 = 0.8;
    double beta = 0.9;                // heavy_ball momentum
    double weight_decay = 5e-4;
};

struct TrainOutcome {
    Vec params;
    ExperimentRecord record;
};

// Trains one model and evaluates robust/clean accuracy. The batch sequence
// and initialization depend only on (seed), so optimizer variants with the
// same seed see identical data.
TrainOutcome train_single(const TrainConfig& cfg, const Dataset& train, const Dataset& test,
                          long seed);

struct SweepConfig {
    TwoGaussiansConfig dataset;
    TrainConfig base;                 // optimizer/alpha overridden per cell
    std::vector<std::string> optimizers{"pgdat", "deat"};
    std::vector<double> alphas{0.02, 0.05, 0.1, 0.2, 0.4};
    int seeds_per_cell = 3;
    long base_seed = 1;
    bool record_timing = false;       // keeps the persisted CSV byte-stable
    std::string out_dir = "runs";
};

SweepConfig sweep_config_from_json(const std::string& text);
std::string sweep_config_hash(const SweepConfig& cfg);

struct SweepResult {
    std::vector<ExperimentRecord> records;
    std::string run_dir;
};

// One cell per (optimizer, alpha, seed); cells run independently (OpenMP)
// and are persisted in deterministic cell order via temp-file + rename.
SweepResult run_sweep(const SweepConfig& cfg, int jobs = 0);

std::string records_to_csv(const std::vector<ExperimentRecord>& records);
std::string records_to_json(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> records_from_csv_file(const std::string& path);

void write_file_atomic(const std::string& path, const std::string& content);

// Fixed-point-free formatting shared by all persisted numbers: 6 significant
// digits, shortest form.
std::string format_number(double v);

}  // namespace atlab
