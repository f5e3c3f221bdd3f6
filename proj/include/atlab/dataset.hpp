#pragma once

#include <string>
#include <utility>

#include "atlab/mlp.hpp"
#include "atlab/rng.hpp"

namespace atlab {

struct TwoGaussiansConfig {
    int dim = 10;
    double separation = 4.0;
    int n_train = 2000;
    int n_test = 1000;
};

// Two classes at +/- separation/2 along a fixed unit direction, isotropic
// variance 0.25, affinely mapped and clipped into [0,1]^d. Labels balanced
// within +/- 1 in both splits.
std::pair<Dataset, Dataset> gen_two_gaussians(const TwoGaussiansConfig& cfg, RngStream& rng);

struct MnistSubset {
    std::vector<int> classes;     // empty: keep all
    int max_per_class = -1;       // -1: no cap
};

// IDX pair (big-endian, magic 0x00000803 images / 0x00000801 labels),
// pixels scaled to [0,1].
Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                       const MnistSubset& subset = {});

}  // namespace atlab
