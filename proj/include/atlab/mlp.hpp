#pragma once

#include <string>
#include <vector>

#include "atlab/oracle.hpp"
#include "atlab/optimizers.hpp"
#include "atlab/rng.hpp"
#include "atlab/vec.hpp"

namespace atlab {

enum class Activation { Relu, Tanh };

struct MlpSpec {
    std::vector<int> layer_widths;   // input ... output (>= 2 entries)
    Activation activation = Activation::Relu;

    int input_dim() const { return layer_widths.front(); }
    int n_classes() const { return layer_widths.back(); }
    int param_count() const;
};

// Flattened parameter layout: per layer, weight matrix row-major
// (out x in) followed by the bias vector.
class Mlp {
public:
    explicit Mlp(MlpSpec spec);

    const MlpSpec& spec() const { return spec_; }
    int param_count() const { return spec_.param_count(); }

    Vec init_params(RngStream& rng) const;  // He-style N(0, 2/fan_in) weights, zero bias

    struct ForwardResult {
        Vec logits;
        Vec probs;
    };
    ForwardResult forward(const Vec& params, const Vec& x) const;
    double loss(const Vec& params, const Vec& x, int label) const;  // softmax cross-entropy
    Vec grad_params(const Vec& params, const Vec& x, int label) const;
    Vec grad_input(const Vec& params, const Vec& x, int label) const;
    int predict(const Vec& params, const Vec& x) const;

private:
    MlpSpec spec_;
};

class MlpOracle final : public GradientOracle {
public:
    explicit MlpOracle(const Mlp& net) : net_(net) {}
    int param_dim() const override { return net_.param_count(); }
    int input_dim() const override { return net_.spec().input_dim(); }
    double loss(const Vec& theta, const Vec& x, int label) const override {
        return net_.loss(theta, x, label);
    }
    Vec grad_theta(const Vec& theta, const Vec& x, int label) const override {
        return net_.grad_params(theta, x, label);
    }
    Vec grad_input(const Vec& theta, const Vec& x, int label) const override {
        return net_.grad_input(theta, x, label);
    }

private:
    const Mlp& net_;
};

struct MlpLayer {
    Matrix weight;  // out x in
    Vec bias;
};

std::vector<MlpLayer> unflatten_params(const MlpSpec& spec, const Vec& params);
Vec flatten_params(const MlpSpec& spec, const std::vector<MlpLayer>& layers);

struct Dataset {
    std::vector<Vec> xs;
    std::vector<int> ys;
    int input_dim = 0;
    int n_classes = 0;
    std::size_t size() const { return xs.size(); }
};

double clean_accuracy(const Mlp& net, const Vec& params, const Dataset& data);

// Fraction of samples still classified correctly after a per-sample PGD
// attack (batch-size-1 inner loop, linf projection).
double robust_accuracy(const Mlp& net, const Vec& params, const Dataset& data,
                       const AttackSpec& attack);
double robust_accuracy_serial(const Mlp& net, const Vec& params, const Dataset& data,
                              const AttackSpec& attack);

// Checkpoint: JSON {spec, params, rng_state}.
std::string checkpoint_to_json(const MlpSpec& spec, const Vec& params, std::uint64_t seed,
                               std::uint64_t stream);
struct Checkpoint {
    MlpSpec spec;
    Vec params;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};
Checkpoint checkpoint_from_json(const std::string& text);

}  // namespace atlab
