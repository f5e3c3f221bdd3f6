#include "atlab/mlp.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace atlab {

int MlpSpec::param_count() const {
    int n = 0;
    for (std::size_t l = 0; l + 1 < layer_widths.size(); ++l)
        n += layer_widths[l] * layer_widths[l + 1] + layer_widths[l + 1];
    return n;
}

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
    if (spec_.layer_widths.size() < 2) throw ConfigError("Mlp: need at least input and output layers");
    for (int w : spec_.layer_widths)
        if (w < 1) throw ConfigError("Mlp: layer widths must be positive");
}

Vec Mlp::init_params(RngStream& rng) const {
    Vec params(param_count(), 0.0);
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < spec_.layer_widths.size(); ++l) {
        const int fan_in = spec_.layer_widths[l];
        const int fan_out = spec_.layer_widths[l + 1];
        const double scale = std::sqrt(2.0 / fan_in);
        for (int i = 0; i < fan_out * fan_in; ++i) params[off + i] = scale * rng.normal();
        off += static_cast<std::size_t>(fan_out) * fan_in + fan_out;  // biases stay zero
    }
    return params;
}

namespace {

double activate(double z, Activation a) {
    return a == Activation::Relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

// derivative in terms of pre-activation z (ReLU subgradient at 0 is 0)
double activate_deriv(double z, Activation a) {
    if (a == Activation::Relu) return z > 0.0 ? 1.0 : 0.0;
    const double t = std::tanh(z);
    return 1.0 - t * t;
}

Vec softmax(const Vec& logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    Vec p(logits.size());
    double s = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - m);
        s += p[i];
    }
    for (double& v : p) v /= s;
    return p;
}

struct ForwardPass {
    std::vector<Vec> pre;    // z per layer (1..L)
    std::vector<Vec> act;    // a per layer (0..L), act[L] == logits
};

ForwardPass run_forward(const MlpSpec& spec, const Vec& params, const Vec& x) {
    if (static_cast<int>(x.size()) != spec.input_dim())
        throw DimensionMismatch("Mlp::forward: input length mismatch");
    if (static_cast<int>(params.size()) != spec.param_count())
        throw DimensionMismatch("Mlp::forward: parameter length mismatch");
    const int layers = static_cast<int>(spec.layer_widths.size()) - 1;
    ForwardPass fp;
    fp.act.resize(layers + 1);
    fp.pre.resize(layers);
    fp.act[0] = x;
    std::size_t off = 0;
    for (int l = 0; l < layers; ++l) {
        const int in = spec.layer_widths[l];
        const int out = spec.layer_widths[l + 1];
        const double* w = params.data() + off;
        const double* b = params.data() + off + static_cast<std::size_t>(out) * in;
        Vec z(out);
        for (int i = 0; i < out; ++i) {
            double s = b[i];
            const double* wi = w + static_cast<std::size_t>(i) * in;
            for (int j = 0; j < in; ++j) s += wi[j] * fp.act[l][j];
            z[i] = s;
        }
        fp.pre[l] = z;
        if (l + 1 < layers) {
            Vec a(out);
            for (int i = 0; i < out; ++i) a[i] = activate(z[i], spec.activation);
            fp.act[l + 1] = std::move(a);
        } else {
            fp.act[l + 1] = std::move(z);
        }
        off += static_cast<std::size_t>(out) * in + out;
    }
    return fp;
}

// Backward pass; fills param_grad when non-null and returns the input gradient.
Vec run_backward(const MlpSpec& spec, const Vec& params, const ForwardPass& fp, int label,
                 Vec* param_grad) {
    const int layers = static_cast<int>(spec.layer_widths.size()) - 1;
    if (label < 0 || label >= spec.n_classes())
        throw DimensionMismatch("Mlp: label out of range");
    Vec dz = softmax(fp.act[layers]);
    dz[label] -= 1.0;

    if (param_grad) param_grad->assign(spec.param_count(), 0.0);
    std::vector<std::size_t> offsets(layers);
    {
        std::size_t off = 0;
        for (int l = 0; l < layers; ++l) {
            offsets[l] = off;
            off += static_cast<std::size_t>(spec.layer_widths[l + 1]) * spec.layer_widths[l] +
                   spec.layer_widths[l + 1];
        }
    }
    for (int l = layers - 1; l >= 0; --l) {
        const int in = spec.layer_widths[l];
        const int out = spec.layer_widths[l + 1];
        const double* w = params.data() + offsets[l];
        if (param_grad) {
            double* gw = param_grad->data() + offsets[l];
            double* gb = gw + static_cast<std::size_t>(out) * in;
            for (int i = 0; i < out; ++i) {
                const double d = dz[i];
                gb[i] = d;
                double* gwi = gw + static_cast<std::size_t>(i) * in;
                for (int j = 0; j < in; ++j) gwi[j] = d * fp.act[l][j];
            }
        }
        Vec da(in, 0.0);
        for (int i = 0; i < out; ++i) {
            const double d = dz[i];
            const double* wi = w + static_cast<std::size_t>(i) * in;
            for (int j = 0; j < in; ++j) da[j] += wi[j] * d;
        }
        if (l > 0) {
            dz.assign(in, 0.0);
            for (int j = 0; j < in; ++j)
                dz[j] = da[j] * activate_deriv(fp.pre[l - 1][j], spec.activation);
        } else {
            dz = std::move(da);
        }
    }
    return dz;  // gradient w.r.t. the input
}

}  // namespace

Mlp::ForwardResult Mlp::forward(const Vec& params, const Vec& x) const {
    const ForwardPass fp = run_forward(spec_, params, x);
    ForwardResult r;
    r.logits = fp.act.back();
    r.probs = softmax(r.logits);
    return r;
}

double Mlp::loss(const Vec& params, const Vec& x, int label) const {
    const ForwardResult r = forward(params, x);
    if (label < 0 || label >= spec_.n_classes())
        throw DimensionMismatch("Mlp::loss: label out of range");
    return -std::log(std::max(r.probs[label], 1e-300));
}

Vec Mlp::grad_params(const Vec& params, const Vec& x, int label) const {
    const ForwardPass fp = run_forward(spec_, params, x);
    Vec g;
    run_backward(spec_, params, fp, label, &g);
    return g;
}

Vec Mlp::grad_input(const Vec& params, const Vec& x, int label) const {
    const ForwardPass fp = run_forward(spec_, params, x);
    return run_backward(spec_, params, fp, label, nullptr);
}

int Mlp::predict(const Vec& params, const Vec& x) const {
    const ForwardResult r = forward(params, x);
    return static_cast<int>(std::max_element(r.logits.begin(), r.logits.end()) - r.logits.begin());
}

double clean_accuracy(const Mlp& net, const Vec& params, const Dataset& data) {
    if (data.size() == 0) return 0.0;
    long correct = 0;
#pragma omp parallel for reduction(+ : correct) schedule(static)
    for (long i = 0; i < static_cast<long>(data.size()); ++i)
        if (net.predict(params, data.xs[i]) == data.ys[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

namespace {

bool robust_correct(const Mlp& net, const Vec& params, const Vec& x, int y,
                    const AttackSpec& attack, const MlpOracle& oracle) {
    const SampleBatch one{{x, y}};
    const Vec delta = pgd_attack(oracle, params, one, attack);
    return net.predict(params, vadd(x, delta)) == y;
}

}  // namespace

double robust_accuracy(const Mlp& net, const Vec& params, const Dataset& data,
                       const AttackSpec& attack) {
    if (data.size() == 0) return 0.0;
    const MlpOracle oracle(net);
    long correct = 0;
#pragma omp parallel for reduction(+ : correct) schedule(dynamic, 16)
    for (long i = 0; i < static_cast<long>(data.size()); ++i)
        if (robust_correct(net, params, data.xs[i], data.ys[i], attack, oracle)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

double robust_accuracy_serial(const Mlp& net, const Vec& params, const Dataset& data,
                              const AttackSpec& attack) {
    if (data.size() == 0) return 0.0;
    const MlpOracle oracle(net);
    long correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (robust_correct(net, params, data.xs[i], data.ys[i], attack, oracle)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::vector<MlpLayer> unflatten_params(const MlpSpec& spec, const Vec& params) {
    if (static_cast<int>(params.size()) != spec.param_count())
        throw DimensionMismatch("unflatten_params: parameter length mismatch");
    std::vector<MlpLayer> layers;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < spec.layer_widths.size(); ++l) {
        const int in = spec.layer_widths[l];
        const int out = spec.layer_widths[l + 1];
        MlpLayer layer{Matrix(out, in), Vec(out)};
        for (int i = 0; i < out; ++i)
            for (int j = 0; j < in; ++j) layer.weight(i, j) = params[off + static_cast<std::size_t>(i) * in + j];
        off += static_cast<std::size_t>(out) * in;
        for (int i = 0; i < out; ++i) layer.bias[i] = params[off + i];
        off += out;
        layers.push_back(std::move(layer));
    }
    return layers;
}

Vec flatten_params(const MlpSpec& spec, const std::vector<MlpLayer>& layers) {
    Vec params;
    params.reserve(spec.param_count());
    for (const MlpLayer& layer : layers) {
        params.insert(params.end(), layer.weight.data().begin(), layer.weight.data().end());
        params.insert(params.end(), layer.bias.begin(), layer.bias.end());
    }
    if (static_cast<int>(params.size()) != spec.param_count())
        throw DimensionMismatch("flatten_params: layer shapes do not match spec");
    return params;
}

std::string checkpoint_to_json(const MlpSpec& spec, const Vec& params, std::uint64_t seed,
                               std::uint64_t stream) {
    nlohmann::json j;
    j["spec"]["layer_widths"] = spec.layer_widths;
    j["spec"]["activation"] = spec.activation == Activation::Relu ? "relu" : "tanh";
    j["params"] = params;
    j["rng_state"]["seed"] = seed;
    j["rng_state"]["stream"] = stream;
    return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Checkpoint c;
    c.spec.layer_widths = j.at("spec").at("layer_widths").get<std::vector<int>>();
    const std::string act = j.at("spec").at("activation").get<std::string>();
    if (act == "relu")
        c.spec.activation = Activation::Relu;
    else if (act == "tanh")
        c.spec.activation = Activation::Tanh;
    else
        throw ConfigError("checkpoint: unknown activation " + act);
    c.params = j.at("params").get<Vec>();
    c.seed = j.at("rng_state").at("seed").get<std::uint64_t>();
    c.stream = j.at("rng_state").at("stream").get<std::uint64_t>();
    if (static_cast<int>(c.params.size()) != c.spec.param_count())
        throw ConfigError("checkpoint: parameter count does not match spec");
    return c;
}

}  // namespace atlab
