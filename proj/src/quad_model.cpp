#include "atlab/quad_model.hpp"

#include <nlohmann/json.hpp>

namespace atlab {

QuadraticRiskModel::QuadraticRiskModel(SpdMatrix hessian, SpdMatrix data_cov)
    : hessian_(std::move(hessian)), data_cov_(std::move(data_cov)) {
    if (hessian_.dim() != data_cov_.dim())
        throw DimensionMismatch("QuadraticRiskModel: hessian and data_cov dims differ");
    // strict PD check on A
    cholesky(hessian_);
    data_factor_ = psd_cholesky(data_cov_);
}

double QuadraticRiskModel::loss(const Vec& theta, const Vec& x) const {
    if (static_cast<int>(theta.size()) != dim() || static_cast<int>(x.size()) != dim())
        throw DimensionMismatch("loss: argument length does not match model dim");
    const Vec r = vsub(theta, x);
    return 0.5 * dot(r, hessian_.apply(r)) - hessian_.trace();
}

Vec QuadraticRiskModel::grad_theta(const Vec& theta, const Vec& x) const {
    if (static_cast<int>(theta.size()) != dim() || static_cast<int>(x.size()) != dim())
        throw DimensionMismatch("grad_theta: argument length does not match model dim");
    return hessian_.apply(vsub(theta, x));
}

Vec QuadraticRiskModel::grad_x(const Vec& theta, const Vec& x) const {
    if (static_cast<int>(theta.size()) != dim() || static_cast<int>(x.size()) != dim())
        throw DimensionMismatch("grad_x: argument length does not match model dim");
    return hessian_.apply(vsub(x, theta));
}

double QuadraticRiskModel::expected_risk(const Vec& theta) const {
    if (static_cast<int>(theta.size()) != dim())
        throw DimensionMismatch("expected_risk: argument length does not match model dim");
    return 0.5 * dot(theta, hessian_.apply(theta));
}

MiniBatch QuadraticRiskModel::draw_batch(int b, RngStream& rng) const {
    MiniBatch batch;
    batch.samples.reserve(b);
    const int n = dim();
    for (int s = 0; s < b; ++s) {
        Vec z(n);
        for (int i = 0; i < n; ++i) z[i] = rng.normal();
        Vec x(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j <= i; ++j) acc += data_factor_(i, j) * z[j];
            x[i] = acc;
        }
        batch.samples.push_back(std::move(x));
    }
    return batch;
}

Vec QuadraticRiskModel::minibatch_grad(const Vec& theta, const MiniBatch& batch) const {
    if (batch.samples.empty()) throw DimensionMismatch("minibatch_grad: empty batch");
    Vec g(dim(), 0.0);
    for (const Vec& x : batch.samples) axpy(1.0, grad_theta(theta, x), g);
    for (double& v : g) v /= static_cast<double>(batch.batch_size());
    return g;
}

std::string QuadraticRiskModel::to_json() const {
    nlohmann::json j;
    j["dim"] = dim();
    j["hessian"] = hessian_.as_matrix().data();
    j["data_cov"] = data_cov_.as_matrix().data();
    return j.dump(2);
}

QuadraticRiskModel QuadraticRiskModel::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const int d = j.at("dim").get<int>();
    // accept either a flat row-major array or a list of row arrays
    auto entries = [](const nlohmann::json& m) {
        std::vector<double> v;
        for (const auto& e : m)
            if (e.is_array())
                for (const auto& x : e) v.push_back(x.get<double>());
            else
                v.push_back(e.get<double>());
        return v;
    };
    return QuadraticRiskModel(SpdMatrix(d, entries(j.at("hessian"))),
                              SpdMatrix(d, entries(j.at("data_cov"))));
}

}  // namespace atlab
