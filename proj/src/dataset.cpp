#include "atlab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

namespace atlab {

namespace {

Dataset draw_split(const TwoGaussiansConfig& cfg, int n, RngStream& rng) {
    Dataset d;
    d.input_dim = cfg.dim;
    d.n_classes = 2;
    // fixed unit direction: first coordinate axis
    const double half = 0.5 * cfg.separation;
    // affine map: [-(half + 1.5), +(half + 1.5)] -> [0, 1], then clip
    const double span = 2.0 * (half + 1.5);
    const double lo = -(half + 1.5);
    for (int i = 0; i < n; ++i) {
        const int label = i % 2;  // balanced within +/- 1
        Vec x(cfg.dim);
        for (int j = 0; j < cfg.dim; ++j) x[j] = 0.5 * rng.normal();  // variance 0.25
        x[0] += (label == 0 ? -half : half);
        for (double& v : x) v = std::clamp((v - lo) / span, 0.0, 1.0);
        d.xs.push_back(std::move(x));
        d.ys.push_back(label);
    }
    return d;
}

std::uint32_t read_be_u32(std::istream& in, const std::string& path) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in) throw TruncatedFile("load_mnist_idx: truncated header in " + path);
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

}  // namespace

std::pair<Dataset, Dataset> gen_two_gaussians(const TwoGaussiansConfig& cfg, RngStream& rng) {
    if (cfg.separation <= 0.0) throw ConfigError("gen_two_gaussians: separation must be positive");
    if (cfg.n_train < 1) throw EmptySplit("gen_two_gaussians: n_train must be >= 1");
    if (cfg.n_test < 1) throw EmptySplit("gen_two_gaussians: n_test must be >= 1");
    Dataset train = draw_split(cfg, cfg.n_train, rng);
    Dataset test = draw_split(cfg, cfg.n_test, rng);
    return {std::move(train), std::move(test)};
}

Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                       const MnistSubset& subset) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw IoError("load_mnist_idx: cannot open " + images_path);
    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw IoError("load_mnist_idx: cannot open " + labels_path);

    const std::uint32_t img_magic = read_be_u32(img, images_path);
    if (img_magic != 0x00000803u)
        throw BadMagic("load_mnist_idx: bad image magic in " + images_path);
    const std::uint32_t lab_magic = read_be_u32(lab, labels_path);
    if (lab_magic != 0x00000801u)
        throw BadMagic("load_mnist_idx: bad label magic in " + labels_path);

    const std::uint32_t n_images = read_be_u32(img, images_path);
    const std::uint32_t rows = read_be_u32(img, images_path);
    const std::uint32_t cols = read_be_u32(img, images_path);
    const std::uint32_t n_labels = read_be_u32(lab, labels_path);
    if (n_images != n_labels)
        throw LabelImageCountMismatch("load_mnist_idx: image count " + std::to_string(n_images) +
                                      " != label count " + std::to_string(n_labels));

    const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
    std::vector<unsigned char> buf(pixels);
    std::vector<int> kept_per_class(10, 0);

    Dataset d;
    d.input_dim = static_cast<int>(pixels);
    d.n_classes = 10;
    for (std::uint32_t i = 0; i < n_images; ++i) {
        img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
        if (!img) throw TruncatedFile("load_mnist_idx: truncated image data in " + images_path);
        char lc;
        lab.read(&lc, 1);
        if (!lab) throw TruncatedFile("load_mnist_idx: truncated label data in " + labels_path);
        const int label = static_cast<unsigned char>(lc);

        if (!subset.classes.empty() &&
            std::find(subset.classes.begin(), subset.classes.end(), label) == subset.classes.end())
            continue;
        if (subset.max_per_class >= 0 && label < 10 && kept_per_class[label] >= subset.max_per_class)
            continue;
        if (label < 10) ++kept_per_class[label];

        Vec x(pixels);
        for (std::size_t p = 0; p < pixels; ++p) x[p] = static_cast<double>(buf[p]) / 255.0;
        d.xs.push_back(std::move(x));
        d.ys.push_back(label);
    }
    return d;
}

}  // namespace atlab
