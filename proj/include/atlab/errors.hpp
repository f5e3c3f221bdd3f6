#pragma once

#include <stdexcept>
#include <string>

namespace atlab {

struct NotPositiveDefinite : std::runtime_error {
    int pivot_index;
    explicit NotPositiveDefinite(int pivot, const std::string& what)
        : std::runtime_error(what), pivot_index(pivot) {}
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Diverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidConfidence : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateSeries : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BadMagic : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncatedFile : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LabelImageCountMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySplit : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace atlab
