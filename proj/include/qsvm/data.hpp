#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "qsvm/matrix.hpp"

namespace qsvm::data {

inline constexpr const char *kIrisHeader = "sepal_length,sepal_width,petal_length,petal_width,species";

/// Samples with their species names and, after select_binary, +1/-1 labels.
struct Dataset {
    Matrix X;
    std::vector<std::string> species;
    std::vector<int> y;

    [[nodiscard]] std::size_t size() const noexcept { return X.rows(); }
};

/// Reads an Iris-format CSV. Throws IngestionError naming the file and line.
Dataset load_iris(const std::filesystem::path &path);

/// Keeps rows of the two species; `positive` maps to +1, `negative` to -1.
Dataset select_binary(const Dataset &ds, const std::string &positive, const std::string &negative);

/// Train/test index manifest.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
    double test_fraction = 0.0;
};

/// Stratified by label: floor(fraction * class size) test rows per class,
/// picked by a seeded shuffle. Index lists are returned sorted.
Split split(const Dataset &ds, double test_fraction, std::uint64_t seed);

Dataset subset(const Dataset &ds, const std::vector<std::size_t> &indices);

enum class ScalingMode {
    Standardize, ///< (x - mean) / std, times angle_scale
    MinMax,      ///< affine map of the training range onto [0, pi]
};

/// Per-feature statistics fitted on a training split.
struct Scaler {
    ScalingMode mode = ScalingMode::Standardize;
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<double> minimum;
    std::vector<double> maximum;
    double angle_scale = 0.0;
};

/// Throws DataError on an empty split or a constant feature.
Scaler fit_scaler(const Matrix &train, ScalingMode mode = ScalingMode::Standardize,
                  double angle_scale = std::numbers::pi / 4);

Matrix apply_scaler(const Scaler &scaler, const Matrix &X);

} // namespace qsvm::data
