#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>

#include "qsvm/io.hpp"

namespace qsvm::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2, ///< configuration or data errors
};

/// Fully materialized experiment settings; written to config.json in every
/// output directory.
struct RunConfig {
    std::string command = "train"; ///< train | kernel-matrix | compare
    std::filesystem::path dataset;
    std::string positive_class = "versicolor";
    std::string negative_class = "virginica";
    double test_fraction = 0.3;
    std::uint64_t seed = 42;

    std::string model = "qk"; ///< qk | qv | qvk | classical
    /// Empty picks quantum_inversion (or quantum_swap) for qk and
    /// kernel-matrix, rbf for classical.
    std::string kernel;
    int degree = 2;
    double coef0 = 1.0;
    double gamma = 1.0;
    double sigmoid_slope = 1.0;
    double sigmoid_intercept = 0.0;
    int sigmoid_exponent = 1;
    bool swap_test = false;

    std::size_t layers = 3;
    double learning_rate = 0.3;
    std::size_t epochs = 60;
    std::size_t batch_size = 0;
    double init_scale = 1.0;
    bool refit_svm = false;

    double C = 1.0;
    double tolerance = 1e-3;
    std::size_t max_passes = 50;

    std::string scaling = "standardize"; ///< standardize | minmax
    double angle_scale = std::numbers::pi / 4;
    std::size_t rows = 0; ///< kernel-matrix: first N training rows, 0 = all

    std::filesystem::path out = "qsvm_out";

    /// Set when replaying a recorded run; the recomputed split must match it.
    std::optional<data::Split> expected_split;

    /// Fills the kernel default and checks enumerations. Throws ConfigError.
    void resolve();
};

io::Json to_json(const RunConfig &cfg);
RunConfig config_from_json(const io::Json &j);

/// Each writes its artifacts under cfg.out and throws on failure.
void run_train(const RunConfig &cfg);
void run_kernel_matrix(const RunConfig &cfg);
void run_compare(const RunConfig &cfg);

/// Dispatches on cfg.command and maps errors to exit codes with a single
/// diagnostic line on `err`.
int execute(RunConfig cfg, std::ostream &err);

/// Command-line entry point: train, kernel-matrix, compare, replay.
int main_entry(int argc, char **argv, std::ostream &out, std::ostream &err);

std::filesystem::path default_dataset();

} // namespace qsvm::cli
