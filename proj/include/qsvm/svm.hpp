#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qsvm/kernels.hpp"
#include "qsvm/matrix.hpp"

namespace qsvm::svm {

/// Alphas above this count as support vectors.
inline constexpr double kSupportThreshold = 1e-8;

struct TrainConfig {
    double C = 1.0;
    double tolerance = 1e-3;
    std::size_t max_passes = 50;
    std::uint64_t seed = 42;
    /// Hard cap on sweeps over the training set.
    std::size_t max_sweeps = 20000;

    void validate() const;
};

/// Soft-margin kernel SVM in dual form.
struct SvmModel {
    std::vector<double> alphas;
    double bias = 0.0;
    std::vector<int> labels;
    std::vector<std::size_t> support_indices;
    double C = 1.0;
    kernels::KernelSpec kernel;
    Matrix training_X;
    std::vector<std::string> warnings;
};

/// Called with the full alpha vector after every accepted pairwise update.
using UpdateObserver = std::function<void(std::span<const double>)>;

/// Simplified SMO on a precomputed Gram matrix. The returned model carries
/// alphas, bias, labels and support indices; kernel and training_X are left
/// for the caller (see fit).
SvmModel smo_train(const kernels::GramMatrix &gram, std::span<const int> labels, const TrainConfig &cfg,
                   const UpdateObserver &observer = {});

/// Gram assembly plus smo_train, with kernel and samples attached.
SvmModel fit(const Matrix &samples, std::span<const int> labels, const kernels::KernelSpec &kernel,
             const TrainConfig &cfg);

/// sum over support vectors of alpha_i y_i k_row[i], plus bias, where
/// k_row[i] = k(X_i, x) for every training sample i.
double decision_from_kernel_row(const SvmModel &model, std::span<const double> kernel_row);

double decision_function(const SvmModel &model, std::span<const double> x);

/// +1 for f >= 0, else -1.
int sign_label(double decision);

int predict(const SvmModel &model, std::span<const double> x);

/// sum alpha - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const kernels::GramMatrix &gram, std::span<const int> labels, std::span<const double> alphas);

struct KktReport {
    double worst_violation = 0.0;
    std::size_t violations = 0;
};

/// KKT residuals of a trained model against its own Gram matrix at tolerance tau.
KktReport check_kkt(const kernels::GramMatrix &gram, const SvmModel &model, double tau);

} // namespace qsvm::svm
