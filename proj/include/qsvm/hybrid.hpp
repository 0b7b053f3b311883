#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qsvm/circuits.hpp"
#include "qsvm/svm.hpp"
#include "qsvm/variational.hpp"

namespace qsvm::hybrid {

/// Trainable-kernel classifier f(x) = sum_i w_i k_theta(X_i, x) + b.
struct QvkModel {
    circuits::AngleTensor theta;
    std::vector<double> weights;
    double bias = 0.0;
    Matrix train_X;
    std::vector<int> train_y;
    circuits::EmbeddingSpec emb;
    circuits::AnsatzSpec ansatz;

    /// Throws ConfigError/DataError when shapes disagree.
    void validate() const;
};

/// prob_all_zero of the hybrid kernel tape.
double qvk_kernel(std::span<const double> x1, std::span<const double> x2, const circuits::AngleTensor &theta,
                  const circuits::EmbeddingSpec &emb, const circuits::AnsatzSpec &ansatz);

/// Shift-rule gradient of qvk_kernel with respect to theta. Evaluates each
/// shifted circuit as an overlap of cached embedded states
/// |<V(x2)0|V(x1)0>|^2 instead of running the joined tape.
std::vector<double> qvk_kernel_gradient(std::span<const double> x1, std::span<const double> x2,
                                        const circuits::AngleTensor &theta, const circuits::EmbeddingSpec &emb,
                                        const circuits::AnsatzSpec &ansatz);

double qvk_score(const QvkModel &model, std::span<const double> x);

std::vector<double> qvk_scores(const QvkModel &model, const Matrix &X);

/// Mean hinge loss of qvk_score over a set.
double qvk_cost(const QvkModel &model, const Matrix &X, std::span<const int> y);

struct QvkGradient {
    std::vector<double> theta;
    std::vector<double> weights;
    double bias = 0.0;
};

/// Gradient of qvk_cost. Weights and bias are analytic; the angles use the
/// two-term shift rule summed over both occurrences of each parameter in
/// every kernel evaluation.
QvkGradient qvk_cost_gradient(const QvkModel &model, const Matrix &X, std::span<const int> y);

/// w_i = y_i / m, b = 0, angles from uniform(-init_scale, init_scale).
QvkModel init_qvk_model(const variational::LabeledSet &train, const variational::FitConfig &cfg);

/// Joint full-batch gradient descent on (theta, w, b). Batches of
/// cfg.batch_size select which samples enter the loss at each step.
std::pair<QvkModel, variational::TrainingTrace> train_qvk(const variational::LabeledSet &train,
                                                          const variational::LabeledSet &test,
                                                          const variational::FitConfig &cfg);

/// Runs an existing model through gradient descent for cfg.epochs.
variational::TrainingTrace continue_training(QvkModel &model, const variational::LabeledSet &test,
                                             const variational::FitConfig &cfg, bool train_theta = true);

/// Freezes theta and fits an SMO model on the trained kernel.
svm::SvmModel refit_svm(const QvkModel &model, const variational::LabeledSet &train, const svm::TrainConfig &cfg);

std::vector<int> predict_qvk(const QvkModel &model, const Matrix &X);

} // namespace qsvm::hybrid
