#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "qsvm/circuits.hpp"
#include "qsvm/matrix.hpp"

namespace qsvm::variational {

/// Gradient-descent settings shared by the variational and hybrid models.
struct FitConfig {
    double learning_rate = 0.3;
    std::size_t epochs = 60;
    std::size_t layers = 3;
    /// 0 means full batch.
    std::size_t batch_size = 0;
    std::uint64_t seed = 42;
    double init_scale = 1.0;

    void validate() const;
};

struct EpochRecord {
    double train_loss = 0.0;
    double test_loss = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
};

/// One record per completed epoch, taken after that epoch's update.
struct TrainingTrace {
    std::vector<EpochRecord> epochs;
};

/// Header `epoch,train_loss,test_loss,train_acc,test_acc`; epochs count from 1.
void write_trace_csv(std::ostream &out, const TrainingTrace &trace);

/// Samples with +1/-1 labels.
struct LabeledSet {
    Matrix X;
    std::vector<int> y;

    [[nodiscard]] std::size_t size() const noexcept { return X.rows(); }
    /// Throws DataError on an empty set, a row/label count mismatch, or a
    /// label other than +1/-1.
    void validate() const;
};

struct VarModel {
    circuits::AngleTensor theta;
    double bias = 0.0;
    circuits::EmbeddingSpec emb;
    circuits::AnsatzSpec ansatz;
};

/// <Z> on wire 0 after embedding and ansatz, plus the bias.
double qv_score(const VarModel &model, std::span<const double> x);

/// max(0, 1 - y * score).
double hinge_loss(int y, double score);

/// Mean hinge loss over the set.
double qv_cost(const VarModel &model, const Matrix &X, std::span<const int> y);

struct VarGradient {
    std::vector<double> theta;
    double bias = 0.0;
};

/// Gradient of qv_cost: parameter shift for the angles, the hinge
/// subgradient for the bias. Samples with y * score >= 1 contribute nothing.
VarGradient qv_cost_gradient(const VarModel &model, const Matrix &X, std::span<const int> y);

/// Angles drawn from uniform(-init_scale, init_scale) with cfg.seed; bias 0.
VarModel init_var_model(std::size_t n_features, const FitConfig &cfg);

std::pair<VarModel, TrainingTrace> train_qv(const LabeledSet &train, const LabeledSet &test, const FitConfig &cfg);

/// Predicted labels, sign(score) with ties to +1.
std::vector<int> predict_qv(const VarModel &model, const Matrix &X);

} // namespace qsvm::variational
