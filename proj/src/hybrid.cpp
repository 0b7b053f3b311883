#include "qsvm/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "qsvm/autodiff.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/metrics.hpp"
#include "qsvm/parallel.hpp"

namespace qsvm::hybrid {

namespace {

using circuits::AngleTensor;
using circuits::AnsatzSpec;
using circuits::EmbeddingSpec;

// V(x; theta)|0...0> and, optionally, the same state with each parameter
// shifted by +-pi/2.
struct EmbeddedState {
    std::vector<sim::StateVector> base; // exactly one entry
    std::vector<sim::StateVector> plus;
    std::vector<sim::StateVector> minus;

    [[nodiscard]] const sim::StateVector &state() const { return base.front(); }
};

EmbeddedState embed(std::span<const double> x, const AngleTensor &theta, const EmbeddingSpec &emb,
                    const AnsatzSpec &ansatz, bool with_shifts) {
    const auto tape = circuits::variational_tape(x, emb, ansatz);
    const auto params = theta.flat();
    EmbeddedState out;
    out.base.push_back(sim::apply_tape(sim::init_state(tape.n_qubits()), tape, params));
    if (!with_shifts) {
        return out;
    }
    const auto occurrences = autodiff::shiftable_occurrences(tape);
    out.plus.assign(theta.size(), out.state());
    out.minus.assign(theta.size(), out.state());
    constexpr double kShift = std::numbers::pi / 2;
    for (const auto &occ : occurrences) {
        // Each ansatz parameter is bound exactly once, with sign +1, in V.
        out.plus[occ.slot] =
            sim::apply_tape(sim::init_state(tape.n_qubits()), tape, params, sim::AngleShift{occ.gate, occ.angle, kShift});
        out.minus[occ.slot] = sim::apply_tape(sim::init_state(tape.n_qubits()), tape, params,
                                              sim::AngleShift{occ.gate, occ.angle, -kShift});
    }
    return out;
}

std::vector<EmbeddedState> embed_all(const Matrix &X, const AngleTensor &theta, const EmbeddingSpec &emb,
                                     const AnsatzSpec &ansatz, bool with_shifts) {
    std::vector<EmbeddedState> out(X.rows());
    parallel_for(X.rows(), [&](std::size_t i) { out[i] = embed(X.row(i), theta, emb, ansatz, with_shifts); });
    return out;
}

double overlap(const sim::StateVector &a, const sim::StateVector &b) { return std::norm(sim::inner_product(a, b)); }

// d k(a, b) / d theta_j accumulated into `out` with weight `scale`. The
// direct half of the tape shifts the state of a; the adjoint half shifts b.
void accumulate_kernel_gradient(const EmbeddedState &a, const EmbeddedState &b, double scale,
                                std::span<double> out) {
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double direct = overlap(b.state(), a.plus[j]) - overlap(b.state(), a.minus[j]);
        const double adjoint = overlap(b.plus[j], a.state()) - overlap(b.minus[j], a.state());
        out[j] += scale * 0.5 * (direct + adjoint);
    }
}

void check_features(const QvkModel &model, std::size_t n_features) {
    if (n_features != model.emb.n_features) {
        throw DataError("sample has " + std::to_string(n_features) + " features, model expects " +
                        std::to_string(model.emb.n_features));
    }
}

std::vector<double> scores_from_states(const QvkModel &model, const std::vector<EmbeddedState> &train_states,
                                       const std::vector<EmbeddedState> &states) {
    std::vector<double> out(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
        double f = model.bias;
        for (std::size_t i = 0; i < train_states.size(); ++i) {
            f += model.weights[i] * overlap(states[s].state(), train_states[i].state());
        }
        out[s] = f;
    }
    return out;
}

double mean_hinge(std::span<const double> scores, std::span<const int> y) {
    double total = 0.0;
    for (std::size_t s = 0; s < scores.size(); ++s) {
        total += variational::hinge_loss(y[s], scores[s]);
    }
    return total / static_cast<double>(scores.size());
}

std::vector<int> labels_from(std::span<const double> scores) {
    std::vector<int> out(scores.size());
    std::transform(scores.begin(), scores.end(), out.begin(), [](double f) { return f >= 0.0 ? 1 : -1; });
    return out;
}

} // namespace

void QvkModel::validate() const {
    ansatz.validate();
    if (!theta.matches(ansatz)) {
        throw ConfigError("hybrid angles do not match the ansatz shape");
    }
    if (emb.n_features != ansatz.n_qubits) {
        throw ConfigError("embedding and ansatz disagree on the qubit count");
    }
    if (weights.size() != train_X.rows() || train_y.size() != train_X.rows()) {
        throw DataError("hybrid model needs one weight and one label per retained sample");
    }
    if (train_X.rows() > 0 && train_X.cols() != emb.n_features) {
        throw DataError("retained samples do not match the embedding width");
    }
}

double qvk_kernel(std::span<const double> x1, std::span<const double> x2, const AngleTensor &theta,
                  const EmbeddingSpec &emb, const AnsatzSpec &ansatz) {
    if (!theta.matches(ansatz)) {
        throw ConfigError("hybrid angles do not match the ansatz shape");
    }
    const auto tape = circuits::hybrid_kernel_tape(x1, x2, emb, ansatz);
    return autodiff::evaluate(tape, theta.flat(), autodiff::Observable::AllZeroProjector);
}

std::vector<double> qvk_kernel_gradient(std::span<const double> x1, std::span<const double> x2,
                                        const AngleTensor &theta, const EmbeddingSpec &emb,
                                        const AnsatzSpec &ansatz) {
    if (!theta.matches(ansatz)) {
        throw ConfigError("hybrid angles do not match the ansatz shape");
    }
    if (x1.size() != x2.size()) {
        throw DataError("kernel arguments differ in length");
    }
    const auto a = embed(x1, theta, emb, ansatz, true);
    const auto b = embed(x2, theta, emb, ansatz, true);
    std::vector<double> gradient(theta.size(), 0.0);
    accumulate_kernel_gradient(a, b, 1.0, gradient);
    return gradient;
}

double qvk_score(const QvkModel &model, std::span<const double> x) {
    model.validate();
    check_features(model, x.size());
    const auto target = embed(x, model.theta, model.emb, model.ansatz, false);
    double f = model.bias;
    for (std::size_t i = 0; i < model.train_X.rows(); ++i) {
        const auto source = embed(model.train_X.row(i), model.theta, model.emb, model.ansatz, false);
        f += model.weights[i] * overlap(target.state(), source.state());
    }
    return f;
}

std::vector<double> qvk_scores(const QvkModel &model, const Matrix &X) {
    model.validate();
    check_features(model, X.cols());
    const auto train_states = embed_all(model.train_X, model.theta, model.emb, model.ansatz, false);
    const auto states = embed_all(X, model.theta, model.emb, model.ansatz, false);
    return scores_from_states(model, train_states, states);
}

double qvk_cost(const QvkModel &model, const Matrix &X, std::span<const int> y) {
    if (X.rows() == 0 || X.rows() != y.size()) {
        throw DataError("cost needs a nonempty set with one label per row");
    }
    return mean_hinge(qvk_scores(model, X), y);
}

QvkGradient qvk_cost_gradient(const QvkModel &model, const Matrix &X, std::span<const int> y) {
    if (X.rows() == 0 || X.rows() != y.size()) {
        throw DataError("gradient needs a nonempty set with one label per row");
    }
    model.validate();
    check_features(model, X.cols());
    const auto train_states = embed_all(model.train_X, model.theta, model.emb, model.ansatz, true);
    const auto states = embed_all(X, model.theta, model.emb, model.ansatz, true);
    const auto scores = scores_from_states(model, train_states, states);

    const std::size_t m = X.rows();
    const std::size_t n_train = model.train_X.rows();
    const double scale = 1.0 / static_cast<double>(m);

    // Per-sample contributions, reduced below in sample order.
    std::vector<std::vector<double>> theta_parts(m);
    parallel_for(m, [&](std::size_t s) {
        if (y[s] * scores[s] >= 1.0) {
            return;
        }
        theta_parts[s].assign(model.theta.size(), 0.0);
        for (std::size_t i = 0; i < n_train; ++i) {
            accumulate_kernel_gradient(train_states[i], states[s], model.weights[i], theta_parts[s]);
        }
    });

    QvkGradient g;
    g.theta.assign(model.theta.size(), 0.0);
    g.weights.assign(n_train, 0.0);
    for (std::size_t s = 0; s < m; ++s) {
        if (theta_parts[s].empty()) {
            continue;
        }
        const double factor = -scale * y[s];
        for (std::size_t j = 0; j < g.theta.size(); ++j) {
            g.theta[j] += factor * theta_parts[s][j];
        }
        for (std::size_t i = 0; i < n_train; ++i) {
            g.weights[i] += factor * overlap(states[s].state(), train_states[i].state());
        }
        g.bias += factor;
    }
    return g;
}

QvkModel init_qvk_model(const variational::LabeledSet &train, const variational::FitConfig &cfg) {
    cfg.validate();
    train.validate();
    const auto var = variational::init_var_model(train.X.cols(), cfg);
    QvkModel model;
    model.theta = var.theta;
    model.emb = var.emb;
    model.ansatz = var.ansatz;
    model.train_X = train.X;
    model.train_y = train.y;
    model.bias = 0.0;
    const double m = static_cast<double>(train.size());
    for (const int label : train.y) {
        model.weights.push_back(label / m);
    }
    return model;
}

variational::TrainingTrace continue_training(QvkModel &model, const variational::LabeledSet &test,
                                             const variational::FitConfig &cfg, bool train_theta) {
    cfg.validate();
    model.validate();
    test.validate();
    const std::size_t m = model.train_X.rows();
    std::mt19937_64 batch_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = (cfg.batch_size == 0 || cfg.batch_size >= m) ? m : cfg.batch_size;

    variational::TrainingTrace trace;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (batch < m) {
            std::shuffle(order.begin(), order.end(), batch_rng);
        }
        for (std::size_t start = 0; start < m; start += batch) {
            const std::size_t stop = std::min(m, start + batch);
            const std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                order.begin() + static_cast<std::ptrdiff_t>(stop));
            std::vector<int> labels;
            for (const auto r : rows) {
                labels.push_back(model.train_y[r]);
            }
            const auto g = qvk_cost_gradient(model, select_rows(model.train_X, rows), labels);
            if (train_theta) {
                auto theta = model.theta.flat();
                for (std::size_t j = 0; j < theta.size(); ++j) {
                    theta[j] -= cfg.learning_rate * g.theta[j];
                }
            }
            for (std::size_t i = 0; i < m; ++i) {
                model.weights[i] -= cfg.learning_rate * g.weights[i];
            }
            model.bias -= cfg.learning_rate * g.bias;
        }

        const auto train_states = embed_all(model.train_X, model.theta, model.emb, model.ansatz, false);
        const auto test_states = embed_all(test.X, model.theta, model.emb, model.ansatz, false);
        const auto train_scores = scores_from_states(model, train_states, train_states);
        const auto test_scores = scores_from_states(model, train_states, test_states);
        variational::EpochRecord r;
        r.train_loss = mean_hinge(train_scores, model.train_y);
        r.test_loss = mean_hinge(test_scores, test.y);
        r.train_accuracy = metrics::accuracy(model.train_y, labels_from(train_scores));
        r.test_accuracy = metrics::accuracy(test.y, labels_from(test_scores));
        trace.epochs.push_back(r);
    }
    return trace;
}

std::pair<QvkModel, variational::TrainingTrace> train_qvk(const variational::LabeledSet &train,
                                                          const variational::LabeledSet &test,
                                                          const variational::FitConfig &cfg) {
    if (test.X.cols() != train.X.cols()) {
        throw DataError("train and test feature counts differ");
    }
    QvkModel model = init_qvk_model(train, cfg);
    auto trace = continue_training(model, test, cfg);
    return {std::move(model), std::move(trace)};
}

svm::SvmModel refit_svm(const QvkModel &model, const variational::LabeledSet &train, const svm::TrainConfig &cfg) {
    model.validate();
    train.validate();
    return svm::fit(train.X, train.y, kernels::KernelSpec::trainable(model.ansatz, model.theta), cfg);
}

std::vector<int> predict_qvk(const QvkModel &model, const Matrix &X) { return labels_from(qvk_scores(model, X)); }

} // namespace qsvm::hybrid
