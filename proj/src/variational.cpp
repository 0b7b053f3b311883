#include "qsvm/variational.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "qsvm/autodiff.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/format.hpp"
#include "qsvm/metrics.hpp"
#include "qsvm/parallel.hpp"

namespace qsvm::variational {

namespace {

void check_model(const VarModel &model, std::size_t n_features) {
    if (!model.theta.matches(model.ansatz)) {
        throw ConfigError("variational angles do not match the ansatz shape");
    }
    if (n_features != model.emb.n_features) {
        throw DataError("sample has " + std::to_string(n_features) + " features, model expects " +
                        std::to_string(model.emb.n_features));
    }
}

EpochRecord evaluate_epoch(const VarModel &model, const LabeledSet &train, const LabeledSet &test) {
    EpochRecord r;
    r.train_loss = qv_cost(model, train.X, train.y);
    r.test_loss = qv_cost(model, test.X, test.y);
    r.train_accuracy = metrics::accuracy(train.y, predict_qv(model, train.X));
    r.test_accuracy = metrics::accuracy(test.y, predict_qv(model, test.X));
    return r;
}

} // namespace

void FitConfig::validate() const {
    if (!(learning_rate >= 0.0)) {
        throw ConfigError("learning rate must be >= 0, got " + format_double(learning_rate));
    }
    if (layers == 0) {
        throw ConfigError("ansatz needs at least one layer");
    }
    if (!(init_scale >= 0.0)) {
        throw ConfigError("init scale must be >= 0");
    }
}

void write_trace_csv(std::ostream &out, const TrainingTrace &trace) {
    out << "epoch,train_loss,test_loss,train_acc,test_acc\n";
    for (std::size_t e = 0; e < trace.epochs.size(); ++e) {
        const auto &r = trace.epochs[e];
        out << (e + 1) << ',' << format_double(r.train_loss) << ',' << format_double(r.test_loss) << ','
            << format_double(r.train_accuracy) << ',' << format_double(r.test_accuracy) << '\n';
    }
}

void LabeledSet::validate() const {
    if (X.rows() == 0) {
        throw DataError("labeled set is empty");
    }
    if (X.rows() != y.size()) {
        throw DataError("labeled set has " + std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) +
                        " labels");
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1 && y[i] != -1) {
            throw DataError("label " + std::to_string(y[i]) + " at index " + std::to_string(i) +
                            " is not +1 or -1");
        }
    }
}

double qv_score(const VarModel &model, std::span<const double> x) {
    check_model(model, x.size());
    const auto tape = circuits::variational_tape(x, model.emb, model.ansatz);
    return autodiff::evaluate(tape, model.theta.flat(), autodiff::Observable::PauliZWire0) + model.bias;
}

double hinge_loss(int y, double score) {
    if (y != 1 && y != -1) {
        throw DataError("label " + std::to_string(y) + " is not +1 or -1");
    }
    return std::max(0.0, 1.0 - y * score);
}

double qv_cost(const VarModel &model, const Matrix &X, std::span<const int> y) {
    if (X.rows() == 0 || X.rows() != y.size()) {
        throw DataError("cost needs a nonempty set with one label per row");
    }
    std::vector<double> losses(X.rows());
    parallel_for(X.rows(), [&](std::size_t i) { losses[i] = hinge_loss(y[i], qv_score(model, X.row(i))); });
    return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(X.rows());
}

VarGradient qv_cost_gradient(const VarModel &model, const Matrix &X, std::span<const int> y) {
    if (X.rows() == 0 || X.rows() != y.size()) {
        throw DataError("gradient needs a nonempty set with one label per row");
    }
    const std::size_t m = X.rows();
    const std::size_t p = model.theta.size();
    std::vector<std::vector<double>> per_sample(m);
    std::vector<char> violated(m, 0);
    parallel_for(m, [&](std::size_t i) {
        const double score = qv_score(model, X.row(i));
        if (y[i] * score >= 1.0) {
            return;
        }
        violated[i] = 1;
        const auto tape = circuits::variational_tape(X.row(i), model.emb, model.ansatz);
        per_sample[i] = autodiff::param_shift_gradient(tape, model.theta.flat(), autodiff::Observable::PauliZWire0);
    });

    VarGradient g;
    g.theta.assign(p, 0.0);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!violated[i]) {
            continue;
        }
        for (std::size_t j = 0; j < p; ++j) {
            g.theta[j] -= scale * y[i] * per_sample[i][j];
        }
        g.bias -= scale * y[i];
    }
    return g;
}

VarModel init_var_model(std::size_t n_features, const FitConfig &cfg) {
    cfg.validate();
    VarModel model;
    model.emb = circuits::EmbeddingSpec{n_features, circuits::Axis::X};
    model.ansatz = circuits::AnsatzSpec::with_default_ranges(cfg.layers, n_features);
    model.theta = circuits::AngleTensor(cfg.layers, n_features);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> draw(-cfg.init_scale, cfg.init_scale);
    for (auto &v : model.theta.flat()) {
        v = draw(rng);
    }
    return model;
}

std::pair<VarModel, TrainingTrace> train_qv(const LabeledSet &train, const LabeledSet &test, const FitConfig &cfg) {
    cfg.validate();
    train.validate();
    test.validate();
    if (test.X.cols() != train.X.cols()) {
        throw DataError("train and test feature counts differ");
    }

    VarModel model = init_var_model(train.X.cols(), cfg);
    // Separate stream so the initial angles do not depend on batching.
    std::mt19937_64 batch_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = (cfg.batch_size == 0 || cfg.batch_size >= train.size()) ? train.size() : cfg.batch_size;

    TrainingTrace trace;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (batch < train.size()) {
            std::shuffle(order.begin(), order.end(), batch_rng);
        }
        for (std::size_t start = 0; start < train.size(); start += batch) {
            const std::size_t stop = std::min(train.size(), start + batch);
            const std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                order.begin() + static_cast<std::ptrdiff_t>(stop));
            std::vector<int> labels;
            for (const auto r : rows) {
                labels.push_back(train.y[r]);
            }
            const auto g = qv_cost_gradient(model, select_rows(train.X, rows), labels);
            auto theta = model.theta.flat();
            for (std::size_t j = 0; j < theta.size(); ++j) {
                theta[j] -= cfg.learning_rate * g.theta[j];
            }
            model.bias -= cfg.learning_rate * g.bias;
        }
        trace.epochs.push_back(evaluate_epoch(model, train, test));
    }
    return {std::move(model), std::move(trace)};
}

std::vector<int> predict_qv(const VarModel &model, const Matrix &X) {
    std::vector<int> out(X.rows());
    parallel_for(X.rows(), [&](std::size_t i) { out[i] = qv_score(model, X.row(i)) >= 0.0 ? 1 : -1; });
    return out;
}

} // namespace qsvm::variational
