#include "qsvm/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qsvm/errors.hpp"
#include "qsvm/format.hpp"

namespace qsvm::svm {

namespace {

void check_labels(std::span<const int> labels) {
    bool has_positive = false;
    bool has_negative = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            has_positive = true;
        } else if (labels[i] == -1) {
            has_negative = true;
        } else {
            throw DataError("label " + std::to_string(labels[i]) + " at index " + std::to_string(i) +
                            " is not +1 or -1");
        }
    }
    if (!has_positive || !has_negative) {
        throw DegenerateDataError("training labels contain a single class");
    }
}

// Pairwise coordinate ascent on the box- and equality-constrained dual.
class SmoSolver {
  public:
    SmoSolver(const kernels::GramMatrix &gram, std::span<const int> labels, const TrainConfig &cfg,
              const UpdateObserver &observer)
        : gram_(gram), y_(labels), cfg_(cfg), observer_(observer), alphas_(labels.size(), 0.0), rng_(cfg.seed),
          // Tighter than the reported tolerance so the final bias rule keeps
          // every point inside it.
          inner_tol_(cfg.tolerance * 0.25) {}

    void run(std::vector<std::string> &warnings) {
        const std::size_t m = y_.size();
        std::size_t quiet_passes = 0;
        std::size_t sweeps = 0;
        while (quiet_passes < cfg_.max_passes) {
            if (sweeps++ >= cfg_.max_sweeps) {
                warnings.push_back("SMO stopped after " + std::to_string(cfg_.max_sweeps) + " sweeps");
                break;
            }
            std::size_t changed = 0;
            for (std::size_t i = 0; i < m; ++i) {
                if (violates_kkt(i) && optimize_index(i)) {
                    ++changed;
                }
            }
            quiet_passes = changed == 0 ? quiet_passes + 1 : 0;
        }
    }

    [[nodiscard]] const std::vector<double> &alphas() const { return alphas_; }

  private:
    double weighted_sum(std::size_t i) const {
        double total = 0.0;
        for (std::size_t j = 0; j < alphas_.size(); ++j) {
            if (alphas_[j] != 0.0) {
                total += alphas_[j] * y_[j] * gram_(j, i);
            }
        }
        return total;
    }

    double error(std::size_t i) const { return weighted_sum(i) + bias_ - y_[i]; }

    bool violates_kkt(std::size_t i) const {
        const double r = y_[i] * error(i);
        return (r < -inner_tol_ && alphas_[i] < cfg_.C) || (r > inner_tol_ && alphas_[i] > 0.0);
    }

    // Random partner first; on failure every other index in turn.
    bool optimize_index(std::size_t i) {
        const std::size_t m = y_.size();
        std::uniform_int_distribution<std::size_t> pick(0, m - 2);
        std::size_t j = pick(rng_);
        if (j >= i) {
            ++j;
        }
        if (take_step(i, j)) {
            return true;
        }
        for (std::size_t k = 1; k < m; ++k) {
            const std::size_t other = (j + k) % m;
            if (other != i && take_step(i, other)) {
                return true;
            }
        }
        return false;
    }

    bool take_step(std::size_t i, std::size_t j) {
        const double C = cfg_.C;
        const double ai_old = alphas_[i];
        const double aj_old = alphas_[j];
        const int yi = y_[i];
        const int yj = y_[j];
        const double ei = error(i);
        const double ej = error(j);

        double low = 0.0;
        double high = 0.0;
        if (yi != yj) {
            low = std::max(0.0, aj_old - ai_old);
            high = std::min(C, C + aj_old - ai_old);
        } else {
            low = std::max(0.0, ai_old + aj_old - C);
            high = std::min(C, ai_old + aj_old);
        }
        if (high - low < 1e-14 * C) {
            return false;
        }
        const double eta = 2.0 * gram_(i, j) - gram_(i, i) - gram_(j, j);
        if (eta >= 0.0) {
            return false;
        }

        double aj = aj_old - yj * (ei - ej) / eta;
        aj = std::clamp(aj, low, high);
        if (std::abs(aj - aj_old) < 1e-12 * C) {
            return false;
        }
        double ai = ai_old + yi * yj * (aj_old - aj);
        // Rounding may leave ai a hair outside the box; snap both together.
        if (ai < 0.0) {
            aj += yi * yj * ai;
            ai = 0.0;
        } else if (ai > C) {
            aj += yi * yj * (ai - C);
            ai = C;
        }

        const double b1 = bias_ - ei - yi * (ai - ai_old) * gram_(i, i) - yj * (aj - aj_old) * gram_(i, j);
        const double b2 = bias_ - ej - yi * (ai - ai_old) * gram_(i, j) - yj * (aj - aj_old) * gram_(j, j);
        if (ai > 0.0 && ai < C) {
            bias_ = b1;
        } else if (aj > 0.0 && aj < C) {
            bias_ = b2;
        } else {
            bias_ = 0.5 * (b1 + b2);
        }
        alphas_[i] = ai;
        alphas_[j] = aj;
        if (observer_) {
            observer_(alphas_);
        }
        return true;
    }

    const kernels::GramMatrix &gram_;
    std::span<const int> y_;
    const TrainConfig &cfg_;
    const UpdateObserver &observer_;
    std::vector<double> alphas_;
    double bias_ = 0.0;
    std::mt19937_64 rng_;
    double inner_tol_;
};

// Mean over free support vectors; otherwise the midpoint of the interval the
// bound multipliers allow.
double final_bias(const kernels::GramMatrix &gram, std::span<const int> y, std::span<const double> alphas,
                  double C) {
    const std::size_t m = y.size();
    auto weighted_sum = [&](std::size_t i) {
        double total = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            total += alphas[j] * y[j] * gram(j, i);
        }
        return total;
    };

    double free_total = 0.0;
    std::size_t free_count = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double g = weighted_sum(i);
        const bool at_zero = alphas[i] <= kSupportThreshold;
        const bool at_c = alphas[i] >= C - kSupportThreshold;
        if (!at_zero && !at_c) {
            free_total += y[i] - g;
            ++free_count;
            continue;
        }
        // at zero: y f >= 1; at C: y f <= 1.
        const bool pushes_up = (y[i] == 1) == at_zero;
        const double edge = y[i] - g;
        if (pushes_up) {
            lower = std::max(lower, edge);
        } else {
            upper = std::min(upper, edge);
        }
    }
    if (free_count > 0) {
        return free_total / static_cast<double>(free_count);
    }
    if (std::isfinite(lower) && std::isfinite(upper)) {
        return 0.5 * (lower + upper);
    }
    return std::isfinite(lower) ? lower : (std::isfinite(upper) ? upper : 0.0);
}

} // namespace

void TrainConfig::validate() const {
    if (!(C > 0.0)) {
        throw ConfigError("C must be > 0, got " + format_double(C));
    }
    if (!(tolerance > 0.0)) {
        throw ConfigError("SMO tolerance must be > 0");
    }
    if (max_passes == 0 || max_sweeps == 0) {
        throw ConfigError("SMO pass limits must be positive");
    }
}

SvmModel smo_train(const kernels::GramMatrix &gram, std::span<const int> labels, const TrainConfig &cfg,
                   const UpdateObserver &observer) {
    cfg.validate();
    if (gram.size() != labels.size()) {
        throw DataError("Gram matrix of order " + std::to_string(gram.size()) + " does not match " +
                        std::to_string(labels.size()) + " labels");
    }
    check_labels(labels);

    SvmModel model;
    model.C = cfg.C;
    model.labels.assign(labels.begin(), labels.end());
    if (gram.size() > 1) {
        const double smallest = kernels::min_eigenvalue(gram);
        if (smallest < -1e-6) {
            model.warnings.push_back("Gram matrix is not positive semidefinite (min eigenvalue " +
                                     format_double(smallest) + ")");
        }
    }

    SmoSolver solver(gram, labels, cfg, observer);
    solver.run(model.warnings);
    model.alphas = solver.alphas();
    model.bias = final_bias(gram, labels, model.alphas, cfg.C);
    for (std::size_t i = 0; i < model.alphas.size(); ++i) {
        if (model.alphas[i] > kSupportThreshold) {
            model.support_indices.push_back(i);
        }
    }
    return model;
}

SvmModel fit(const Matrix &samples, std::span<const int> labels, const kernels::KernelSpec &kernel,
             const TrainConfig &cfg) {
    auto model = smo_train(kernels::gram_matrix(samples, kernel), labels, cfg);
    model.kernel = kernel;
    model.training_X = samples;
    return model;
}

double decision_from_kernel_row(const SvmModel &model, std::span<const double> kernel_row) {
    if (model.support_indices.empty()) {
        throw DataError("model has no support vectors");
    }
    if (kernel_row.size() != model.alphas.size()) {
        throw DataError("kernel row has " + std::to_string(kernel_row.size()) + " entries, model has " +
                        std::to_string(model.alphas.size()) + " training samples");
    }
    double total = model.bias;
    for (const auto i : model.support_indices) {
        total += model.alphas[i] * model.labels[i] * kernel_row[i];
    }
    return total;
}

double decision_function(const SvmModel &model, std::span<const double> x) {
    if (model.support_indices.empty()) {
        throw DataError("model has no support vectors");
    }
    if (x.size() != model.training_X.cols()) {
        throw DataError("sample has " + std::to_string(x.size()) + " features, model was trained on " +
                        std::to_string(model.training_X.cols()));
    }
    double total = model.bias;
    for (const auto i : model.support_indices) {
        total += model.alphas[i] * model.labels[i] * kernels::eval_kernel(model.training_X.row(i), x, model.kernel);
    }
    return total;
}

int sign_label(double decision) { return decision >= 0.0 ? 1 : -1; }

int predict(const SvmModel &model, std::span<const double> x) { return sign_label(decision_function(model, x)); }

double dual_objective(const kernels::GramMatrix &gram, std::span<const int> labels, std::span<const double> alphas) {
    double linear = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        linear += alphas[i];
        for (std::size_t j = 0; j < alphas.size(); ++j) {
            quadratic += alphas[i] * alphas[j] * labels[i] * labels[j] * gram(i, j);
        }
    }
    return linear - 0.5 * quadratic;
}

KktReport check_kkt(const kernels::GramMatrix &gram, const SvmModel &model, double tau) {
    KktReport report;
    const std::size_t m = model.alphas.size();
    for (std::size_t i = 0; i < m; ++i) {
        double f = model.bias;
        for (std::size_t j = 0; j < m; ++j) {
            f += model.alphas[j] * model.labels[j] * gram(j, i);
        }
        const double margin = model.labels[i] * f;
        const double a = model.alphas[i];
        double violation = 0.0;
        if (a <= kSupportThreshold) {
            violation = std::max(0.0, (1.0 - tau) - margin);
        } else if (a >= model.C - kSupportThreshold) {
            violation = std::max(0.0, margin - (1.0 + tau));
        } else {
            violation = std::max(0.0, std::abs(margin - 1.0) - tau);
        }
        if (violation > 0.0) {
            ++report.violations;
            report.worst_violation = std::max(report.worst_violation, violation);
        }
    }
    return report;
}

} // namespace qsvm::svm
