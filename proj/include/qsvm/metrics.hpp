#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace qsvm::metrics {

/// 2x2 contingency table with +1 as the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    [[nodiscard]] std::size_t total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionMatrix &, const ConfusionMatrix &) = default;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

/// An empty optional marks a 0/0 ratio.
struct Indicators {
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> specificity;
    std::optional<double> f1;
};

Indicators indicators(const ConfusionMatrix &cm);

/// Fraction of matching labels.
double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

} // namespace qsvm::metrics
