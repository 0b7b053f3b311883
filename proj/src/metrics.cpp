#include "qsvm/metrics.hpp"

#include <string>

#include "qsvm/errors.hpp"

namespace qsvm::metrics {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) {
        return std::nullopt;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw DataError("label vectors differ in length (" + std::to_string(y_true.size()) + " vs " +
                        std::to_string(y_pred.size()) + ")");
    }
    if (y_true.empty()) {
        throw DataError("confusion matrix of an empty label set");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if ((t != 1 && t != -1) || (p != 1 && p != -1)) {
            throw DataError("label at index " + std::to_string(i) + " is not +1 or -1");
        }
        if (t == 1) {
            (p == 1 ? cm.tp : cm.fn)++;
        } else {
            (p == 1 ? cm.fp : cm.tn)++;
        }
    }
    return cm;
}

Indicators indicators(const ConfusionMatrix &cm) {
    if (cm.total() == 0) {
        throw DataError("indicators of an empty confusion matrix");
    }
    Indicators out;
    out.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    out.precision = ratio(cm.tp, cm.tp + cm.fp);
    out.recall = ratio(cm.tp, cm.tp + cm.fn);
    out.specificity = ratio(cm.tn, cm.tn + cm.fp);
    if (out.precision && out.recall && (*out.precision + *out.recall) > 0.0) {
        out.f1 = 2.0 * *out.precision * *out.recall / (*out.precision + *out.recall);
    }
    return out;
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
    return indicators(confusion(y_true, y_pred)).accuracy;
}

} // namespace qsvm::metrics
