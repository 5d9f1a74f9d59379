#include "ft/metrics.hpp"

#include <stdexcept>

namespace ft {

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
    if (truth.size() != pred.size()) throw std::invalid_argument("accuracy: length mismatch");
    if (truth.empty()) throw std::invalid_argument("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (truth[i] == pred[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& pred,
                          std::size_t num_classes) {
    if (truth.size() != pred.size()) throw std::invalid_argument("confusion: length mismatch");
    ConfusionMatrix cm;
    cm.num_classes = num_classes;
    cm.counts.assign(num_classes * num_classes, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int a = truth[i];
        const int b = pred[i];
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= num_classes ||
            static_cast<std::size_t>(b) >= num_classes)
            throw std::invalid_argument("confusion: label out of range");
        ++cm.counts[static_cast<std::size_t>(a) * num_classes + static_cast<std::size_t>(b)];
    }
    return cm;
}

double macro_f1(const std::vector<int>& truth, const std::vector<int>& pred,
                std::size_t num_classes) {
    if (truth.empty()) throw std::invalid_argument("macro_f1: empty input");
    if (num_classes == 0) throw std::invalid_argument("macro_f1: no classes");
    ConfusionMatrix cm = confusion(truth, pred, num_classes);
    double total = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::size_t tp = cm(c, c), fp = 0, fn = 0;
        for (std::size_t j = 0; j < num_classes; ++j) {
            if (j == c) continue;
            fp += cm(j, c);
            fn += cm(c, j);
        }
        const double denom = static_cast<double>(2 * tp + fp + fn);
        total += denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
    }
    return total / static_cast<double>(num_classes);
}

}  // namespace ft
