#pragma once

#include <cstddef>
#include <vector>

namespace ft {

struct ConfusionMatrix {
    std::size_t num_classes = 0;
    std::vector<std::size_t> counts;  // row-major, rows = true class, cols = predicted

    std::size_t operator()(std::size_t truth, std::size_t pred) const {
        return counts[truth * num_classes + pred];
    }
};

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred);

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& pred,
                          std::size_t num_classes);

// Unweighted mean of per-class F1 over classes 0..num_classes-1. A class with
// no true and no predicted instances contributes 0.
double macro_f1(const std::vector<int>& truth, const std::vector<int>& pred,
                std::size_t num_classes);

}  // namespace ft
