#pragma once

#include "ft/kernel.hpp"
#include "ft/tensor.hpp"

#include <vector>

namespace ft {

// Orthonormal basis arrays spanning the dominant subspace of one class.
struct ClassBasis {
    int label = 0;
    std::vector<DenseTensor> elements;  // unit norm, mutually orthogonal
};

// Samples of identical shape with class labels and the continuous-mode grid
// (sample last extent = grid size).
struct LabeledDataset {
    std::vector<DenseTensor> samples;
    std::vector<int> labels;
    DesignGrid grid;

    std::size_t size() const { return samples.size(); }
    std::vector<int> class_ids() const;
    void validate() const;
};

}  // namespace ft
