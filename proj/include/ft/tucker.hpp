#pragma once

#include "ft/tensor.hpp"

#include <vector>

namespace ft {

struct TuckerFactors {
    DenseTensor core;             // extents = ranks
    std::vector<Matrix> factors;  // factor k: extent_k x rank_k, orthonormal columns
};

// Truncated higher-order SVD: factor k holds the leading rank_k left singular
// vectors of the mode-k unfolding; the core is the fully projected tensor.
TuckerFactors hosvd(const DenseTensor& t, const std::vector<std::size_t>& ranks);

// core x_1 A_1 x_2 A_2 ... via sequential mode products.
DenseTensor reconstruct(const TuckerFactors& f);

// ||t - reconstruct(f)|| / ||t||.
double relative_error(const DenseTensor& t, const TuckerFactors& f);

}  // namespace ft
