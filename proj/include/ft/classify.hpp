#pragma once

#include "ft/classify_types.hpp"
#include "ft/ftd.hpp"
#include "ft/tucker.hpp"

#include <map>
#include <vector>

namespace ft {

// Per-class subspace bases from the truncated HOSVD of the stacked (and
// unit-normalized) training samples. `ranks` covers the non-sample modes; the
// sample mode keeps its full extent. The first k normalized slices of
// G x_2 B x_3 C (x_4 D) are retained.
std::vector<ClassBasis> train_hosvd(const LabeledDataset& data,
                                    const std::vector<std::size_t>& ranks, std::size_t k);

// Same basis construction from an already stacked class tensor.
ClassBasis basis_from_tensor(const DenseTensor& class_tensor, int label,
                             const std::vector<std::size_t>& ranks, std::size_t k);

// R(mu) = 1 - sum_nu <y, D_nu>^2 for a unit-norm sample y.
double residual(const DenseTensor& y, const ClassBasis& basis);

// Class with the smallest residual; ties broken by smallest class id. The
// sample is normalized internally.
int predict(const DenseTensor& y, const std::vector<ClassBasis>& bases);

// One FTD model per class, fitted to the stacked class tensor on data.grid.
// The sample-mode rank is capped at the class size.
std::map<int, FtdModel> train_ftd(const LabeledDataset& data, const FtdConfig& cfg);

// Reconstruct each class tensor on new_grid and re-derive HOSVD bases there.
std::vector<ClassBasis> transfer_bases(const std::map<int, FtdModel>& models,
                                       const DesignGrid& new_grid,
                                       const std::vector<std::size_t>& ranks, std::size_t k);

struct CvResult {
    std::vector<std::vector<std::size_t>> rank_grid;
    std::vector<std::size_t> k_values;
    // mean_accuracy[i][j]: rank tuple i, truncation k_values[j]
    std::vector<std::vector<double>> mean_accuracy;
};

// Stratified k-fold cross-validation of the HOSVD classifier over a grid of
// rank tuples and truncation values. Deterministic in the seed.
CvResult cross_validate(const LabeledDataset& data,
                        const std::vector<std::vector<std::size_t>>& rank_grid,
                        const std::vector<std::size_t>& k_values, int folds, unsigned seed);

}  // namespace ft
