#pragma once

#include "ft/classify_types.hpp"
#include "ft/ftd.hpp"

#include <utility>
#include <vector>

namespace ft {

struct SynthConfig {
    int num_classes = 10;
    int samples_per_class = 40;
    int height = 16;
    int width = 16;
    int p = 50;
    int knot_count = 10;
    double value_lo = 1.0;
    double value_hi = 10.0;
    double noise_std = 0.05;
    unsigned seed = 7;

    void validate() const;
};

// Natural cubic spline through (xs, ys), evaluated at eval.
std::vector<double> natural_cubic_spline(const std::vector<double>& xs,
                                         const std::vector<double>& ys,
                                         const std::vector<double>& eval);

// Two class curves: natural cubic splines through knot_count uniform-random
// values from (value_lo, value_hi) at equally spaced knots spanning the grid.
// Regenerates (bounded) until the two evaluation vectors are linearly
// independent (angle >= 1e-3 rad).
std::pair<Vector, Vector> smooth_curves(unsigned class_seed, int knot_count, double value_lo,
                                        double value_hi, const DesignGrid& grid);

// Continuous-mode image dataset: per class a smooth template image (sum of
// Gaussian bumps), per sample additive pixel noise; each sample's lower and
// upper halves are outer-multiplied with the two class curves and summed,
// giving h x w x p tensors of mode-3 rank 2 (exactly 2 when noiseless).
LabeledDataset synth_digit_dataset(const SynthConfig& cfg);

// Restrict the continuous mode to the given grid indices (strictly increasing).
LabeledDataset subsample(const LabeledDataset& data, const std::vector<std::size_t>& indices);

struct PlantedInstance {
    DenseTensor tensor;  // exact [[G; A_1, ..., K W]]
    FtdModel truth;
};

// Exact functional Tucker instance on a uniform design grid over [1, 10]:
// orthonormal discrete factors, smooth weight columns, random core.
PlantedInstance planted_ftd_instance(const std::vector<std::size_t>& shape,
                                     const std::vector<std::size_t>& ranks,
                                     const KernelSpec& kernel, unsigned seed);

// Stratified per-class split; deterministic in the seed.
std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data,
                                                           double train_fraction, unsigned seed);

}  // namespace ft
