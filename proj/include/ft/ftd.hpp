#pragma once

#include "ft/kernel.hpp"
#include "ft/tensor.hpp"

#include <vector>

namespace ft {

struct FtdConfig {
    std::vector<std::size_t> ranks;  // one per mode, continuous-mode rank s last
    double lambda = 1.0;
    std::size_t max_iters = 200;
    double tol = 1e-8;
    unsigned seed = 0;
    KernelSpec kernel;
    // Opt-in stop rule |eps_t - eps_{t-1}| < tol*||T||; the default
    // compares against tol directly since eps is already relative.
    bool norm_scaled_stop = false;
};

// Tucker model whose last mode is a kernel expansion: the continuous factor
// evaluated on the design grid is gram(kernel, design) * weights.
struct FtdModel {
    DenseTensor core;
    std::vector<Matrix> discrete_factors;  // orthonormal columns, one per discrete mode
    Matrix weights;                        // p x s
    DesignGrid design;
    KernelSpec kernel;
    double lambda = 0.0;
    std::vector<double> trace;            // per-sweep relative errors eps_t
    std::vector<double> objective_trace;  // per-sweep regularized objective
    Matrix gram_cache;                    // gram(kernel, design), computed once per fit

    std::size_t continuous_rank() const { return static_cast<std::size_t>(weights.cols()); }
};

// Alternating least squares for the functional Tucker model. Per sweep:
// each discrete factor is solved in the least-squares sense and
// re-orthogonalized by SVD (the non-orthogonal part is pushed into the core),
// then the weight matrix solves the regularized kernel system, then the core
// solves the final least-squares system against the projected tensor.
FtdModel fit(const DenseTensor& t, const FtdConfig& cfg, const DesignGrid& design);

// 1/2 ||t - reconstruction||^2 + (lambda/2) ||W||_K^2.
double objective(const FtdModel& model, const DenseTensor& t);

// Solves (G_(d) G_(d)^T (x) K + lambda I) vec(W) = vec((T x_1 A_1^T ...)_(d) G_(d)^T).
// Valid when the discrete factors have orthonormal columns.
Matrix solve_weights(const DenseTensor& t, const DenseTensor& core,
                     const std::vector<Matrix>& discrete_factors, const Matrix& k,
                     double lambda);

// Continuous factor evaluated at arbitrary points: cross_gram(kernel, points, design) * W.
Matrix evaluate_factor(const FtdModel& model, const DesignGrid& points);

// Full reconstruction with the continuous mode evaluated at the given points.
DenseTensor reconstruct_on(const FtdModel& model, const DesignGrid& points);

// Reconstruction on the model's own design grid.
DenseTensor reconstruct(const FtdModel& model);

}  // namespace ft
