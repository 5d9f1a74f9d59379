#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace ft {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense real tensor, column-major (first index varies fastest).
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(std::vector<std::size_t> shape);
    DenseTensor(std::vector<std::size_t> shape, std::vector<double> data);

    std::size_t order() const { return shape_.size(); }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t extent(std::size_t mode) const { return shape_.at(mode); }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    // Linear offset of a multi-index.
    std::size_t offset(const std::vector<std::size_t>& idx) const;
    double& at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
    double at(const std::vector<std::size_t>& idx) const { return data_[offset(idx)]; }

    // Stride of a mode in the column-major layout.
    std::size_t stride(std::size_t mode) const;

    Eigen::Map<const Vector> as_vector() const {
        return Eigen::Map<const Vector>(data_.data(), static_cast<Eigen::Index>(data_.size()));
    }
    Eigen::Map<Vector> as_vector() {
        return Eigen::Map<Vector>(data_.data(), static_cast<Eigen::Index>(data_.size()));
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

// Mode-k unfolding (0-based mode). Columns are mode-k fibers; the remaining
// modes are ordered with lower mode indices varying fastest.
Matrix unfold(const DenseTensor& t, std::size_t mode);

// Inverse of unfold for the given mode and target shape.
DenseTensor fold(const Matrix& m, std::size_t mode, const std::vector<std::size_t>& shape);

// k-mode product: unfold(result, mode) = m * unfold(t, mode).
DenseTensor mode_product(const DenseTensor& t, const Matrix& m, std::size_t mode);

Matrix kronecker(const Matrix& a, const Matrix& b);

// vec(W)^T (I_s (x) K) vec(W) = sum_i w_i^T K w_i for K symmetric positive definite.
double weighted_norm_sq(const Matrix& w, const Matrix& k);

double inner(const DenseTensor& a, const DenseTensor& b);
double norm(const DenseTensor& t);
Vector vec(const DenseTensor& t);

namespace serial {

// Straightforward single-threaded implementations, kept as the reference
// the parallel kernels are tested and benchmarked against.
Matrix unfold(const DenseTensor& t, std::size_t mode);
DenseTensor fold(const Matrix& m, std::size_t mode, const std::vector<std::size_t>& shape);
DenseTensor mode_product(const DenseTensor& t, const Matrix& m, std::size_t mode);
Matrix kronecker(const Matrix& a, const Matrix& b);

}  // namespace serial

}  // namespace ft
