#include "ft/tensor.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ft {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t e : shape) n *= e;
    return n;
}

void check_shape(const std::vector<std::size_t>& shape) {
    if (shape.empty()) throw std::invalid_argument("tensor order must be >= 1");
    for (std::size_t e : shape)
        if (e == 0) throw std::invalid_argument("tensor extents must be >= 1");
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
    check_shape(shape_);
    data_.assign(shape_product(shape_), 0.0);
}

DenseTensor::DenseTensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    check_shape(shape_);
    if (data_.size() != shape_product(shape_))
        throw std::invalid_argument("data length does not match shape");
}

std::size_t DenseTensor::offset(const std::vector<std::size_t>& idx) const {
    if (idx.size() != shape_.size()) throw std::invalid_argument("index order mismatch");
    std::size_t off = 0, s = 1;
    for (std::size_t m = 0; m < shape_.size(); ++m) {
        if (idx[m] >= shape_[m]) throw std::out_of_range("tensor index out of range");
        off += idx[m] * s;
        s *= shape_[m];
    }
    return off;
}

std::size_t DenseTensor::stride(std::size_t mode) const {
    std::size_t s = 1;
    for (std::size_t m = 0; m < mode; ++m) s *= shape_[m];
    return s;
}

Matrix unfold(const DenseTensor& t, std::size_t mode) {
    if (mode >= t.order()) throw std::invalid_argument("unfold: mode out of range");
    const auto& shape = t.shape();
    const std::size_t rows = shape[mode];
    const std::size_t cols = t.size() / rows;
    const std::size_t stride_k = t.stride(mode);
    const std::size_t order = t.order();

    std::vector<std::size_t> strides(order);
    for (std::size_t m = 0; m < order; ++m) strides[m] = t.stride(m);

    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    const double* src = t.data();

#pragma omp parallel for schedule(static) if (cols > 256)
    for (long long j = 0; j < static_cast<long long>(cols); ++j) {
        std::size_t rem = static_cast<std::size_t>(j);
        std::size_t base = 0;
        for (std::size_t m = 0; m < order; ++m) {
            if (m == mode) continue;
            const std::size_t im = rem % shape[m];
            rem /= shape[m];
            base += im * strides[m];
        }
        for (std::size_t i = 0; i < rows; ++i)
            out(static_cast<Eigen::Index>(i), j) = src[base + i * stride_k];
    }
    return out;
}

DenseTensor fold(const Matrix& m, std::size_t mode, const std::vector<std::size_t>& shape) {
    check_shape(shape);
    if (mode >= shape.size()) throw std::invalid_argument("fold: mode out of range");
    const std::size_t rows = shape[mode];
    const std::size_t total = shape_product(shape);
    const std::size_t cols = total / rows;
    if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols)
        throw std::invalid_argument("fold: matrix dimensions inconsistent with shape");

    DenseTensor t(shape);
    const std::size_t order = shape.size();
    std::vector<std::size_t> strides(order);
    for (std::size_t k = 0; k < order; ++k) strides[k] = t.stride(k);
    const std::size_t stride_k = strides[mode];
    double* dst = t.data();

#pragma omp parallel for schedule(static) if (cols > 256)
    for (long long j = 0; j < static_cast<long long>(cols); ++j) {
        std::size_t rem = static_cast<std::size_t>(j);
        std::size_t base = 0;
        for (std::size_t k = 0; k < order; ++k) {
            if (k == mode) continue;
            const std::size_t ik = rem % shape[k];
            rem /= shape[k];
            base += ik * strides[k];
        }
        for (std::size_t i = 0; i < rows; ++i)
            dst[base + i * stride_k] = m(static_cast<Eigen::Index>(i), j);
    }
    return t;
}

DenseTensor mode_product(const DenseTensor& t, const Matrix& m, std::size_t mode) {
    if (mode >= t.order()) throw std::invalid_argument("mode_product: mode out of range");
    if (static_cast<std::size_t>(m.cols()) != t.extent(mode))
        throw std::invalid_argument("mode_product: dimension mismatch");
    Matrix u = m * unfold(t, mode);
    std::vector<std::size_t> shape = t.shape();
    shape[mode] = static_cast<std::size_t>(m.rows());
    return fold(u, mode, shape);
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
#pragma omp parallel for collapse(2) schedule(static) if (a.size() > 64)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double weighted_norm_sq(const Matrix& w, const Matrix& k) {
    if (k.rows() != k.cols()) throw std::invalid_argument("weighted_norm_sq: K must be square");
    if (k.rows() != w.rows()) throw std::invalid_argument("weighted_norm_sq: dimension mismatch");
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("weighted_norm_sq: K not symmetric");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < w.cols(); ++i) acc += w.col(i).dot(k * w.col(i));
    return acc;
}

double inner(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) throw std::invalid_argument("inner: shape mismatch");
    return a.as_vector().dot(b.as_vector());
}

double norm(const DenseTensor& t) { return t.as_vector().norm(); }

Vector vec(const DenseTensor& t) { return t.as_vector(); }

namespace serial {

Matrix unfold(const DenseTensor& t, std::size_t mode) {
    if (mode >= t.order()) throw std::invalid_argument("unfold: mode out of range");
    const auto& shape = t.shape();
    const std::size_t order = t.order();
    Matrix out(static_cast<Eigen::Index>(shape[mode]),
               static_cast<Eigen::Index>(t.size() / shape[mode]));
    std::vector<std::size_t> idx(order, 0);
    for (std::size_t lin = 0; lin < t.size(); ++lin) {
        std::size_t col = 0, s = 1;
        for (std::size_t m = 0; m < order; ++m) {
            if (m == mode) continue;
            col += idx[m] * s;
            s *= shape[m];
        }
        out(static_cast<Eigen::Index>(idx[mode]), static_cast<Eigen::Index>(col)) = t[lin];
        for (std::size_t m = 0; m < order; ++m) {
            if (++idx[m] < shape[m]) break;
            idx[m] = 0;
        }
    }
    return out;
}

DenseTensor fold(const Matrix& m, std::size_t mode, const std::vector<std::size_t>& shape) {
    DenseTensor t(shape);
    const std::size_t order = shape.size();
    std::vector<std::size_t> idx(order, 0);
    for (std::size_t lin = 0; lin < t.size(); ++lin) {
        std::size_t col = 0, s = 1;
        for (std::size_t k = 0; k < order; ++k) {
            if (k == mode) continue;
            col += idx[k] * s;
            s *= shape[k];
        }
        t[lin] = m(static_cast<Eigen::Index>(idx[mode]), static_cast<Eigen::Index>(col));
        for (std::size_t k = 0; k < order; ++k) {
            if (++idx[k] < shape[k]) break;
            idx[k] = 0;
        }
    }
    return t;
}

DenseTensor mode_product(const DenseTensor& t, const Matrix& m, std::size_t mode) {
    if (static_cast<std::size_t>(m.cols()) != t.extent(mode))
        throw std::invalid_argument("mode_product: dimension mismatch");
    std::vector<std::size_t> shape = t.shape();
    shape[mode] = static_cast<std::size_t>(m.rows());
    DenseTensor out(shape);
    const std::size_t in_stride = t.stride(mode);
    const std::size_t out_stride = out.stride(mode);
    const std::size_t in_extent = t.extent(mode);
    const std::size_t cols = t.size() / in_extent;
    const auto& in_shape = t.shape();
    for (std::size_t j = 0; j < cols; ++j) {
        std::size_t rem = j, in_base = 0, out_base = 0;
        std::size_t s_in = 1, s_out = 1;
        for (std::size_t k = 0; k < t.order(); ++k) {
            if (k == mode) {
                s_in *= in_shape[k];
                s_out *= shape[k];
                continue;
            }
            const std::size_t ik = rem % in_shape[k];
            rem /= in_shape[k];
            in_base += ik * s_in;
            out_base += ik * s_out;
            s_in *= in_shape[k];
            s_out *= shape[k];
        }
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < in_extent; ++c)
                acc += m(r, static_cast<Eigen::Index>(c)) * t[in_base + c * in_stride];
            out[out_base + static_cast<std::size_t>(r) * out_stride] = acc;
        }
    }
    return out;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

}  // namespace serial

}  // namespace ft
