#pragma once

#include "ft/tensor.hpp"

#include <random>

namespace ftt {

inline ft::DenseTensor random_tensor(const std::vector<std::size_t>& shape, unsigned seed) {
    ft::DenseTensor t(shape);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = gauss(rng);
    return t;
}

inline ft::Matrix random_matrix(std::size_t rows, std::size_t cols, unsigned seed) {
    ft::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = gauss(rng);
    return m;
}

inline ft::Matrix random_orthonormal(std::size_t rows, std::size_t cols, unsigned seed) {
    ft::Matrix g = random_matrix(rows, cols, seed);
    Eigen::HouseholderQR<ft::Matrix> qr(g);
    return qr.householderQ() * ft::Matrix::Identity(g.rows(), g.cols());
}

inline ft::Matrix random_spd(std::size_t n, unsigned seed) {
    ft::Matrix a = random_matrix(n, n, seed);
    ft::Matrix s = a * a.transpose();
    s.diagonal().array() += static_cast<double>(n) * 0.1;
    return s;
}

}  // namespace ftt
