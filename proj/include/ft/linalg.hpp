#pragma once

#include "ft/tensor.hpp"

namespace ft {

struct SvdResult {
    Matrix u;   // orthonormal columns
    Vector s;   // non-increasing, non-negative
    Matrix vt;  // right singular vectors, transposed
};

// Leading `rank` singular triplets of m. The sign of each left singular vector
// is fixed so that its largest-magnitude entry is non-negative.
SvdResult truncated_svd(const Matrix& m, std::size_t rank);

// Cholesky solve of a symmetric positive definite system. On factorization
// failure, diagonal jitter eps*trace(L)/n is added with eps escalating
// 1e-12 -> 1e-10 -> 1e-8 before giving up.
Vector solve_spd(const Matrix& l, const Vector& rhs);
Matrix solve_spd(const Matrix& l, const Matrix& rhs);

// Minimize ||T - A*M||_F over A (minimum-norm solution when M M^T is singular).
Matrix solve_right(const Matrix& t, const Matrix& m);

// Minimize ||C*G - Y||_F over G. Sets *rank_deficient when C lacks full
// column rank (the minimum-norm solution is returned either way).
Matrix solve_left(const Matrix& c, const Matrix& y, bool* rank_deficient = nullptr);

}  // namespace ft
