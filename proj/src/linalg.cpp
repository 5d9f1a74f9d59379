#include "ft/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace ft {

SvdResult truncated_svd(const Matrix& m, std::size_t rank) {
    if (!m.allFinite()) throw std::invalid_argument("truncated_svd: non-finite entries");
    const std::size_t kmax = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
    if (rank < 1 || rank > kmax) throw std::invalid_argument("truncated_svd: rank out of range");

    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Index r = static_cast<Eigen::Index>(rank);

    SvdResult out;
    out.u = svd.matrixU().leftCols(r);
    out.s = svd.singularValues().head(r);
    out.vt = svd.matrixV().leftCols(r).transpose();

    for (Eigen::Index i = 0; i < r; ++i) {
        Eigen::Index arg = 0;
        out.u.col(i).cwiseAbs().maxCoeff(&arg);
        if (out.u(arg, i) < 0.0) {
            out.u.col(i) = -out.u.col(i);
            out.vt.row(i) = -out.vt.row(i);
        }
    }
    return out;
}

Matrix solve_spd(const Matrix& l, const Matrix& rhs) {
    if (l.rows() != l.cols()) throw std::invalid_argument("solve_spd: matrix not square");
    if (l.rows() != rhs.rows()) throw std::invalid_argument("solve_spd: dimension mismatch");
    const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
    if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw std::invalid_argument("solve_spd: matrix not symmetric");

    const double base = l.trace() / static_cast<double>(l.rows());
    const double jitters[] = {0.0, 1e-12, 1e-10, 1e-8};
    for (double eps : jitters) {
        Matrix a = l;
        if (eps > 0.0) a.diagonal().array() += eps * base;
        Eigen::LLT<Matrix> llt(a);
        if (llt.info() == Eigen::Success) return llt.solve(rhs);
    }
    throw std::runtime_error("solve_spd: matrix not positive definite within jitter budget");
}

Vector solve_spd(const Matrix& l, const Vector& rhs) {
    Matrix x = solve_spd(l, Matrix(rhs));
    return x.col(0);
}

Matrix solve_right(const Matrix& t, const Matrix& m) {
    if (t.cols() != m.cols()) throw std::invalid_argument("solve_right: dimension mismatch");
    // min ||T - A M|| row-wise: M^T a_i = t_i in the least-squares sense.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(m.transpose());
    return cod.solve(t.transpose()).transpose();
}

Matrix solve_left(const Matrix& c, const Matrix& y, bool* rank_deficient) {
    if (c.rows() != y.rows()) throw std::invalid_argument("solve_left: dimension mismatch");
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(c);
    if (rank_deficient) *rank_deficient = cod.rank() < c.cols();
    return cod.solve(y);
}

}  // namespace ft
