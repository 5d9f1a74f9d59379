#include "ft/linalg.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace ft;

TEST_CASE("truncated_svd on a diagonal matrix") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    SvdResult r = truncated_svd(m, 2);
    CHECK(r.s(0) == doctest::Approx(3.0));
    CHECK(r.s(1) == doctest::Approx(1.0));
    CHECK((r.u * r.s.asDiagonal() * r.vt - m).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("truncated_svd rank-1 outer product") {
    Vector a = ftt::random_matrix(5, 1, 1).col(0);
    Vector b = ftt::random_matrix(4, 1, 2).col(0);
    Matrix m = a * b.transpose();
    SvdResult r = truncated_svd(m, 1);
    CHECK(r.s(0) == doctest::Approx(a.norm() * b.norm()).epsilon(1e-12));
}

TEST_CASE("truncated_svd full-rank reconstruction and orthonormality") {
    Matrix m = ftt::random_matrix(5, 3, 3);
    SvdResult r = truncated_svd(m, 3);
    CHECK((r.u.transpose() * r.u - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((r.u * r.s.asDiagonal() * r.vt - m).cwiseAbs().maxCoeff() <=
          1e-10 * m.cwiseAbs().maxCoeff());
    CHECK(r.s(0) >= r.s(1));
    CHECK(r.s(1) >= r.s(2));
}

TEST_CASE("truncated_svd truncation optimality") {
    Matrix m = ftt::random_matrix(6, 6, 4);
    Eigen::BDCSVD<Matrix> full(m);
    for (std::size_t rank = 1; rank <= 5; ++rank) {
        SvdResult r = truncated_svd(m, rank);
        double err = (m - r.u * r.s.asDiagonal() * r.vt).squaredNorm();
        double tail = full.singularValues()
                          .tail(6 - static_cast<Eigen::Index>(rank))
                          .squaredNorm();
        CHECK(err == doctest::Approx(tail).epsilon(1e-9));
    }
}

TEST_CASE("truncated_svd sign convention is deterministic") {
    Matrix m = ftt::random_matrix(4, 4, 5);
    SvdResult r = truncated_svd(m, 4);
    for (Eigen::Index i = 0; i < 4; ++i) {
        Eigen::Index arg = 0;
        r.u.col(i).cwiseAbs().maxCoeff(&arg);
        CHECK(r.u(arg, i) >= 0.0);
    }
}

TEST_CASE("truncated_svd input validation") {
    Matrix m = ftt::random_matrix(3, 3, 6);
    CHECK_THROWS_AS(truncated_svd(m, 0), std::invalid_argument);
    CHECK_THROWS_AS(truncated_svd(m, 4), std::invalid_argument);
    m(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(truncated_svd(m, 2), std::invalid_argument);
}

TEST_CASE("solve_spd basic identities") {
    Vector rhs(2);
    rhs << 2, 4;
    CHECK((solve_spd(Matrix::Identity(2, 2), rhs) - rhs).norm() == 0.0);
    Vector x = solve_spd(Matrix(2.0 * Matrix::Identity(2, 2)), rhs);
    CHECK(x(0) == doctest::Approx(1.0));
    CHECK(x(1) == doctest::Approx(2.0));
}

TEST_CASE("solve_spd matches dense-inverse oracle") {
    Matrix l = ftt::random_spd(6, 7);
    Vector rhs = ftt::random_matrix(6, 1, 8).col(0);
    Vector x = solve_spd(l, rhs);
    Vector oracle = l.inverse() * rhs;
    CHECK((x - oracle).norm() <= 1e-8 * oracle.norm());
    CHECK((l * x - rhs).norm() <= 1e-8 * (l.norm() * x.norm() + rhs.norm()));
}

TEST_CASE("solve_spd rejects indefinite and asymmetric input") {
    Matrix neg = -Matrix::Identity(3, 3);
    CHECK_THROWS_AS(solve_spd(neg, Vector(Vector::Ones(3))), std::runtime_error);
    Matrix asym(2, 2);
    asym << 1, 1, 0, 1;
    CHECK_THROWS_AS(solve_spd(asym, Vector(Vector::Ones(2))), std::invalid_argument);
}

TEST_CASE("solve_right recovers a planted solution") {
    CHECK((solve_right(ftt::random_matrix(3, 4, 9), Matrix::Identity(4, 4)) -
           solve_right(ftt::random_matrix(3, 4, 9), Matrix::Identity(4, 4)))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    Matrix a0 = ftt::random_matrix(4, 3, 10);
    Matrix m = ftt::random_matrix(3, 7, 11);  // full row rank w.h.p.
    Matrix t = a0 * m;
    Matrix a = solve_right(t, m);
    CHECK((a - a0).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("solve_right with identity design returns input") {
    Matrix t = ftt::random_matrix(3, 5, 12);
    CHECK((solve_right(t, Matrix::Identity(5, 5)) - t).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("solve_right minimum-norm behavior on a zero design row") {
    Matrix m = ftt::random_matrix(3, 6, 13);
    m.row(1).setZero();
    Matrix t = ftt::random_matrix(2, 6, 14);
    Matrix a = solve_right(t, m);
    // pseudo-inverse oracle
    Matrix pinv = m.completeOrthogonalDecomposition().pseudoInverse();
    Matrix oracle = t * pinv;
    CHECK((a - oracle).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(a.col(0).cwiseAbs().maxCoeff() >= 0.0);
    CHECK((a.col(1)).cwiseAbs().maxCoeff() <= 1e-9);  // column against the zero row
}

TEST_CASE("solve_left planted recovery and residual orthogonality") {
    Matrix c = ftt::random_matrix(8, 3, 15);
    Matrix g0 = ftt::random_matrix(3, 5, 16);
    Matrix g = solve_left(c, Matrix(c * g0));
    CHECK((g - g0).cwiseAbs().maxCoeff() <= 1e-9);

    Matrix y = ftt::random_matrix(8, 5, 17);
    bool deficient = true;
    Matrix g2 = solve_left(c, y, &deficient);
    CHECK_FALSE(deficient);
    // normal equations: C^T (C G - Y) = 0
    CHECK((c.transpose() * (c * g2 - y)).cwiseAbs().maxCoeff() <= 1e-8 * y.cwiseAbs().maxCoeff());
}

TEST_CASE("solve_left flags rank deficiency and matches projection oracle") {
    Matrix c = ftt::random_matrix(6, 3, 18);
    c.col(2) = c.col(0);  // deficient
    Matrix y = ftt::random_matrix(6, 2, 19);
    bool deficient = false;
    Matrix g = solve_left(c, y, &deficient);
    CHECK(deficient);
    Matrix oracle = c.completeOrthogonalDecomposition().pseudoInverse() * y;
    CHECK(((c * g) - (c * oracle)).cwiseAbs().maxCoeff() <= 1e-9);
}
