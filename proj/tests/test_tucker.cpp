#include "ft/tucker.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace ft;

TEST_CASE("full-rank HOSVD reconstructs exactly") {
    DenseTensor t = ftt::random_tensor({4, 3, 5}, 1);
    TuckerFactors f = hosvd(t, {4, 3, 5});
    CHECK(relative_error(t, f) <= 1e-9);
}

TEST_CASE("rank-1 planted outer product is recovered exactly") {
    Vector a = ftt::random_matrix(4, 1, 2).col(0);
    Vector b = ftt::random_matrix(3, 1, 3).col(0);
    Vector c = ftt::random_matrix(5, 1, 4).col(0);
    DenseTensor t({4, 3, 5});
    for (std::size_t k = 0; k < 5; ++k)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t i = 0; i < 4; ++i)
                t[i + 4 * (j + 3 * k)] = a(static_cast<Eigen::Index>(i)) *
                                         b(static_cast<Eigen::Index>(j)) *
                                         c(static_cast<Eigen::Index>(k));
    TuckerFactors f = hosvd(t, {1, 1, 1});
    CHECK(relative_error(t, f) <= 1e-10);
}

// All-orthogonality of the core is a property of the full HOSVD; truncating
// other modes perturbs it.
TEST_CASE("core is all-orthogonal: distinct mode-k slices are orthogonal") {
    DenseTensor t = ftt::random_tensor({5, 6, 4}, 5);
    TuckerFactors f = hosvd(t, {5, 6, 4});
    for (std::size_t mode = 0; mode < 3; ++mode) {
        Matrix u = unfold(f.core, mode);
        Matrix g = u * u.transpose();
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                if (i != j) CHECK(std::abs(g(i, j)) <= 1e-9 * norm(f.core) * norm(f.core));
    }
}

TEST_CASE("factors have orthonormal columns") {
    DenseTensor t = ftt::random_tensor({6, 5, 4}, 6);
    TuckerFactors f = hosvd(t, {3, 2, 2});
    for (const auto& a : f.factors)
        CHECK((a.transpose() * a - Matrix::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff() <=
              1e-10);
}

TEST_CASE("hosvd rejects out-of-range ranks") {
    DenseTensor t = ftt::random_tensor({3, 3, 3}, 7);
    CHECK_THROWS_AS(hosvd(t, {4, 3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(hosvd(t, {0, 3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(hosvd(t, {3, 3}), std::invalid_argument);
}

TEST_CASE("reconstruct with identity factors returns the core") {
    DenseTensor core = ftt::random_tensor({2, 3, 4}, 8);
    TuckerFactors f;
    f.core = core;
    for (std::size_t k = 0; k < 3; ++k)
        f.factors.push_back(Matrix::Identity(static_cast<Eigen::Index>(core.extent(k)),
                                             static_cast<Eigen::Index>(core.extent(k))));
    DenseTensor r = reconstruct(f);
    for (std::size_t i = 0; i < core.size(); ++i) CHECK(r[i] == core[i]);
}

TEST_CASE("unfoldings satisfy the Kronecker factorization of the Tucker form") {
    TuckerFactors f;
    f.core = ftt::random_tensor({2, 3, 2}, 9);
    f.factors = {ftt::random_matrix(4, 2, 10), ftt::random_matrix(5, 3, 11),
                 ftt::random_matrix(6, 2, 12)};
    DenseTensor x = reconstruct(f);
    const Matrix& a = f.factors[0];
    const Matrix& b = f.factors[1];
    const Matrix& c = f.factors[2];

    Matrix lhs1 = unfold(x, 0);
    Matrix rhs1 = a * unfold(f.core, 0) * kronecker(c, b).transpose();
    CHECK((lhs1 - rhs1).cwiseAbs().maxCoeff() <= 1e-10 * rhs1.cwiseAbs().maxCoeff());

    Matrix lhs3 = unfold(x, 2);
    Matrix rhs3 = c * unfold(f.core, 2) * kronecker(b, a).transpose();
    CHECK((lhs3 - rhs3).cwiseAbs().maxCoeff() <= 1e-10 * rhs3.cwiseAbs().maxCoeff());
}

TEST_CASE("order-4 hosvd works and reconstructs at full rank") {
    DenseTensor t = ftt::random_tensor({3, 4, 2, 5}, 13);
    TuckerFactors f = hosvd(t, {3, 4, 2, 5});
    CHECK(relative_error(t, f) <= 1e-9);
}

TEST_CASE("relative_error identities") {
    DenseTensor t = ftt::random_tensor({3, 4, 5}, 14);
    TuckerFactors f = hosvd(t, {3, 4, 5});
    CHECK(relative_error(t, f) <= 1e-12);

    TuckerFactors zero = f;
    for (std::size_t i = 0; i < zero.core.size(); ++i) zero.core[i] = 0.0;
    CHECK(relative_error(t, zero) == doctest::Approx(1.0).epsilon(1e-12));

    TuckerFactors trunc = hosvd(t, {2, 2, 2});
    DenseTensor rec = reconstruct(trunc);
    double direct = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = t[i] - rec[i];
        direct += d * d;
    }
    CHECK(relative_error(t, trunc) ==
          doctest::Approx(std::sqrt(direct) / norm(t)).epsilon(1e-12));

    CHECK_THROWS_AS(relative_error(DenseTensor({2, 2}, {0, 0, 0, 0}), trunc),
                    std::invalid_argument);
}

TEST_CASE("relative error is monotone in the ranks") {
    for (unsigned seed = 0; seed < 20; ++seed) {
        DenseTensor t = ftt::random_tensor({5, 4, 6}, 100 + seed);
        double prev = relative_error(t, hosvd(t, {1, 1, 1}));
        for (std::size_t r = 2; r <= 4; ++r) {
            double cur = relative_error(t, hosvd(t, {r, r, r}));
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("degenerate extent-1 modes are handled") {
    DenseTensor t = ftt::random_tensor({1, 4, 3}, 15);
    TuckerFactors f = hosvd(t, {1, 2, 2});
    CHECK(f.core.extent(0) == 1);
    CHECK(reconstruct(f).shape() == t.shape());
}
