#include "ft/classify.hpp"

#include "ft/datagen.hpp"
#include "ft/metrics.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace ft;

namespace {

// Small well-separated dataset: class templates are disjoint indicator-like
// images so the dominant subspaces barely overlap.
LabeledDataset separable_dataset(int per_class, double noise, unsigned seed) {
    const std::size_t h = 6, w = 6, p = 10;
    DesignGrid grid = DesignGrid::uniform(1.0, 10.0, p);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, noise);

    LabeledDataset data;
    data.grid = grid;
    for (int c = 0; c < 3; ++c) {
        DenseTensor base({h, w, p});
        for (std::size_t l = 0; l < p; ++l)
            for (std::size_t j = 0; j < w; ++j)
                for (std::size_t i = 0; i < h; ++i) {
                    const bool on = i / 2 == static_cast<std::size_t>(c);
                    base[i + h * (j + w * l)] =
                        on ? (1.0 + 0.3 * std::sin(0.5 * static_cast<double>(l) + c)) : 0.0;
                }
        for (int s = 0; s < per_class; ++s) {
            DenseTensor sample = base;
            for (std::size_t i = 0; i < sample.size(); ++i) sample[i] += nd(rng);
            data.samples.push_back(std::move(sample));
            data.labels.push_back(c);
        }
    }
    return data;
}

}  // namespace

TEST_CASE("basis elements are orthonormal") {
    LabeledDataset data = separable_dataset(6, 0.05, 1);
    std::vector<ClassBasis> bases = train_hosvd(data, {3, 3, 3}, 3);
    REQUIRE(bases.size() == 3);
    for (const auto& basis : bases) {
        REQUIRE(basis.elements.size() == 3);
        for (std::size_t a = 0; a < basis.elements.size(); ++a) {
            CHECK(norm(basis.elements[a]) == doctest::Approx(1.0).epsilon(1e-10));
            for (std::size_t b = 0; b < a; ++b)
                CHECK(std::abs(inner(basis.elements[a], basis.elements[b])) <= 1e-9);
        }
    }
}

TEST_CASE("residual equals one minus the squared projection") {
    LabeledDataset data = separable_dataset(5, 0.05, 2);
    std::vector<ClassBasis> bases = train_hosvd(data, {2, 2, 2}, 2);
    DenseTensor y = data.samples[0];
    const double n = norm(y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] /= n;

    double proj = 0.0;
    for (const auto& d : bases[0].elements) {
        const double ip = inner(y, d);
        proj += ip * ip;
    }
    CHECK(residual(y, bases[0]) == doctest::Approx(1.0 - proj).epsilon(1e-12));
    CHECK(residual(y, bases[0]) >= -1e-10);
    CHECK(residual(y, bases[0]) <= 1.0 + 1e-10);
}

TEST_CASE("residual of a basis element against its own basis is zero") {
    LabeledDataset data = separable_dataset(5, 0.05, 3);
    std::vector<ClassBasis> bases = train_hosvd(data, {2, 2, 2}, 2);
    CHECK(residual(bases[1].elements[0], bases[1]) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("residual requires unit-norm input") {
    LabeledDataset data = separable_dataset(4, 0.05, 4);
    std::vector<ClassBasis> bases = train_hosvd(data, {2, 2, 2}, 1);
    DenseTensor y = data.samples[0];  // not normalized
    CHECK_THROWS_AS(residual(y, bases[0]), std::invalid_argument);
}

TEST_CASE("predict classifies a separable dataset perfectly") {
    LabeledDataset train = separable_dataset(8, 0.05, 5);
    LabeledDataset test = separable_dataset(4, 0.05, 99);
    std::vector<ClassBasis> bases = train_hosvd(train, {3, 3, 3}, 3);
    std::vector<int> pred;
    for (const auto& s : test.samples) pred.push_back(predict(s, bases));
    CHECK(accuracy(test.labels, pred) == 1.0);
}

TEST_CASE("predict breaks ties by smallest label") {
    DenseTensor e1({2, 2}, {1.0, 0.0, 0.0, 0.0});
    ClassBasis b5{5, {e1}};
    ClassBasis b2{2, {e1}};
    DenseTensor y({2, 2}, {1.0, 0.0, 0.0, 0.0});
    CHECK(predict(y, {b5, b2}) == 2);
    CHECK(predict(y, {b2, b5}) == 2);
}

TEST_CASE("basis_from_tensor validates the truncation") {
    DenseTensor class_tensor = ftt::random_tensor({5, 3, 3, 4}, 6);
    CHECK_THROWS_AS(basis_from_tensor(class_tensor, 0, {3, 3, 4}, 0), std::invalid_argument);
    CHECK_THROWS_AS(basis_from_tensor(class_tensor, 0, {3, 3, 4}, 5), std::invalid_argument);
    ClassBasis b = basis_from_tensor(class_tensor, 3, {2, 2, 2}, 4);
    CHECK(b.label == 3);
    CHECK(b.elements.size() == 4);
}

TEST_CASE("train_ftd fits one model per class on the training grid") {
    LabeledDataset train = separable_dataset(6, 0.02, 7);
    FtdConfig cfg;
    cfg.ranks = {6, 3, 3, 2};
    cfg.lambda = 1e-6;
    cfg.kernel = {KernelFamily::Gaussian, 3.0};
    cfg.max_iters = 40;
    cfg.tol = 1e-8;
    cfg.seed = 1;
    std::map<int, FtdModel> models = train_ftd(train, cfg);
    REQUIRE(models.size() == 3);
    for (const auto& [label, model] : models) {
        CHECK(model.design.size() == train.grid.size());
        CHECK(model.trace.back() <= 0.2);
        CHECK(model.core.order() == 4);
    }
}

TEST_CASE("transfer_bases on the training grid reproduces classification") {
    LabeledDataset train = separable_dataset(6, 0.02, 8);
    LabeledDataset test = separable_dataset(3, 0.02, 100);
    FtdConfig cfg;
    cfg.ranks = {6, 3, 3, 2};
    cfg.lambda = 1e-6;
    cfg.kernel = {KernelFamily::Gaussian, 3.0};
    cfg.max_iters = 40;
    cfg.seed = 2;
    std::map<int, FtdModel> models = train_ftd(train, cfg);
    std::vector<ClassBasis> bases = transfer_bases(models, train.grid, {3, 3, 3}, 3);
    std::vector<int> pred;
    for (const auto& s : test.samples) pred.push_back(predict(s, bases));
    CHECK(accuracy(test.labels, pred) == 1.0);
}

TEST_CASE("transfer_bases to a finer grid keeps the classes separable") {
    LabeledDataset train = separable_dataset(6, 0.02, 9);
    FtdConfig cfg;
    cfg.ranks = {6, 3, 3, 2};
    cfg.lambda = 1e-6;
    cfg.kernel = {KernelFamily::Gaussian, 3.0};
    cfg.max_iters = 40;
    cfg.seed = 3;
    std::map<int, FtdModel> models = train_ftd(train, cfg);

    DesignGrid fine = DesignGrid::uniform(1.0, 10.0, 19);
    std::vector<ClassBasis> bases = transfer_bases(models, fine, {3, 3, 3}, 3);
    REQUIRE(bases.size() == 3);
    for (const auto& b : bases) {
        CHECK(b.elements[0].extent(2) == 19);
        CHECK(norm(b.elements[0]) == doctest::Approx(1.0).epsilon(1e-10));
    }
    // the reconstructed class means on the fine grid stay closest to their own basis
    for (const auto& [label, model] : models) {
        DenseTensor rec = reconstruct_on(model, fine);
        // mean over the sample mode (mode 0 of the stacked class tensor)
        std::vector<std::size_t> shape(rec.shape().begin() + 1, rec.shape().end());
        DenseTensor mean(shape);
        const std::size_t count = rec.extent(0);
        const std::size_t rest = rec.size() / count;
        for (std::size_t i = 0; i < rest; ++i) {
            double acc = 0.0;
            for (std::size_t nu = 0; nu < count; ++nu) acc += rec[nu + count * i];
            mean[i] = acc / static_cast<double>(count);
        }
        CHECK(predict(mean, bases) == label);
    }
}

TEST_CASE("cross_validate is deterministic and ranks a sane grid") {
    LabeledDataset data = separable_dataset(8, 0.05, 10);
    std::vector<std::vector<std::size_t>> rank_grid = {{2, 2, 2}, {3, 3, 3}};
    std::vector<std::size_t> ks = {1, 2, 3};
    CvResult r1 = cross_validate(data, rank_grid, ks, 4, 17);
    CvResult r2 = cross_validate(data, rank_grid, ks, 4, 17);
    REQUIRE(r1.mean_accuracy.size() == 2);
    REQUIRE(r1.mean_accuracy[0].size() == 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(r1.mean_accuracy[i][j] == r2.mean_accuracy[i][j]);
            CHECK(r1.mean_accuracy[i][j] >= 0.0);
            CHECK(r1.mean_accuracy[i][j] <= 1.0);
        }
    // separable data: the richest configuration should classify perfectly
    CHECK(r1.mean_accuracy[1][2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(cross_validate(data, rank_grid, ks, 1, 0), std::invalid_argument);
}

TEST_CASE("cross_validate on permuted labels is near chance") {
    LabeledDataset data = separable_dataset(8, 0.05, 11);
    std::mt19937_64 rng(123);
    std::shuffle(data.labels.begin(), data.labels.end(), rng);
    CvResult r = cross_validate(data, {{2, 2, 2}}, {2}, 4, 3);
    CHECK(r.mean_accuracy[0][0] < 0.85);
}

TEST_CASE("train_hosvd validates input") {
    LabeledDataset data = separable_dataset(3, 0.05, 12);
    CHECK_THROWS_AS(train_hosvd(data, {3, 3}, 2), std::invalid_argument);
    LabeledDataset bad = data;
    bad.labels.pop_back();
    CHECK_THROWS_AS(train_hosvd(bad, {3, 3, 3}, 2), std::invalid_argument);
}
