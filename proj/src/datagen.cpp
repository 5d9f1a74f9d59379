#include "ft/datagen.hpp"

#include "ft/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ft {

void SynthConfig::validate() const {
    if (num_classes < 1 || samples_per_class < 1 || height < 2 || width < 1 || p < 1)
        throw std::invalid_argument("synth config: counts and sizes must be positive");
    if (knot_count < 4) throw std::invalid_argument("synth config: knot_count must be >= 4");
    if (!(value_lo < value_hi)) throw std::invalid_argument("synth config: value range empty");
    if (noise_std < 0.0) throw std::invalid_argument("synth config: noise_std must be >= 0");
}

std::vector<double> natural_cubic_spline(const std::vector<double>& xs,
                                         const std::vector<double>& ys,
                                         const std::vector<double>& eval) {
    const std::size_t n = xs.size();
    if (n < 2 || ys.size() != n) throw std::invalid_argument("spline: need >= 2 knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("spline: knots must be increasing");

    // Second derivatives from the natural-boundary tridiagonal system.
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = xs[i + 1] - xs[i];
    std::vector<double> m(n, 0.0);
    if (n > 2) {
        std::vector<double> diag(n - 2), rhs(n - 2), sub(n - 2, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
            rhs[i - 1] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
            if (i > 1) sub[i - 1] = h[i - 1];
        }
        for (std::size_t i = 1; i < n - 2; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * h[i];
            rhs[i] -= w * rhs[i - 1];
        }
        for (std::size_t i = n - 2; i-- > 0;) {
            double v = rhs[i];
            if (i + 1 < n - 2) v -= h[i + 1] * m[i + 2];
            m[i + 1] = v / diag[i];
        }
    }

    std::vector<double> out(eval.size());
    for (std::size_t e = 0; e < eval.size(); ++e) {
        double x = std::clamp(eval[e], xs.front(), xs.back());
        std::size_t i = static_cast<std::size_t>(
            std::upper_bound(xs.begin(), xs.end() - 1, x) - xs.begin());
        if (i > 0) --i;
        if (i >= n - 1) i = n - 2;
        const double a = xs[i + 1] - x, b = x - xs[i];
        out[e] = m[i] * a * a * a / (6.0 * h[i]) + m[i + 1] * b * b * b / (6.0 * h[i]) +
                 (ys[i] / h[i] - m[i] * h[i] / 6.0) * a +
                 (ys[i + 1] / h[i] - m[i + 1] * h[i] / 6.0) * b;
    }
    return out;
}

namespace {

Vector spline_curve(std::mt19937_64& rng, int knot_count, double lo, double hi,
                    const DesignGrid& grid) {
    std::uniform_real_distribution<double> unif(lo, hi);
    std::vector<double> xs(static_cast<std::size_t>(knot_count));
    std::vector<double> ys(static_cast<std::size_t>(knot_count));
    const double x0 = grid[0], x1 = grid[grid.size() - 1];
    for (int i = 0; i < knot_count; ++i) {
        xs[static_cast<std::size_t>(i)] =
            x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(knot_count - 1);
        ys[static_cast<std::size_t>(i)] = unif(rng);
    }
    std::vector<double> vals = natural_cubic_spline(xs, ys, grid.points());
    return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace

std::pair<Vector, Vector> smooth_curves(unsigned class_seed, int knot_count, double value_lo,
                                        double value_hi, const DesignGrid& grid) {
    if (knot_count < 4) throw std::invalid_argument("smooth_curves: knot_count must be >= 4");
    std::mt19937_64 rng(class_seed);
    Vector a = spline_curve(rng, knot_count, value_lo, value_hi, grid);
    for (int tries = 0; tries < 100; ++tries) {
        Vector b = spline_curve(rng, knot_count, value_lo, value_hi, grid);
        const double cosang =
            std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
        if (std::acos(cosang) >= 1e-3) return {a, b};
    }
    throw std::runtime_error("smooth_curves: failed to draw independent curves");
}

LabeledDataset synth_digit_dataset(const SynthConfig& cfg) {
    cfg.validate();
    const std::size_t h = static_cast<std::size_t>(cfg.height);
    const std::size_t w = static_cast<std::size_t>(cfg.width);
    const std::size_t p = static_cast<std::size_t>(cfg.p);

    LabeledDataset data;
    data.grid = DesignGrid::uniform(cfg.value_lo, cfg.value_hi, p);

    for (int c = 0; c < cfg.num_classes; ++c) {
        const unsigned class_seed = cfg.seed * 1000003u + static_cast<unsigned>(c);
        auto [s_lower, s_upper] =
            smooth_curves(class_seed, cfg.knot_count, cfg.value_lo, cfg.value_hi, data.grid);

        // Class template: sum of 3 wide Gaussian bumps drawn from the central
        // band of the image. The templates of different classes overlap
        // heavily on purpose, so that class identity is carried mostly by the
        // continuous-mode curves rather than by the spatial pattern.
        std::mt19937_64 trng(class_seed ^ 0x9e3779b97f4a7c15ull);
        std::uniform_real_distribution<double> upos_i(0.25 * static_cast<double>(h - 1),
                                                      0.75 * static_cast<double>(h - 1));
        std::uniform_real_distribution<double> upos_j(0.25 * static_cast<double>(w - 1),
                                                      0.75 * static_cast<double>(w - 1));
        const double scale = static_cast<double>(std::max(h, w));
        std::uniform_real_distribution<double> usig(0.35 * scale, 0.6 * scale);
        std::uniform_real_distribution<double> uamp(0.8, 1.2);
        Matrix tmpl = Matrix::Zero(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(w));
        for (int b = 0; b < 3; ++b) {
            const double ci = upos_i(trng), cj = upos_j(trng);
            const double sig = usig(trng), amp = uamp(trng);
            for (std::size_t i = 0; i < h; ++i)
                for (std::size_t j = 0; j < w; ++j) {
                    const double di = static_cast<double>(i) - ci;
                    const double dj = static_cast<double>(j) - cj;
                    tmpl(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                        amp * std::exp(-(di * di + dj * dj) / (2.0 * sig * sig));
                }
        }

        std::mt19937_64 nrng(class_seed ^ 0xc2b2ae3d27d4eb4full);
        std::normal_distribution<double> noise(0.0, 1.0);
        for (int sidx = 0; sidx < cfg.samples_per_class; ++sidx) {
            Matrix img = tmpl;
            if (cfg.noise_std > 0.0)
                for (Eigen::Index j = 0; j < img.cols(); ++j)
                    for (Eigen::Index i = 0; i < img.rows(); ++i)
                        img(i, j) += cfg.noise_std * noise(nrng);

            // Upper half: rows [0, h/2); lower half: rows [h/2, h).
            DenseTensor sample({h, w, p});
            for (std::size_t l = 0; l < p; ++l)
                for (std::size_t j = 0; j < w; ++j)
                    for (std::size_t i = 0; i < h; ++i) {
                        const double v = img(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j));
                        const double curve = i < h / 2 ? s_upper[static_cast<Eigen::Index>(l)]
                                                       : s_lower[static_cast<Eigen::Index>(l)];
                        sample[i + h * (j + w * l)] = v * curve;
                    }
            data.samples.push_back(std::move(sample));
            data.labels.push_back(c);
        }
    }
    return data;
}

LabeledDataset subsample(const LabeledDataset& data, const std::vector<std::size_t>& indices) {
    data.validate();
    if (indices.empty()) throw std::invalid_argument("subsample: empty index list");
    for (std::size_t i = 1; i < indices.size(); ++i)
        if (!(indices[i] > indices[i - 1]))
            throw std::invalid_argument("subsample: indices must be strictly increasing");
    if (indices.back() >= data.grid.size())
        throw std::out_of_range("subsample: grid index out of range");

    LabeledDataset out;
    out.grid = data.grid.subset(indices);
    out.labels = data.labels;
    const auto& shape = data.samples.front().shape();
    std::vector<std::size_t> new_shape = shape;
    new_shape.back() = indices.size();
    const std::size_t slice_size = data.samples.front().size() / shape.back();
    for (const auto& s : data.samples) {
        DenseTensor t(new_shape);
        for (std::size_t li = 0; li < indices.size(); ++li)
            for (std::size_t i = 0; i < slice_size; ++i)
                t[i + slice_size * li] = s[i + slice_size * indices[li]];
        out.samples.push_back(std::move(t));
    }
    return out;
}

PlantedInstance planted_ftd_instance(const std::vector<std::size_t>& shape,
                                     const std::vector<std::size_t>& ranks,
                                     const KernelSpec& kernel, unsigned seed) {
    if (shape.size() != ranks.size() || shape.size() < 2)
        throw std::invalid_argument("planted instance: shape/ranks mismatch");
    for (std::size_t m = 0; m < shape.size(); ++m)
        if (ranks[m] < 1 || ranks[m] > shape[m])
            throw std::invalid_argument("planted instance: rank out of range");

    const std::size_t order = shape.size();
    const std::size_t p = shape[order - 1];
    const std::size_t s = ranks[order - 1];

    FtdModel truth;
    truth.design = DesignGrid::uniform(1.0, 10.0, p);
    truth.kernel = kernel;
    truth.lambda = 1e-8;
    truth.gram_cache = gram(kernel, truth.design);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    truth.discrete_factors.resize(order - 1);
    for (std::size_t m = 0; m + 1 < order; ++m) {
        Matrix g(static_cast<Eigen::Index>(shape[m]), static_cast<Eigen::Index>(ranks[m]));
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = gauss(rng);
        Eigen::HouseholderQR<Matrix> qr(g);
        truth.discrete_factors[m] = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
    }

    // Smooth weight columns: spline curves over the design grid, unit scaled.
    truth.weights = Matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(s));
    for (std::size_t j = 0; j < s; ++j) {
        std::mt19937_64 crng(seed * 7919u + static_cast<unsigned>(j) + 1u);
        Vector col = spline_curve(crng, 8, -1.0, 1.0, truth.design);
        truth.weights.col(static_cast<Eigen::Index>(j)) = col / static_cast<double>(p);
    }

    truth.core = DenseTensor(std::vector<std::size_t>(ranks));
    for (std::size_t i = 0; i < truth.core.size(); ++i) truth.core[i] = gauss(rng);

    PlantedInstance inst;
    inst.truth = truth;
    inst.tensor = reconstruct(inst.truth);
    return inst;
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data,
                                                           double train_fraction, unsigned seed) {
    data.validate();
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: fraction must be in (0, 1)");

    LabeledDataset train, test;
    train.grid = data.grid;
    test.grid = data.grid;
    std::mt19937_64 rng(seed);
    std::vector<int> ids;
    for (int id : data.class_ids()) ids.push_back(id);
    for (int id : ids) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.labels[i] == id) idx.push_back(i);
        if (idx.size() < 2) throw std::invalid_argument("split: class needs >= 2 samples");
        std::shuffle(idx.begin(), idx.end(), rng);
        std::size_t n_train = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(idx.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto& dst = i < n_train ? train : test;
            dst.samples.push_back(data.samples[idx[i]]);
            dst.labels.push_back(id);
        }
    }
    return {train, test};
}

}  // namespace ft
