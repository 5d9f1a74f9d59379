#include "ft/ftd.hpp"

#include "ft/linalg.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ft {

namespace {

constexpr std::size_t kMaxWeightSystem = 20000;

Matrix design_gram(const FtdModel& model) {
    if (model.gram_cache.rows() == static_cast<Eigen::Index>(model.design.size()) &&
        model.gram_cache.rows() == model.gram_cache.cols())
        return model.gram_cache;
    return gram(model.kernel, model.design);
}

DenseTensor reconstruct_with(const DenseTensor& core, const std::vector<Matrix>& factors,
                             const Matrix& continuous_factor) {
    DenseTensor t = core;
    for (std::size_t k = 0; k < factors.size(); ++k) t = mode_product(t, factors[k], k);
    return mode_product(t, continuous_factor, core.order() - 1);
}

double finite_norm(const DenseTensor& t) {
    if (!t.as_vector().allFinite()) throw std::invalid_argument("ftd: non-finite input tensor");
    return norm(t);
}

Matrix random_orthonormal(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
    return q;
}

}  // namespace

Matrix solve_weights(const DenseTensor& t, const DenseTensor& core,
                     const std::vector<Matrix>& discrete_factors, const Matrix& k,
                     double lambda) {
    const std::size_t order = core.order();
    if (discrete_factors.size() != order - 1)
        throw std::invalid_argument("solve_weights: one discrete factor per discrete mode required");
    const std::size_t s = core.extent(order - 1);
    const std::size_t p = static_cast<std::size_t>(k.rows());
    if (s * p > kMaxWeightSystem)
        throw std::invalid_argument("solve_weights: system size s*p exceeds limit");

    DenseTensor proj = t;
    for (std::size_t m = 0; m + 1 < order; ++m)
        proj = mode_product(proj, discrete_factors[m].transpose(), m);

    Matrix gd = unfold(core, order - 1);                        // s x (q r ...)
    Matrix rhs_mat = unfold(proj, order - 1) * gd.transpose();  // p x s
    Eigen::Map<const Vector> rhs(rhs_mat.data(), rhs_mat.size());

    Matrix l = kronecker(gd * gd.transpose(), k);
    l.diagonal().array() += lambda;
    Vector wvec = solve_spd(l, Vector(rhs));
    return Eigen::Map<const Matrix>(wvec.data(), static_cast<Eigen::Index>(p),
                                    static_cast<Eigen::Index>(s));
}

FtdModel fit(const DenseTensor& t, const FtdConfig& cfg, const DesignGrid& design) {
    const std::size_t order = t.order();
    if (order < 2) throw std::invalid_argument("ftd: order must be at least 2");
    if (cfg.ranks.size() != order) throw std::invalid_argument("ftd: one rank per mode required");
    for (std::size_t m = 0; m < order; ++m)
        if (cfg.ranks[m] < 1 || cfg.ranks[m] > t.extent(m))
            throw std::invalid_argument("ftd: rank out of range");
    if (t.extent(order - 1) != design.size())
        throw std::invalid_argument("ftd: last extent must match design grid size");
    if (!(cfg.lambda > 0.0)) throw std::invalid_argument("ftd: lambda must be positive");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("ftd: tol must be positive");
    cfg.kernel.validate();

    const double tensor_norm = finite_norm(t);
    const std::size_t p = design.size();
    const std::size_t s = cfg.ranks[order - 1];

    FtdModel model;
    model.design = design;
    model.kernel = cfg.kernel;
    model.lambda = cfg.lambda;
    model.gram_cache = gram(cfg.kernel, design);

    std::mt19937_64 rng(cfg.seed);
    model.discrete_factors.resize(order - 1);
    for (std::size_t m = 0; m + 1 < order; ++m)
        model.discrete_factors[m] = random_orthonormal(t.extent(m), cfg.ranks[m], rng);

    std::normal_distribution<double> gauss(0.0, 1.0);
    model.weights =
        Matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(s));
    for (Eigen::Index j = 0; j < model.weights.cols(); ++j)
        for (Eigen::Index i = 0; i < model.weights.rows(); ++i)
            model.weights(i, j) = gauss(rng) / static_cast<double>(p);

    Matrix c = model.gram_cache * model.weights;

    std::vector<std::size_t> core_shape(cfg.ranks);
    auto update_core = [&](const Matrix& continuous_factor) {
        DenseTensor proj = t;
        for (std::size_t m = 0; m + 1 < order; ++m)
            proj = mode_product(proj, model.discrete_factors[m].transpose(), m);
        Matrix g_unf = solve_left(continuous_factor, unfold(proj, order - 1));
        model.core = fold(g_unf, order - 1, core_shape);
    };
    update_core(c);

    double eps_prev = 0.0;
    for (std::size_t sweep = 1; sweep <= cfg.max_iters; ++sweep) {
        for (std::size_t m = 0; m + 1 < order; ++m) {
            DenseTensor rest = model.core;
            for (std::size_t j = 0; j + 1 < order; ++j)
                if (j != m) rest = mode_product(rest, model.discrete_factors[j], j);
            rest = mode_product(rest, c, order - 1);
            Matrix a1 = solve_right(unfold(t, m), unfold(rest, m));
            SvdResult svd = truncated_svd(a1, cfg.ranks[m]);
            model.discrete_factors[m] = svd.u;
            model.core = mode_product(model.core, svd.s.asDiagonal() * svd.vt, m);
        }

        model.weights = solve_weights(t, model.core, model.discrete_factors,
                                      model.gram_cache, cfg.lambda);
        c = model.gram_cache * model.weights;
        update_core(c);

        DenseTensor rec = reconstruct_with(model.core, model.discrete_factors, c);
        double resid_sq = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double d = t[i] - rec[i];
            resid_sq += d * d;
        }
        const double eps = std::sqrt(resid_sq) / tensor_norm;
        model.trace.push_back(eps);
        model.objective_trace.push_back(
            0.5 * resid_sq +
            0.5 * cfg.lambda * weighted_norm_sq(model.weights, model.gram_cache));

        const double threshold = cfg.norm_scaled_stop ? cfg.tol * tensor_norm : cfg.tol;
        if (sweep > 1 && std::abs(eps - eps_prev) < threshold) break;
        eps_prev = eps;
    }
    return model;
}

double objective(const FtdModel& model, const DenseTensor& t) {
    Matrix k = design_gram(model);
    DenseTensor rec = reconstruct_with(model.core, model.discrete_factors, k * model.weights);
    if (rec.shape() != t.shape()) throw std::invalid_argument("objective: shape mismatch");
    double resid_sq = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = t[i] - rec[i];
        resid_sq += d * d;
    }
    return 0.5 * resid_sq + 0.5 * model.lambda * weighted_norm_sq(model.weights, k);
}

Matrix evaluate_factor(const FtdModel& model, const DesignGrid& points) {
    return cross_gram(model.kernel, points, model.design) * model.weights;
}

DenseTensor reconstruct_on(const FtdModel& model, const DesignGrid& points) {
    return reconstruct_with(model.core, model.discrete_factors, evaluate_factor(model, points));
}

DenseTensor reconstruct(const FtdModel& model) {
    return reconstruct_with(model.core, model.discrete_factors,
                            design_gram(model) * model.weights);
}

}  // namespace ft
