#include "ft/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace ft {

void KernelSpec::validate() const {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw std::invalid_argument("kernel bandwidth must be positive and finite");
}

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::Gaussian: return "gaussian";
    }
    throw std::invalid_argument("unknown kernel family");
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "gaussian") return KernelFamily::Gaussian;
    throw std::invalid_argument("unknown kernel family: " + name);
}

DesignGrid::DesignGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("design grid must be nonempty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i])) throw std::invalid_argument("design grid points must be finite");
        if (i > 0 && !(points_[i] > points_[i - 1]))
            throw std::invalid_argument("design grid must be strictly increasing");
    }
}

DesignGrid DesignGrid::uniform(double lo, double hi, std::size_t count) {
    if (count == 0) throw std::invalid_argument("design grid must be nonempty");
    std::vector<double> pts(count);
    if (count == 1) {
        pts[0] = lo;
    } else {
        const double step = (hi - lo) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i) pts[i] = lo + step * static_cast<double>(i);
    }
    return DesignGrid(std::move(pts));
}

DesignGrid DesignGrid::subset(const std::vector<std::size_t>& indices) const {
    std::vector<double> pts;
    pts.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= points_.size()) throw std::out_of_range("grid index out of range");
        pts.push_back(points_[i]);
    }
    return DesignGrid(std::move(pts));
}

namespace {

double evaluate(const KernelSpec& spec, double x, double y) {
    const double d = x - y;
    return std::exp(-(d * d) / (2.0 * spec.bandwidth * spec.bandwidth));
}

}  // namespace

Matrix cross_gram(const KernelSpec& spec, const DesignGrid& eval_points, const DesignGrid& design) {
    spec.validate();
    Matrix out(static_cast<Eigen::Index>(eval_points.size()),
               static_cast<Eigen::Index>(design.size()));
#pragma omp parallel for schedule(static) if (eval_points.size() * design.size() > 4096)
    for (long long i = 0; i < static_cast<long long>(eval_points.size()); ++i)
        for (std::size_t j = 0; j < design.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                evaluate(spec, eval_points[static_cast<std::size_t>(i)], design[j]);
    return out;
}

Matrix gram(const KernelSpec& spec, const DesignGrid& grid) {
    return cross_gram(spec, grid, grid);
}

}  // namespace ft
