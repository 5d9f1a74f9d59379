#include "ft/tucker.hpp"

#include "ft/linalg.hpp"

#include <stdexcept>

namespace ft {

TuckerFactors hosvd(const DenseTensor& t, const std::vector<std::size_t>& ranks) {
    if (ranks.size() != t.order()) throw std::invalid_argument("hosvd: one rank per mode required");
    for (std::size_t k = 0; k < ranks.size(); ++k)
        if (ranks[k] < 1 || ranks[k] > t.extent(k))
            throw std::invalid_argument("hosvd: rank out of range");

    TuckerFactors out;
    out.factors.resize(t.order());
    for (std::size_t k = 0; k < t.order(); ++k)
        out.factors[k] = truncated_svd(unfold(t, k), ranks[k]).u;

    out.core = t;
    for (std::size_t k = 0; k < t.order(); ++k)
        out.core = mode_product(out.core, out.factors[k].transpose(), k);
    return out;
}

DenseTensor reconstruct(const TuckerFactors& f) {
    if (f.factors.size() != f.core.order())
        throw std::invalid_argument("reconstruct: factor count mismatch");
    DenseTensor t = f.core;
    for (std::size_t k = 0; k < f.factors.size(); ++k)
        t = mode_product(t, f.factors[k], k);
    return t;
}

double relative_error(const DenseTensor& t, const TuckerFactors& f) {
    const double denom = norm(t);
    if (denom == 0.0) throw std::invalid_argument("relative_error: zero tensor");
    DenseTensor r = reconstruct(f);
    if (r.shape() != t.shape()) throw std::invalid_argument("relative_error: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = t[i] - r[i];
        acc += d * d;
    }
    return std::sqrt(acc) / denom;
}

}  // namespace ft
