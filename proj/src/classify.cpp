#include "ft/classify.hpp"

#include "ft/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace ft {

std::vector<int> LabeledDataset::class_ids() const {
    std::set<int> ids(labels.begin(), labels.end());
    return std::vector<int>(ids.begin(), ids.end());
}

void LabeledDataset::validate() const {
    if (samples.empty()) throw std::invalid_argument("dataset: no samples");
    if (samples.size() != labels.size()) throw std::invalid_argument("dataset: label count mismatch");
    const auto& shape = samples.front().shape();
    for (const auto& s : samples)
        if (s.shape() != shape) throw std::invalid_argument("dataset: inconsistent sample shapes");
    if (shape.back() != grid.size())
        throw std::invalid_argument("dataset: sample last extent must match grid size");
}

namespace {

DenseTensor normalized(const DenseTensor& t) {
    const double n = norm(t);
    if (n == 0.0) throw std::invalid_argument("cannot normalize a zero sample");
    DenseTensor out = t;
    out.as_vector() /= n;
    return out;
}

// Stack order-(N-1) samples along a new leading mode.
DenseTensor stack_samples(const std::vector<const DenseTensor*>& samples) {
    const std::size_t count = samples.size();
    std::vector<std::size_t> shape;
    shape.push_back(count);
    for (std::size_t e : samples.front()->shape()) shape.push_back(e);
    DenseTensor out(shape);
    const std::size_t sample_size = samples.front()->size();
    for (std::size_t v = 0; v < count; ++v)
        for (std::size_t i = 0; i < sample_size; ++i)
            out[v + count * i] = (*samples[v])[i];
    return out;
}

DenseTensor slice_mode0(const DenseTensor& t, std::size_t index) {
    const std::size_t m = t.extent(0);
    std::vector<std::size_t> shape(t.shape().begin() + 1, t.shape().end());
    DenseTensor out(shape);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = t[index + m * i];
    return out;
}

std::vector<std::pair<int, std::vector<std::size_t>>> group_by_label(const LabeledDataset& data) {
    std::vector<std::pair<int, std::vector<std::size_t>>> groups;
    for (int id : data.class_ids()) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.labels[i] == id) idx.push_back(i);
        groups.emplace_back(id, std::move(idx));
    }
    return groups;
}

DenseTensor stacked_class_tensor(const LabeledDataset& data, const std::vector<std::size_t>& idx) {
    std::vector<const DenseTensor*> ptrs;
    std::vector<DenseTensor> owned;
    owned.reserve(idx.size());
    for (std::size_t i : idx) owned.push_back(normalized(data.samples[i]));
    for (const auto& s : owned) ptrs.push_back(&s);
    return stack_samples(ptrs);
}

}  // namespace

ClassBasis basis_from_tensor(const DenseTensor& class_tensor, int label,
                             const std::vector<std::size_t>& ranks, std::size_t k) {
    const std::size_t count = class_tensor.extent(0);
    if (k < 1 || k >= count)
        throw std::invalid_argument("class basis: truncation k must satisfy 1 <= k < class size");
    if (ranks.size() != class_tensor.order() - 1)
        throw std::invalid_argument("class basis: one rank per non-sample mode required");

    std::vector<std::size_t> full_ranks;
    full_ranks.push_back(count);
    full_ranks.insert(full_ranks.end(), ranks.begin(), ranks.end());
    TuckerFactors f = hosvd(class_tensor, full_ranks);

    DenseTensor d = f.core;
    for (std::size_t m = 1; m < f.factors.size(); ++m)
        d = mode_product(d, f.factors[m], m);

    // The truncation of the non-sample modes leaves the core slices only
    // approximately mutually orthogonal, so the slices are orthonormalized in
    // order (modified Gram-Schmidt); the first element and the span of the
    // leading slices are unchanged.
    ClassBasis basis;
    basis.label = label;
    basis.elements.reserve(k);
    for (std::size_t v = 0; v < k; ++v) {
        DenseTensor e = slice_mode0(d, v);
        const double initial = norm(e);
        for (const auto& prev : basis.elements) {
            const double ip = inner(e, prev);
            for (std::size_t i = 0; i < e.size(); ++i) e[i] -= ip * prev[i];
        }
        const double n = norm(e);
        if (!(n > 1e-10 * initial))
            throw std::runtime_error("class basis: slice " + std::to_string(v) +
                                     " is linearly dependent on earlier slices");
        e.as_vector() /= n;
        basis.elements.push_back(std::move(e));
    }
    return basis;
}

std::vector<ClassBasis> train_hosvd(const LabeledDataset& data,
                                    const std::vector<std::size_t>& ranks, std::size_t k) {
    data.validate();
    std::vector<ClassBasis> bases;
    for (const auto& [label, idx] : group_by_label(data))
        bases.push_back(basis_from_tensor(stacked_class_tensor(data, idx), label, ranks, k));
    return bases;
}

double residual(const DenseTensor& y, const ClassBasis& basis) {
    if (basis.elements.empty()) throw std::invalid_argument("residual: empty basis");
    if (std::abs(norm(y) - 1.0) > 1e-6)
        throw std::invalid_argument("residual: sample must be unit-normalized");
    double r = 1.0;
    for (const auto& d : basis.elements) {
        const double a = inner(y, d);
        r -= a * a;
    }
    return r;
}

int predict(const DenseTensor& y, const std::vector<ClassBasis>& bases) {
    if (bases.empty()) throw std::invalid_argument("predict: no bases");
    DenseTensor yn = normalized(y);
    double best = 0.0;
    int best_label = 0;
    bool first = true;
    for (const auto& b : bases) {
        const double r = residual(yn, b);
        if (first || r < best || (r == best && b.label < best_label)) {
            best = r;
            best_label = b.label;
            first = false;
        }
    }
    return best_label;
}

std::map<int, FtdModel> train_ftd(const LabeledDataset& data, const FtdConfig& cfg) {
    data.validate();
    std::map<int, FtdModel> models;
    for (const auto& [label, idx] : group_by_label(data)) {
        DenseTensor stacked = stacked_class_tensor(data, idx);
        FtdConfig class_cfg = cfg;
        class_cfg.ranks[0] = std::min(cfg.ranks[0], idx.size());
        class_cfg.seed = cfg.seed + static_cast<unsigned>(label);
        models.emplace(label, fit(stacked, class_cfg, data.grid));
    }
    return models;
}

std::vector<ClassBasis> transfer_bases(const std::map<int, FtdModel>& models,
                                       const DesignGrid& new_grid,
                                       const std::vector<std::size_t>& ranks, std::size_t k) {
    std::vector<ClassBasis> bases;
    for (const auto& [label, model] : models)
        bases.push_back(basis_from_tensor(reconstruct_on(model, new_grid), label, ranks, k));
    return bases;
}

CvResult cross_validate(const LabeledDataset& data,
                        const std::vector<std::vector<std::size_t>>& rank_grid,
                        const std::vector<std::size_t>& k_values, int folds, unsigned seed) {
    data.validate();
    if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
    if (rank_grid.empty() || k_values.empty())
        throw std::invalid_argument("cross_validate: empty search grid");

    // Stratified fold assignment: per-class shuffle, round-robin folds.
    std::vector<int> fold_of(data.size(), 0);
    std::mt19937_64 rng(seed);
    for (const auto& [label, idx] : group_by_label(data)) {
        if (idx.size() < static_cast<std::size_t>(folds))
            throw std::invalid_argument("cross_validate: class smaller than fold count");
        std::vector<std::size_t> shuffled = idx;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        for (std::size_t i = 0; i < shuffled.size(); ++i)
            fold_of[shuffled[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
    }
    const std::size_t k_max = *std::max_element(k_values.begin(), k_values.end());

    CvResult result;
    result.rank_grid = rank_grid;
    result.k_values = k_values;
    result.mean_accuracy.assign(rank_grid.size(),
                                std::vector<double>(k_values.size(), 0.0));

    for (int f = 0; f < folds; ++f) {
        LabeledDataset train, test;
        train.grid = data.grid;
        test.grid = data.grid;
        for (std::size_t i = 0; i < data.size(); ++i) {
            auto& dst = fold_of[i] == f ? test : train;
            dst.samples.push_back(data.samples[i]);
            dst.labels.push_back(data.labels[i]);
        }
        for (std::size_t ri = 0; ri < rank_grid.size(); ++ri) {
            std::vector<ClassBasis> bases = train_hosvd(train, rank_grid[ri], k_max);
            for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
                std::vector<ClassBasis> truncated = bases;
                for (auto& b : truncated) b.elements.resize(k_values[ki]);
                std::vector<int> pred;
                pred.reserve(test.size());
                for (const auto& s : test.samples) pred.push_back(predict(s, truncated));
                result.mean_accuracy[ri][ki] += accuracy(test.labels, pred);
            }
        }
    }
    for (auto& row : result.mean_accuracy)
        for (double& v : row) v /= static_cast<double>(folds);
    return result;
}

}  // namespace ft
