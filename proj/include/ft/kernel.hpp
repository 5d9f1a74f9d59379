#pragma once

#include "ft/tensor.hpp"

#include <string>
#include <vector>

namespace ft {

enum class KernelFamily { Gaussian };

// The Gaussian bandwidth is the length scale: K(x,y) = exp(-(x-y)^2 / (2 c^2)).
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    double bandwidth = 1.0;

    void validate() const;
};

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// Strictly increasing, finite sampling locations of the continuous mode.
class DesignGrid {
public:
    DesignGrid() = default;
    explicit DesignGrid(std::vector<double> points);

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    const std::vector<double>& points() const { return points_; }

    static DesignGrid uniform(double lo, double hi, std::size_t count);
    DesignGrid subset(const std::vector<std::size_t>& indices) const;

    bool operator==(const DesignGrid& other) const { return points_ == other.points_; }

private:
    std::vector<double> points_;
};

// p x p kernel matrix on the design grid.
Matrix gram(const KernelSpec& spec, const DesignGrid& grid);

// p' x p matrix of kernel evaluations K(eval_i, design_j). Restricted to the
// design grid itself this reproduces gram() bitwise.
Matrix cross_gram(const KernelSpec& spec, const DesignGrid& eval_points, const DesignGrid& design);

}  // namespace ft
