// Benchmark of the OpenMP tensor kernels against the serial reference.

#include "ft/tensor.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>

using namespace ft;

namespace {

DenseTensor random_tensor(const std::vector<std::size_t>& shape, unsigned seed) {
    std::size_t n = 1;
    for (std::size_t e : shape) n *= e;
    std::vector<double> data(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (auto& v : data) v = nd(rng);
    return DenseTensor(shape, std::move(data));
}

template <typename F>
double time_ms(F&& f, int reps) {
    // one warm-up, then best of reps
    f();
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto start = std::chrono::steady_clock::now();
        f();
        auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

void report(const std::string& name, double par_ms, double ser_ms) {
    std::cout << name << ": parallel " << par_ms << " ms, serial " << ser_ms << " ms, speedup "
              << ser_ms / par_ms << "x\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = 96;
    int reps = 5;
    if (argc > 1) n = static_cast<std::size_t>(std::atoll(argv[1]));
    if (argc > 2) reps = std::atoi(argv[2]);
    std::cout << "tensor " << n << "x" << n << "x" << n << ", best of " << reps << "\n";

    DenseTensor t = random_tensor({n, n, n}, 1);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    Matrix m(n / 2, n);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = nd(rng);

    for (std::size_t mode = 0; mode < 3; ++mode) {
        const std::string tag = "mode " + std::to_string(mode);
        report("unfold " + tag, time_ms([&] { unfold(t, mode); }, reps),
               time_ms([&] { serial::unfold(t, mode); }, reps));
        Matrix u = unfold(t, mode);
        report("fold " + tag, time_ms([&] { fold(u, mode, t.shape()); }, reps),
               time_ms([&] { serial::fold(u, mode, t.shape()); }, reps));
        report("mode_product " + tag, time_ms([&] { mode_product(t, m, mode); }, reps),
               time_ms([&] { serial::mode_product(t, m, mode); }, reps));
    }

    Matrix a(64, 64), b(64, 64);
    for (Eigen::Index j = 0; j < 64; ++j)
        for (Eigen::Index i = 0; i < 64; ++i) {
            a(i, j) = nd(rng);
            b(i, j) = nd(rng);
        }
    report("kronecker 64x64 (x) 64x64", time_ms([&] { kronecker(a, b); }, reps),
           time_ms([&] { serial::kronecker(a, b); }, reps));
    return 0;
}
