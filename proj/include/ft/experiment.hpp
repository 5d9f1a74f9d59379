#pragma once

#include "ft/classify.hpp"
#include "ft/datagen.hpp"

#include <filesystem>

namespace ft {

// Parameters of the semi-synthetic domain-transfer experiment: 10-class
// continuous-mode image data, training on every 4th of 50 grid points,
// transfer evaluation on the contiguous window of the first 13 points.
struct DigitsParams {
    unsigned seed = 7;
    int num_classes = 10;
    int train_per_class = 40;
    int test_per_class = 8;
    int image_size = 16;
    int p = 50;
    std::size_t spatial_rank = 5;
    std::size_t continuous_rank = 2;
    double bandwidth = 4.0;
    double lambda = 1.0;
    std::size_t k_max = 15;
};

struct DigitsResult {
    std::vector<std::size_t> ks;  // 1..k_max
    std::vector<double> equal_hosvd_acc, equal_ftd_acc;
    std::vector<double> equal_hosvd_f1, equal_ftd_f1;
    std::vector<double> transfer_hosvd_acc, transfer_ftd_acc;
    std::vector<double> transfer_hosvd_f1, transfer_ftd_f1;

    double mean_gap_acc_transfer() const;  // mean over k of ftd - hosvd
    double mean_gap_acc_equal() const;
    double mean_gap_f1_transfer() const;
    double mean_gap_f1_equal() const;
};

DigitsResult run_digits_experiment(const DigitsParams& params);

// Emits the four CSV curves plus summary.json into out_dir.
void write_digits_outputs(const DigitsResult& result, const std::filesystem::path& out_dir);

}  // namespace ft
