#include "ft/experiment.hpp"

#include "ft/io.hpp"
#include "ft/metrics.hpp"

#include <json.hpp>

#include <fstream>
#include <numeric>

namespace ft {

namespace {

double mean_gap(const std::vector<double>& ftd, const std::vector<double>& hosvd) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ftd.size(); ++i) acc += ftd[i] - hosvd[i];
    return acc / static_cast<double>(ftd.size());
}

struct Curves {
    std::vector<double> acc, f1;
};

Curves evaluate_over_k(const std::vector<ClassBasis>& full_bases, const LabeledDataset& test,
                       std::size_t k_max, std::size_t num_classes) {
    Curves out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        std::vector<ClassBasis> bases = full_bases;
        for (auto& b : bases) b.elements.resize(k);
        std::vector<int> pred;
        pred.reserve(test.size());
        for (const auto& s : test.samples) pred.push_back(predict(s, bases));
        out.acc.push_back(accuracy(test.labels, pred));
        out.f1.push_back(macro_f1(test.labels, pred, num_classes));
    }
    return out;
}

}  // namespace

double DigitsResult::mean_gap_acc_transfer() const {
    return mean_gap(transfer_ftd_acc, transfer_hosvd_acc);
}
double DigitsResult::mean_gap_acc_equal() const { return mean_gap(equal_ftd_acc, equal_hosvd_acc); }
double DigitsResult::mean_gap_f1_transfer() const {
    return mean_gap(transfer_ftd_f1, transfer_hosvd_f1);
}
double DigitsResult::mean_gap_f1_equal() const { return mean_gap(equal_ftd_f1, equal_hosvd_f1); }

DigitsResult run_digits_experiment(const DigitsParams& params) {
    SynthConfig synth;
    synth.num_classes = params.num_classes;
    synth.samples_per_class = params.train_per_class + params.test_per_class;
    synth.height = params.image_size;
    synth.width = params.image_size;
    synth.p = params.p;
    synth.seed = params.seed;
    LabeledDataset full = synth_digit_dataset(synth);

    const double fraction = static_cast<double>(params.train_per_class) /
                            static_cast<double>(params.train_per_class + params.test_per_class);
    auto [train_full, test_full] = split_train_test(full, fraction, params.seed);

    std::vector<std::size_t> train_idx;
    for (int i = 0; i < params.p; i += 4) train_idx.push_back(static_cast<std::size_t>(i));
    std::vector<std::size_t> window_idx(train_idx.size());
    std::iota(window_idx.begin(), window_idx.end(), 0);

    LabeledDataset train = subsample(train_full, train_idx);
    LabeledDataset equal_test = subsample(test_full, train_idx);
    LabeledDataset transfer_test = subsample(test_full, window_idx);

    const std::vector<std::size_t> class_ranks = {params.spatial_rank, params.spatial_rank,
                                                  params.continuous_rank};

    std::vector<ClassBasis> hosvd_bases = train_hosvd(train, class_ranks, params.k_max);

    FtdConfig cfg;
    cfg.ranks = {static_cast<std::size_t>(params.train_per_class), params.spatial_rank,
                 params.spatial_rank, params.continuous_rank};
    cfg.lambda = params.lambda;
    cfg.kernel = {KernelFamily::Gaussian, params.bandwidth};
    cfg.max_iters = 100;
    cfg.tol = 1e-7;
    cfg.seed = params.seed;
    std::map<int, FtdModel> models = train_ftd(train, cfg);

    std::vector<ClassBasis> ftd_equal_bases =
        transfer_bases(models, train.grid, class_ranks, params.k_max);
    std::vector<ClassBasis> ftd_transfer_bases =
        transfer_bases(models, transfer_test.grid, class_ranks, params.k_max);

    const std::size_t c = static_cast<std::size_t>(params.num_classes);
    DigitsResult result;
    for (std::size_t k = 1; k <= params.k_max; ++k) result.ks.push_back(k);

    Curves eh = evaluate_over_k(hosvd_bases, equal_test, params.k_max, c);
    Curves ef = evaluate_over_k(ftd_equal_bases, equal_test, params.k_max, c);
    Curves th = evaluate_over_k(hosvd_bases, transfer_test, params.k_max, c);
    Curves tf = evaluate_over_k(ftd_transfer_bases, transfer_test, params.k_max, c);

    result.equal_hosvd_acc = eh.acc;
    result.equal_hosvd_f1 = eh.f1;
    result.equal_ftd_acc = ef.acc;
    result.equal_ftd_f1 = ef.f1;
    result.transfer_hosvd_acc = th.acc;
    result.transfer_hosvd_f1 = th.f1;
    result.transfer_ftd_acc = tf.acc;
    result.transfer_ftd_f1 = tf.f1;
    return result;
}

namespace {

void write_curve_csv(const std::filesystem::path& path, const std::vector<std::size_t>& ks,
                     const std::vector<double>& hosvd, const std::vector<double>& ftd) {
    std::ofstream out(path, std::ios::trunc);
    out << "k,hosvd,ftd\n";
    for (std::size_t i = 0; i < ks.size(); ++i)
        out << ks[i] << ',' << io::format_double(hosvd[i]) << ',' << io::format_double(ftd[i])
            << '\n';
}

}  // namespace

void write_digits_outputs(const DigitsResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_curve_csv(out_dir / "accuracy_equal.csv", result.ks, result.equal_hosvd_acc,
                    result.equal_ftd_acc);
    write_curve_csv(out_dir / "accuracy_transfer.csv", result.ks, result.transfer_hosvd_acc,
                    result.transfer_ftd_acc);
    write_curve_csv(out_dir / "macro_f1_equal.csv", result.ks, result.equal_hosvd_f1,
                    result.equal_ftd_f1);
    write_curve_csv(out_dir / "macro_f1_transfer.csv", result.ks, result.transfer_hosvd_f1,
                    result.transfer_ftd_f1);

    nlohmann::json j;
    j["k"] = result.ks;
    j["equal"] = {{"accuracy", {{"hosvd", result.equal_hosvd_acc}, {"ftd", result.equal_ftd_acc}}},
                  {"macro_f1", {{"hosvd", result.equal_hosvd_f1}, {"ftd", result.equal_ftd_f1}}}};
    j["transfer"] = {
        {"accuracy", {{"hosvd", result.transfer_hosvd_acc}, {"ftd", result.transfer_ftd_acc}}},
        {"macro_f1", {{"hosvd", result.transfer_hosvd_f1}, {"ftd", result.transfer_ftd_f1}}}};
    j["mean_gap"] = {{"accuracy_equal", result.mean_gap_acc_equal()},
                     {"accuracy_transfer", result.mean_gap_acc_transfer()},
                     {"macro_f1_equal", result.mean_gap_f1_equal()},
                     {"macro_f1_transfer", result.mean_gap_f1_transfer()}};
    std::ofstream out(out_dir / "summary.json", std::ios::trunc);
    out << j.dump(2) << '\n';
}

}  // namespace ft
