// ftucker: functional Tucker decomposition toolkit.
//
// Subcommands: synth, decompose, interpolate, classify {train,predict,eval},
// cv, experiment digits. All commands are deterministic given --seed and
// their inputs; exit code 0 on success, 2 on usage or validation errors.

#include "ft/classify.hpp"
#include "ft/datagen.hpp"
#include "ft/experiment.hpp"
#include "ft/ftd.hpp"
#include "ft/io.hpp"
#include "ft/metrics.hpp"
#include "ft/tucker.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        long long v = std::stoll(item, &pos);
        if (pos != item.size() || v < 0)
            throw std::invalid_argument(std::string(what) + ": bad entry '" + item + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size())
            throw std::invalid_argument(std::string(what) + ": bad entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

std::vector<double> read_grid_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file: " + path.string());
    std::vector<double> pts;
    double v;
    while (in >> v) pts.push_back(v);
    if (pts.empty()) throw std::invalid_argument("grid file is empty: " + path.string());
    return pts;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
    int classes = 10;
    int per_class = 40;
    int size = 16;
    int p = 50;
    double noise = 0.05;
    unsigned seed = 7;
    std::string out;
};

int run_synth(const SynthArgs& args) {
    ft::SynthConfig cfg;
    cfg.num_classes = args.classes;
    cfg.samples_per_class = args.per_class;
    cfg.height = args.size;
    cfg.width = args.size;
    cfg.p = args.p;
    cfg.noise_std = args.noise;
    cfg.seed = args.seed;
    cfg.validate();

    ft::LabeledDataset data = ft::synth_digit_dataset(cfg);
    fs::path dir(args.out);
    fs::create_directories(dir);

    ft::io::DatasetManifest manifest;
    for (std::size_t i = 0; i < data.grid.size(); ++i) manifest.grid.push_back(data.grid[i]);
    manifest.classes.resize(static_cast<std::size_t>(args.classes));
    std::vector<int> counters(static_cast<std::size_t>(args.classes), 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto c = static_cast<std::size_t>(data.labels[i]);
        std::string name =
            "class" + std::to_string(c) + "_s" + std::to_string(counters[c]++) + ".dtf";
        ft::io::write_tensor(dir / name, data.samples[i]);
        manifest.classes[c].samples.push_back(name);
    }
    for (std::size_t c = 0; c < manifest.classes.size(); ++c)
        manifest.classes[c].label = std::to_string(c);
    ft::io::write_manifest(dir / "manifest.json", manifest);
    std::cout << json{{"samples", data.size()}, {"manifest", (dir / "manifest.json").string()}}
              << "\n";
    return 0;
}

// ------------------------------------------------------------ decompose ----

struct DecomposeArgs {
    std::string method = "ftd";
    std::string ranks;
    double lambda = 1e-8;
    double bandwidth = 4.0;
    double tau = 1e-8;
    std::size_t max_iters = 200;
    unsigned seed = 0;
    std::string in;
    std::string out;
    std::string trace_out;
    std::string grid;
};

int run_decompose(const DecomposeArgs& args) {
    ft::DenseTensor t = ft::io::read_tensor(args.in);
    std::vector<std::size_t> ranks = parse_size_list(args.ranks, "--ranks");
    if (ranks.size() != t.order())
        throw std::invalid_argument("--ranks must list one rank per tensor mode");

    if (args.method == "hosvd") {
        ft::TuckerFactors f = ft::hosvd(t, ranks);
        json model;
        model["type"] = "tucker";
        model["core"] = ft::io::encode_base64(ft::io::tensor_to_bytes(f.core));
        model["factors"] = json::array();
        for (const auto& a : f.factors) {
            ft::DenseTensor ft_mat({static_cast<std::size_t>(a.rows()),
                                    static_cast<std::size_t>(a.cols())},
                                   std::vector<double>(a.data(), a.data() + a.size()));
            model["factors"].push_back(ft::io::encode_base64(ft::io::tensor_to_bytes(ft_mat)));
        }
        write_text_file(args.out, model.dump(2) + "\n");
        std::cout << json{{"relative_error", ft::relative_error(t, f)}} << "\n";
        return 0;
    }
    if (args.method != "ftd") throw std::invalid_argument("unknown method: " + args.method);

    const std::size_t p = t.extent(t.order() - 1);
    ft::DesignGrid grid = args.grid.empty()
                              ? ft::DesignGrid::uniform(1.0, 10.0, p)
                              : ft::DesignGrid(parse_double_list(args.grid, "--grid"));
    ft::FtdConfig cfg;
    cfg.ranks = ranks;
    cfg.lambda = args.lambda;
    cfg.kernel = {ft::KernelFamily::Gaussian, args.bandwidth};
    cfg.tol = args.tau;
    cfg.max_iters = args.max_iters;
    cfg.seed = args.seed;
    ft::FtdModel model = ft::fit(t, cfg, grid);
    ft::io::write_ftd_model(args.out, model);
    if (!args.trace_out.empty()) {
        std::ostringstream csv;
        csv << "sweep,eps\n";
        for (std::size_t i = 0; i < model.trace.size(); ++i)
            csv << i + 1 << "," << ft::io::format_double(model.trace[i]) << "\n";
        write_text_file(args.trace_out, csv.str());
    }
    std::cout << json{{"relative_error", model.trace.back()}} << "\n";
    return 0;
}

// ---------------------------------------------------------- interpolate ----

struct InterpolateArgs {
    std::string model;
    std::string points;
    std::string grid_file;
    std::string out;
    std::string fiber;
    std::string fiber_out;
};

int run_interpolate(const InterpolateArgs& args) {
    ft::FtdModel model = ft::io::read_ftd_model(args.model);
    std::vector<double> pts = args.grid_file.empty()
                                  ? parse_double_list(args.points, "--points")
                                  : read_grid_file(args.grid_file);
    ft::DesignGrid grid((pts));
    ft::DenseTensor rec = ft::reconstruct_on(model, grid);
    ft::io::write_tensor(args.out, rec);

    if (!args.fiber.empty()) {
        std::vector<std::size_t> idx = parse_size_list(args.fiber, "--fiber");
        if (idx.size() != rec.order() - 1)
            throw std::invalid_argument("--fiber needs one index per non-continuous mode");
        std::ostringstream csv;
        csv << "point,value\n";
        std::vector<std::size_t> full(idx);
        full.push_back(0);
        for (std::size_t l = 0; l < grid.size(); ++l) {
            full.back() = l;
            csv << ft::io::format_double(grid[l]) << ","
                << ft::io::format_double(rec.at(full)) << "\n";
        }
        write_text_file(args.fiber_out.empty() ? args.out + ".fiber.csv" : args.fiber_out,
                        csv.str());
    }
    std::cout << json{{"points", grid.size()}, {"out", args.out}} << "\n";
    return 0;
}

// ------------------------------------------------------------- classify ----

struct ClassifyArgs {
    std::string method = "hosvd";
    std::string manifest;
    std::string model_dir;
    std::string ranks;  // non-sample-mode ranks, continuous last
    std::size_t k = 1;
    std::string train_grid_idx;
    std::string test_grid_idx;
    double lambda = 1.0;
    double bandwidth = 4.0;
    double tau = 1e-7;
    std::size_t max_iters = 100;
    unsigned seed = 0;
    std::string metrics_out;
};

ft::LabeledDataset load_and_slice(const std::string& manifest, const std::string& idx_list) {
    ft::LabeledDataset data = ft::io::load_dataset(manifest);
    if (!idx_list.empty())
        data = ft::subsample(data, parse_size_list(idx_list, "--grid-idx"));
    return data;
}

int run_classify_train(const ClassifyArgs& args) {
    ft::LabeledDataset data = load_and_slice(args.manifest, args.train_grid_idx);
    std::vector<std::size_t> ranks = parse_size_list(args.ranks, "--ranks");
    fs::path dir(args.model_dir);
    fs::create_directories(dir);

    json meta;
    meta["method"] = args.method;
    meta["ranks"] = ranks;
    meta["k"] = args.k;
    if (args.method == "hosvd") {
        std::vector<ft::ClassBasis> bases = ft::train_hosvd(data, ranks, args.k);
        ft::io::write_class_bases(dir / "bases.json", bases);
    } else if (args.method == "ftd") {
        ft::FtdConfig cfg;
        cfg.ranks.push_back(data.size());  // sample-mode rank, capped per class
        for (std::size_t r : ranks) cfg.ranks.push_back(r);
        cfg.lambda = args.lambda;
        cfg.kernel = {ft::KernelFamily::Gaussian, args.bandwidth};
        cfg.tol = args.tau;
        cfg.max_iters = args.max_iters;
        cfg.seed = args.seed;
        std::map<int, ft::FtdModel> models = ft::train_ftd(data, cfg);
        meta["labels"] = json::array();
        for (const auto& [label, model] : models) {
            meta["labels"].push_back(label);
            ft::io::write_ftd_model(dir / ("model_" + std::to_string(label) + ".json"), model);
        }
    } else {
        throw std::invalid_argument("unknown method: " + args.method);
    }
    write_text_file(dir / "meta.json", meta.dump(2) + "\n");
    std::cout << json{{"model_dir", dir.string()}, {"method", args.method}} << "\n";
    return 0;
}

std::vector<ft::ClassBasis> load_bases_for(const fs::path& dir, const ft::DesignGrid& grid,
                                           std::size_t k_override) {
    std::ifstream in(dir / "meta.json");
    if (!in) throw std::runtime_error("cannot open " + (dir / "meta.json").string());
    json meta = json::parse(in);
    const std::string method = meta.at("method");
    std::vector<std::size_t> ranks = meta.at("ranks").get<std::vector<std::size_t>>();
    std::size_t k = k_override != 0 ? k_override : meta.at("k").get<std::size_t>();

    if (method == "hosvd") {
        std::vector<ft::ClassBasis> bases = ft::io::read_class_bases(dir / "bases.json");
        for (auto& b : bases) {
            if (k > b.elements.size())
                throw std::invalid_argument("--k exceeds the stored basis size");
            b.elements.resize(k);
            if (b.elements.front().extent(b.elements.front().order() - 1) != grid.size())
                throw std::invalid_argument(
                    "stored basis grid length does not match the evaluation grid");
        }
        return bases;
    }
    std::map<int, ft::FtdModel> models;
    for (const auto& l : meta.at("labels"))
        models[l.get<int>()] =
            ft::io::read_ftd_model(dir / ("model_" + std::to_string(l.get<int>()) + ".json"));
    return ft::transfer_bases(models, grid, ranks, k);
}

int run_classify_predict(const ClassifyArgs& args, bool with_metrics) {
    ft::LabeledDataset data = load_and_slice(args.manifest, args.test_grid_idx);
    std::vector<ft::ClassBasis> bases = load_bases_for(args.model_dir, data.grid, args.k);
    std::vector<int> pred;
    for (const auto& s : data.samples) pred.push_back(ft::predict(s, bases));

    json out;
    out["predictions"] = pred;
    if (with_metrics) {
        std::size_t num_classes = 0;
        for (const auto& b : bases)
            num_classes = std::max(num_classes, static_cast<std::size_t>(b.label) + 1);
        ft::ConfusionMatrix cm = ft::confusion(data.labels, pred, num_classes);
        out["accuracy"] = ft::accuracy(data.labels, pred);
        out["macro_f1"] = ft::macro_f1(data.labels, pred, num_classes);
        json rows = json::array();
        for (std::size_t i = 0; i < num_classes; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < num_classes; ++j) row.push_back(cm(i, j));
            rows.push_back(row);
        }
        out["confusion"] = rows;
    }
    const std::string text = out.dump(2) + "\n";
    if (args.metrics_out.empty())
        std::cout << text;
    else
        write_text_file(args.metrics_out, text);
    return 0;
}

// ------------------------------------------------------------------- cv ----

struct CvArgs {
    std::string manifest;
    int folds = 5;
    std::string rank_grid;
    std::string k_list;
    unsigned seed = 0;
    std::string out;
};

int run_cv(const CvArgs& args) {
    ft::LabeledDataset data = ft::io::load_dataset(args.manifest);
    std::ifstream in(args.rank_grid);
    if (!in) throw std::runtime_error("cannot open rank grid file: " + args.rank_grid);
    std::vector<std::vector<std::size_t>> grid =
        json::parse(in).get<std::vector<std::vector<std::size_t>>>();
    std::vector<std::size_t> ks = parse_size_list(args.k_list, "--k-list");

    ft::CvResult res = ft::cross_validate(data, grid, ks, args.folds, args.seed);
    std::ostringstream csv;
    csv << "ranks";
    for (std::size_t k : ks) csv << ",k" << k;
    csv << "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t m = 0; m < grid[i].size(); ++m)
            csv << (m ? "x" : "") << grid[i][m];
        for (std::size_t j = 0; j < ks.size(); ++j)
            csv << "," << ft::io::format_double(res.mean_accuracy[i][j]);
        csv << "\n";
    }
    write_text_file(args.out, csv.str());
    std::cout << json{{"out", args.out}, {"cells", grid.size() * ks.size()}} << "\n";
    return 0;
}

// ----------------------------------------------------------- experiment ----

struct ExperimentArgs {
    unsigned seed = 7;
    std::string out_dir = "digits_out";
    int classes = 10;
    int per_class = 40;
    int test_per_class = 8;
    int size = 16;
    int p = 50;
    std::size_t k_max = 15;
};

int run_experiment_digits(const ExperimentArgs& args) {
    ft::DigitsParams params;
    params.seed = args.seed;
    params.num_classes = args.classes;
    params.train_per_class = args.per_class;
    params.test_per_class = args.test_per_class;
    params.image_size = args.size;
    params.p = args.p;
    params.k_max = args.k_max;
    ft::DigitsResult result = ft::run_digits_experiment(params);
    ft::write_digits_outputs(result, args.out_dir);
    std::cout << json{{"out_dir", args.out_dir},
                      {"mean_gap_acc_equal", result.mean_gap_acc_equal()},
                      {"mean_gap_acc_transfer", result.mean_gap_acc_transfer()}}
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("FTUCKER_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif

    CLI::App app{"functional Tucker decomposition toolkit"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    synth->add_option("--classes", synth_args.classes)->check(CLI::PositiveNumber);
    synth->add_option("--per-class", synth_args.per_class)->check(CLI::PositiveNumber);
    synth->add_option("--size", synth_args.size)->check(CLI::PositiveNumber);
    synth->add_option("--p", synth_args.p)->check(CLI::Range(2, 100000));
    synth->add_option("--noise", synth_args.noise);
    synth->add_option("--seed", synth_args.seed);
    synth->add_option("--out", synth_args.out)->required();

    DecomposeArgs dec_args;
    CLI::App* dec = app.add_subcommand("decompose", "fit a Tucker or functional Tucker model");
    dec->add_option("--method", dec_args.method)->check(CLI::IsMember({"hosvd", "ftd"}));
    dec->add_option("--ranks", dec_args.ranks)->required();
    dec->add_option("--lambda", dec_args.lambda);
    dec->add_option("--bandwidth", dec_args.bandwidth);
    dec->add_option("--tau", dec_args.tau);
    dec->add_option("--max-iters", dec_args.max_iters);
    dec->add_option("--seed", dec_args.seed);
    dec->add_option("--grid", dec_args.grid);
    dec->add_option("--in", dec_args.in)->required();
    dec->add_option("--out", dec_args.out)->required();
    dec->add_option("--trace-out", dec_args.trace_out);

    InterpolateArgs int_args;
    CLI::App* interp =
        app.add_subcommand("interpolate", "evaluate a functional model on a new grid");
    interp->add_option("--model", int_args.model)->required();
    CLI::Option* opt_points = interp->add_option("--points", int_args.points);
    CLI::Option* opt_gridfile = interp->add_option("--grid-file", int_args.grid_file);
    opt_points->excludes(opt_gridfile);
    interp->add_option("--out", int_args.out)->required();
    interp->add_option("--fiber", int_args.fiber);
    interp->add_option("--fiber-out", int_args.fiber_out);

    ClassifyArgs cls_args;
    CLI::App* cls = app.add_subcommand("classify", "subspace-residual classification");
    cls->require_subcommand(1);
    CLI::App* cls_train = cls->add_subcommand("train", "fit per-class models or bases");
    CLI::App* cls_predict = cls->add_subcommand("predict", "predict labels for a manifest");
    CLI::App* cls_eval = cls->add_subcommand("eval", "evaluate predictions against labels");
    for (CLI::App* sub : {cls_train, cls_predict, cls_eval}) {
        sub->add_option("--manifest", cls_args.manifest)->required();
        sub->add_option("--model-dir", cls_args.model_dir)->required();
    }
    cls_train->add_option("--method", cls_args.method)->check(CLI::IsMember({"hosvd", "ftd"}));
    cls_train->add_option("--ranks", cls_args.ranks)->required();
    cls_train->add_option("--k", cls_args.k)->check(CLI::PositiveNumber);
    cls_train->add_option("--train-grid-idx", cls_args.train_grid_idx);
    cls_train->add_option("--lambda", cls_args.lambda);
    cls_train->add_option("--bandwidth", cls_args.bandwidth);
    cls_train->add_option("--tau", cls_args.tau);
    cls_train->add_option("--max-iters", cls_args.max_iters);
    cls_train->add_option("--seed", cls_args.seed);
    for (CLI::App* sub : {cls_predict, cls_eval}) {
        sub->add_option("--k", cls_args.k)->check(CLI::PositiveNumber);
        sub->add_option("--test-grid-idx", cls_args.test_grid_idx);
        sub->add_option("--metrics-out", cls_args.metrics_out);
    }

    CvArgs cv_args;
    CLI::App* cv = app.add_subcommand("cv", "stratified k-fold cross-validation grid search");
    cv->add_option("--manifest", cv_args.manifest)->required();
    cv->add_option("--folds", cv_args.folds);
    cv->add_option("--rank-grid", cv_args.rank_grid)->required();
    cv->add_option("--k-list", cv_args.k_list)->required();
    cv->add_option("--seed", cv_args.seed);
    cv->add_option("--out", cv_args.out)->required();

    ExperimentArgs exp_args;
    CLI::App* experiment = app.add_subcommand("experiment", "end-to-end studies");
    experiment->require_subcommand(1);
    CLI::App* digits = experiment->add_subcommand("digits", "domain-transfer study");
    digits->add_option("--seed", exp_args.seed);
    digits->add_option("--out-dir", exp_args.out_dir);
    digits->add_option("--classes", exp_args.classes)->check(CLI::PositiveNumber);
    digits->add_option("--per-class", exp_args.per_class)->check(CLI::PositiveNumber);
    digits->add_option("--test-per-class", exp_args.test_per_class)->check(CLI::PositiveNumber);
    digits->add_option("--size", exp_args.size)->check(CLI::PositiveNumber);
    digits->add_option("--p", exp_args.p)->check(CLI::Range(2, 100000));
    digits->add_option("--k-max", exp_args.k_max)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*synth) return run_synth(synth_args);
        if (*dec) return run_decompose(dec_args);
        if (*interp) {
            if (int_args.points.empty() && int_args.grid_file.empty())
                throw std::invalid_argument("one of --points or --grid-file is required");
            return run_interpolate(int_args);
        }
        if (*cls) {
            // classify predict/eval default: use the k recorded at training time
            if (cls_predict->parsed() && cls_predict->count("--k") == 0) cls_args.k = 0;
            if (cls_eval->parsed() && cls_eval->count("--k") == 0) cls_args.k = 0;
            if (cls_train->parsed()) return run_classify_train(cls_args);
            if (cls_predict->parsed()) return run_classify_predict(cls_args, false);
            if (cls_eval->parsed()) return run_classify_predict(cls_args, true);
        }
        if (*cv) return run_cv(cv_args);
        if (*experiment && digits->parsed()) return run_experiment_digits(exp_args);
        throw std::invalid_argument("no subcommand given");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
