// Command-line front end: train, predict, cv, tune, bench, synth.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gepsvm/harness.hpp"
#include "gepsvm/textio.hpp"

namespace {

using namespace gepsvm;

struct DatasetArgs {
    std::string path;
    std::string delimiter = ",";
    bool header = false;
    std::string label_col = "last";
    std::string label_map;
    bool no_labels = false;
};

struct SpecArgs {
    std::string mode = "linear";
    std::string kernel = "rbf";
    std::string fuzzy = "proposed";
    double delta = 1.0;
    double sigma = 1.0;
    double degree = 1.0;
    double f = 1.0;
    double s = 0.5;
    std::string normalize = "minmax";
};

void add_dataset_options(CLI::App* cmd, DatasetArgs& args) {
    cmd->add_option("--data", args.path, "dataset CSV path")->required();
    cmd->add_option("--delimiter", args.delimiter, "CSV delimiter (default ',')");
    cmd->add_flag("--header", args.header, "first row is a header");
    cmd->add_option("--label-col", args.label_col, "label column index or 'last'");
    cmd->add_option("--label-map", args.label_map, "raw=1,raw=2 label mapping");
}

void add_spec_options(CLI::App* cmd, SpecArgs& args, bool with_normalize) {
    cmd->add_option("--mode", args.mode, "linear|fuzzy|nonlinear")
        ->check(CLI::IsMember({"linear", "fuzzy", "nonlinear"}));
    cmd->add_option("--kernel", args.kernel, "poly|rbf|exprbf|polyrbf")
        ->check(CLI::IsMember({"poly", "rbf", "exprbf", "polyrbf"}));
    cmd->add_option("--fuzzy", args.fuzzy, "none|exp|ratio|proposed")
        ->check(CLI::IsMember({"none", "exp", "ratio", "proposed"}));
    cmd->add_option("--delta", args.delta, "regularization delta");
    cmd->add_option("--sigma", args.sigma, "kernel width sigma");
    cmd->add_option("--degree", args.degree, "kernel degree");
    cmd->add_option("--f", args.f, "exp membership decay rate");
    cmd->add_option("--s", args.s, "ratio/proposed membership floor")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    if (with_normalize)
        cmd->add_option("--normalize", args.normalize, "none|minmax|zscore")
            ->check(CLI::IsMember({"none", "minmax", "zscore"}));
}

data::CsvOptions csv_options(const DatasetArgs& args) {
    data::CsvOptions opts;
    if (args.delimiter.size() != 1) throw Error("--delimiter must be a single character");
    opts.delimiter = args.delimiter[0];
    opts.header = args.header;
    opts.has_labels = !args.no_labels;
    if (args.label_col != "last") opts.label_column = std::stoi(args.label_col);
    if (!args.label_map.empty()) {
        std::istringstream ss(args.label_map);
        std::string entry;
        while (std::getline(ss, entry, ',')) {
            const auto eq = entry.find('=');
            if (eq == std::string::npos) throw Error("--label-map entries must be raw=1 or raw=2");
            opts.label_map[entry.substr(0, eq)] = std::stoi(entry.substr(eq + 1));
        }
    }
    return opts;
}

std::string dataset_display_name(const std::string& path) {
    std::string name = path;
    const auto slash = name.find_last_of("/\\");
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

data::Dataset load_dataset(const DatasetArgs& args) {
    data::Dataset d = data::load_csv(args.path, csv_options(args));
    d.name = dataset_display_name(args.path);
    return d;
}

harness::TrainerSpec trainer_spec(const SpecArgs& args) {
    harness::TrainerSpec spec;
    spec.mode = harness::mode_from_token(args.mode);
    spec.kernel_family = kernel::family_from_token(args.kernel);
    spec.fuzzy_method = fuzzy::method_from_token(args.fuzzy);
    spec.fuzzy_f = args.f;
    spec.fuzzy_s = args.s;
    spec.delta = args.delta;
    spec.sigma = args.sigma;
    spec.degree = args.degree;
    spec.normalize = data::norm_from_token(args.normalize);
    return spec;
}

void add_config_option(CLI::App* cmd) {
    // placeholder so the flag shows in --help; expansion happens up front
    static std::string ignored;
    cmd->add_option("--config", ignored, "key=value config file; flags take precedence");
}

// Expands `--config FILE` into --key value tokens placed directly after the
// subcommand name, so explicit flags (parsed last) win over file values.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    std::vector<std::string> expanded;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw IoError("config file lines must be key=value: '" + line + "'");
        expanded.push_back("--" + line.substr(0, eq));
        expanded.push_back(line.substr(eq + 1));
    }
    // insert after the subcommand token
    std::size_t at = 0;
    while (at < args.size() && !args[at].empty() && args[at][0] == '-') ++at;
    if (at < args.size()) ++at;
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), expanded.begin(),
                expanded.end());
    return args;
}

// Every run logs the options it actually resolved to, config file included.
void log_resolved_config(const CLI::App& app) {
    for (const CLI::App* sub : app.get_subcommands()) {
        std::ostringstream os;
        os << "# " << sub->get_name();
        for (const CLI::Option* opt : sub->get_options()) {
            if (opt->get_name().rfind("--", 0) != 0) continue;
            std::string value;
            if (opt->count() > 0) {
                const auto& results = opt->results();
                if (opt->get_expected_max() > 1) {
                    for (const auto& r : results) value += (value.empty() ? "" : ",") + r;
                } else {
                    value = results.back();  // take-last resolution
                }
            } else {
                value = opt->get_default_str();
            }
            if (!value.empty()) os << ' ' << opt->get_name().substr(2) << '=' << value;
        }
        std::cerr << os.str() << '\n';
    }
}

std::string sibling_path(const std::string& out, const std::string& tag) {
    const std::string suffix = ".tsv";
    std::string path = out;
    if (path.size() >= suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
        path.insert(path.size() - suffix.size(), tag);
    else
        path += tag + ".tsv";
    return path;
}

harness::BenchRow result_row(const data::Dataset& d, const harness::TrainerSpec& spec,
                             const harness::CvResult& cv, std::uint64_t seed) {
    harness::BenchRow row;
    row.dataset = d.name;
    row.mode = spec.mode;
    row.kernel = spec.mode == harness::Mode::nonlinear
                     ? kernel::family_token(spec.kernel_family)
                     : "-";
    row.params = cv.params;
    row.train_pct = cv.mean_train;
    row.test_pct = cv.mean_test;
    row.mean_pct = 0.5 * (cv.mean_train + cv.mean_test);
    row.cycles_used = cv.cycles_used;
    row.seed = seed;
    return row;
}

int run(int argc, char** argv) {
    CLI::App app{"fuzzy generalized eigenvalue proximal SVM with DSA parameter search"};
    app.require_subcommand(1);
    // repeated flags resolve to the last occurrence, so explicit flags beat
    // values expanded from --config
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    const unsigned hw_jobs = std::max(1u, std::thread::hardware_concurrency());

    // train
    auto* train_cmd = app.add_subcommand("train", "train a model and write it to disk");
    add_config_option(train_cmd);
    DatasetArgs train_data;
    SpecArgs train_spec;
    std::string train_out = "model.gepsvm";
    add_dataset_options(train_cmd, train_data);
    add_spec_options(train_cmd, train_spec, false);
    train_cmd->add_option("--out", train_out, "model output path");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "classify a dataset with a saved model");
    add_config_option(predict_cmd);
    DatasetArgs predict_data;
    std::string predict_model, predict_out = "predictions.txt";
    add_dataset_options(predict_cmd, predict_data);
    predict_cmd->add_flag("--no-labels", predict_data.no_labels, "input has no label column");
    predict_cmd->add_option("--model", predict_model, "model file")->required();
    predict_cmd->add_option("--out", predict_out, "predictions output path");

    // cv
    auto* cv_cmd = app.add_subcommand("cv", "cross-validate at fixed hyperparameters");
    add_config_option(cv_cmd);
    DatasetArgs cv_data;
    SpecArgs cv_spec;
    std::size_t cv_k = 10;
    std::uint64_t cv_seed = 0;
    unsigned cv_jobs = hw_jobs;
    std::string cv_out;
    add_dataset_options(cv_cmd, cv_data);
    add_spec_options(cv_cmd, cv_spec, true);
    cv_cmd->add_option("--k", cv_k, "fold count")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
    cv_cmd->add_option("--seed", cv_seed, "RNG seed");
    cv_cmd->add_option("--jobs", cv_jobs, "worker threads");
    cv_cmd->add_option("--out", cv_out, "result TSV path");

    // tune
    auto* tune_cmd = app.add_subcommand("tune", "DSA hyperparameter search");
    add_config_option(tune_cmd);
    DatasetArgs tune_data;
    SpecArgs tune_spec;
    std::size_t tune_k = 10, tune_pop = 30, tune_cycles = 20;
    std::uint64_t tune_seed = 0;
    unsigned tune_jobs = hw_jobs;
    std::string tune_out = "tune_results.tsv";
    add_dataset_options(tune_cmd, tune_data);
    add_spec_options(tune_cmd, tune_spec, true);
    tune_cmd->add_option("--k", tune_k, "fold count")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
    tune_cmd->add_option("--seed", tune_seed, "RNG seed");
    tune_cmd->add_option("--popsize", tune_pop, "DSA population size")
        ->check(CLI::Range(std::size_t{4}, std::size_t{1000000}));
    tune_cmd->add_option("--maxcycle", tune_cycles, "DSA cycle budget")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    tune_cmd->add_option("--jobs", tune_jobs, "worker threads");
    tune_cmd->add_option("--out", tune_out, "result TSV path (history goes beside it)");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "tune several datasets/kernels into a table");
    add_config_option(bench_cmd);
    std::vector<std::string> bench_paths;
    SpecArgs bench_spec;
    bench_spec.mode = "nonlinear";
    std::string bench_kernels = "poly,rbf,polyrbf";
    std::size_t bench_k = 10, bench_pop = 30, bench_cycles = 20;
    std::uint64_t bench_seed = 0;
    unsigned bench_jobs = hw_jobs;
    std::string bench_out = "bench_results.tsv";
    DatasetArgs bench_fmt;  // CSV parsing flags shared by all datasets
    bench_cmd->add_option("--data", bench_paths, "dataset CSV paths")
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    bench_cmd->add_option("--delimiter", bench_fmt.delimiter, "CSV delimiter");
    bench_cmd->add_flag("--header", bench_fmt.header, "first row is a header");
    bench_cmd->add_option("--label-col", bench_fmt.label_col, "label column index or 'last'");
    bench_cmd->add_option("--label-map", bench_fmt.label_map, "raw=1,raw=2 label mapping");
    bench_cmd->add_option("--mode", bench_spec.mode, "linear|fuzzy|nonlinear")
        ->check(CLI::IsMember({"linear", "fuzzy", "nonlinear"}));
    bench_cmd->add_option("--kernels", bench_kernels, "comma list for nonlinear mode");
    bench_cmd->add_option("--fuzzy", bench_spec.fuzzy, "none|exp|ratio|proposed")
        ->check(CLI::IsMember({"none", "exp", "ratio", "proposed"}));
    bench_cmd->add_option("--f", bench_spec.f, "exp membership decay rate");
    bench_cmd->add_option("--s", bench_spec.s, "ratio/proposed membership floor");
    bench_cmd->add_option("--normalize", bench_spec.normalize, "none|minmax|zscore")
        ->check(CLI::IsMember({"none", "minmax", "zscore"}));
    bench_cmd->add_option("--k", bench_k, "fold count")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
    bench_cmd->add_option("--seed", bench_seed, "RNG seed");
    bench_cmd->add_option("--popsize", bench_pop, "DSA population size")
        ->check(CLI::Range(std::size_t{4}, std::size_t{1000000}));
    bench_cmd->add_option("--maxcycle", bench_cycles, "DSA cycle budget")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    bench_cmd->add_option("--jobs", bench_jobs, "worker threads");
    bench_cmd->add_option("--out", bench_out, "result TSV path");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset CSV");
    std::string synth_kind = "cross", synth_out = "synth.csv";
    std::size_t synth_n = 50;
    double synth_noise = 0.0, synth_distance = 10.0;
    std::uint64_t synth_seed = 0;
    synth_cmd->add_option("--kind", synth_kind, "cross|blobs|xor")
        ->check(CLI::IsMember({"cross", "blobs", "xor"}));
    synth_cmd->add_option("--n", synth_n, "points per class")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
    synth_cmd->add_option("--noise", synth_noise, "noise standard deviation");
    synth_cmd->add_option("--distance", synth_distance, "blob center distance");
    synth_cmd->add_option("--seed", synth_seed, "RNG seed");
    synth_cmd->add_option("--out", synth_out, "CSV output path");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11 consumes reversed vectors
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    log_resolved_config(app);

    if (*train_cmd) {
        const data::Dataset d = load_dataset(train_data);
        const harness::TrainerSpec spec = trainer_spec(train_spec);
        auto [a, b] = data::split_classes(d);
        const Model model = harness::fit(spec, a, b);
        save_model(model, train_out);
        std::printf("model written to %s\n", train_out.c_str());
        std::printf("accuracy %.4f\n", harness::accuracy(predict(model, d.features), d.labels));
        return 0;
    }

    if (*predict_cmd) {
        const Model model = load_model(predict_model);
        const data::Dataset d = load_dataset(predict_data);
        const std::vector<int> labels = predict(model, d.features);
        std::ostringstream os;
        for (int label : labels) os << label << '\n';
        write_text_atomic(predict_out, os.str());
        std::printf("predictions written to %s\n", predict_out.c_str());
        if (!d.labels.empty())
            std::printf("accuracy %.4f\n", harness::accuracy(labels, d.labels));
        return 0;
    }

    if (*cv_cmd) {
        const data::Dataset d = load_dataset(cv_data);
        const harness::TrainerSpec spec = trainer_spec(cv_spec);
        const harness::CvResult cv = harness::cross_validate(spec, d, cv_k, cv_seed, cv_jobs);
        for (std::size_t i = 0; i < cv.per_fold.size(); ++i)
            std::printf("fold %zu train %.4f test %.4f\n", i, cv.per_fold[i].train,
                        cv.per_fold[i].test);
        std::printf("mean train %.4f test %.4f\n", cv.mean_train, cv.mean_test);
        if (!cv_out.empty()) {
            write_text_atomic(cv_out,
                              harness::bench_table_tsv({result_row(d, spec, cv, cv_seed)}));
            write_text_atomic(sibling_path(cv_out, ".folds"),
                              data::fold_plan_tsv(data::make_folds(d, cv_k, cv_seed)));
        }
        return 0;
    }

    if (*tune_cmd) {
        const data::Dataset d = load_dataset(tune_data);
        const harness::TrainerSpec spec = trainer_spec(tune_spec);
        dsa::DsaConfig cfg;
        cfg.popsize = tune_pop;
        cfg.maxcycle = tune_cycles;
        cfg.jobs = tune_jobs;
        const harness::CvResult cv = harness::tune(spec, d, cfg, tune_seed, tune_k);

        const harness::TrainerSpec best = harness::with_params(spec, cv.params);
        std::printf("best P1 %.6f", best.delta);
        if (spec.mode == harness::Mode::nonlinear) {
            if (kernel::uses_sigma(spec.kernel_family)) std::printf(" P2 %.6f", best.sigma);
            if (kernel::uses_degree(spec.kernel_family)) std::printf(" P3 %.6f", best.degree);
        }
        std::printf("\ntrain %.4f test %.4f mean %.4f cycles %zu\n", cv.mean_train, cv.mean_test,
                    0.5 * (cv.mean_train + cv.mean_test), cv.cycles_used);

        write_text_atomic(tune_out, harness::bench_table_tsv({result_row(d, spec, cv, tune_seed)}));
        write_text_atomic(sibling_path(tune_out, ".history"),
                          harness::history_tsv(cv.search_history));
        return 0;
    }

    if (*bench_cmd) {
        std::vector<data::Dataset> datasets;
        for (const auto& path : bench_paths) {
            DatasetArgs args = bench_fmt;
            args.path = path;
            datasets.push_back(load_dataset(args));
        }
        std::vector<harness::TrainerSpec> specs;
        const harness::Mode mode = harness::mode_from_token(bench_spec.mode);
        if (mode == harness::Mode::nonlinear) {
            std::istringstream ss(bench_kernels);
            std::string token;
            while (std::getline(ss, token, ',')) {
                SpecArgs one = bench_spec;
                one.kernel = token;
                specs.push_back(trainer_spec(one));
            }
            if (specs.empty()) throw Error("--kernels produced no kernel list");
        } else {
            specs.push_back(trainer_spec(bench_spec));
        }
        dsa::DsaConfig cfg;
        cfg.popsize = bench_pop;
        cfg.maxcycle = bench_cycles;
        cfg.jobs = bench_jobs;
        const auto rows = harness::benchmark(datasets, specs, cfg, bench_k, bench_seed, bench_out);
        std::printf("%zu rows written to %s\n", rows.size(), bench_out.c_str());
        return 0;
    }

    if (*synth_cmd) {
        data::Dataset d;
        if (synth_kind == "cross") d = data::synth_cross_planes(synth_n, synth_noise, synth_seed);
        else if (synth_kind == "blobs")
            d = data::synth_blobs(synth_n, synth_distance, synth_noise, synth_seed);
        else d = data::synth_xor(synth_n, synth_noise, synth_seed);
        data::save_csv(d, synth_out);
        std::printf("%zu samples written to %s\n", d.features.rows(), synth_out.c_str());
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const gepsvm::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const gepsvm::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const gepsvm::MissingValue& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const gepsvm::NotBinary& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const gepsvm::ModelFormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const gepsvm::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
