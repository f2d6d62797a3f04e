#include "gepsvm/harness.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gepsvm/parallel.hpp"
#include "gepsvm/textio.hpp"

namespace gepsvm::harness {

std::string mode_token(Mode m) {
    switch (m) {
        case Mode::linear: return "linear";
        case Mode::linear_fuzzy: return "fuzzy";
        case Mode::nonlinear: return "nonlinear";
    }
    return "linear";
}

Mode mode_from_token(const std::string& token) {
    if (token == "linear") return Mode::linear;
    if (token == "fuzzy") return Mode::linear_fuzzy;
    if (token == "nonlinear") return Mode::nonlinear;
    throw Error("unknown mode '" + token + "' (expected linear|fuzzy|nonlinear)");
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size() || predicted.empty())
        throw LengthMismatch("accuracy: label vectors must have equal nonzero length");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == actual[i]) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(predicted.size());
}

dsa::SearchSpace search_space(const TrainerSpec& spec) {
    dsa::SearchSpace space;
    space.low = {0.001};
    space.up = {10000.0};
    if (spec.mode == Mode::nonlinear) {
        if (kernel::uses_sigma(spec.kernel_family)) {
            space.low.push_back(0.001);
            space.up.push_back(33.0);
        }
        if (kernel::uses_degree(spec.kernel_family)) {
            space.low.push_back(0.001);
            space.up.push_back(33.0);
        }
    }
    space.dim = space.low.size();
    return space;
}

Vector spec_params(const TrainerSpec& spec) {
    Vector p = {spec.delta};
    if (spec.mode == Mode::nonlinear) {
        if (kernel::uses_sigma(spec.kernel_family)) p.push_back(spec.sigma);
        if (kernel::uses_degree(spec.kernel_family)) p.push_back(spec.degree);
    }
    return p;
}

TrainerSpec with_params(TrainerSpec spec, const Vector& params) {
    const std::size_t expected = search_space(spec).dim;
    if (params.size() != expected)
        throw DimensionMismatch("with_params: expected " + std::to_string(expected) +
                                " parameters, got " + std::to_string(params.size()));
    std::size_t at = 0;
    spec.delta = params[at++];
    if (spec.mode == Mode::nonlinear) {
        if (kernel::uses_sigma(spec.kernel_family)) spec.sigma = params[at++];
        if (kernel::uses_degree(spec.kernel_family)) spec.degree = params[at++];
    }
    return spec;
}

Model fit(const TrainerSpec& spec, const Matrix& a, const Matrix& b) {
    switch (spec.mode) {
        case Mode::linear: return train_linear(a, b, spec.delta);
        case Mode::linear_fuzzy: {
            const auto fw = fuzzy::compute(spec.fuzzy_method, a, b, spec.fuzzy_f, spec.fuzzy_s);
            return train_linear_fuzzy(a, b, spec.delta, fw);
        }
        case Mode::nonlinear: {
            kernel::KernelSpec ks;
            ks.family = spec.kernel_family;
            ks.degree = spec.degree;
            ks.sigma = spec.sigma;
            ks.data_dim = a.cols();
            return train_nonlinear(a, b, spec.delta, ks);
        }
    }
    throw Error("fit: unknown mode");
}

namespace {

struct ClassSplit {
    Matrix a;
    Matrix b;
};

ClassSplit split_by_label(const Matrix& x, const std::vector<int>& labels) {
    std::vector<std::size_t> ia, ib;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? ia : ib).push_back(i);
    if (ia.empty() || ib.empty()) throw EmptyClass("cross_validate: a fold lost a whole class");
    return {x.take_rows(ia), x.take_rows(ib)};
}

}  // namespace

CvResult cross_validate(const TrainerSpec& spec, const data::Dataset& d, std::size_t k,
                        std::uint64_t seed, unsigned jobs) {
    const data::FoldPlan plan = data::make_folds(d, k, seed);
    CvResult result;
    result.per_fold.assign(k, {});
    result.params = spec_params(spec);

    detail::parallel_for(k, jobs, [&](std::size_t fold) {
        try {
            std::vector<std::size_t> train_idx, test_idx;
            for (std::size_t i = 0; i < plan.assignments.size(); ++i)
                (plan.assignments[i] == fold ? test_idx : train_idx).push_back(i);

            const Matrix train_x_raw = d.features.take_rows(train_idx);
            const Matrix test_x_raw = d.features.take_rows(test_idx);
            std::vector<int> train_y(train_idx.size()), test_y(test_idx.size());
            for (std::size_t i = 0; i < train_idx.size(); ++i) train_y[i] = d.labels[train_idx[i]];
            for (std::size_t i = 0; i < test_idx.size(); ++i) test_y[i] = d.labels[test_idx[i]];

            // training-fold statistics only
            const data::NormParams norm = data::normalize_fit(train_x_raw, spec.normalize);
            const Matrix train_x = data::normalize_apply(norm, train_x_raw);
            const Matrix test_x = data::normalize_apply(norm, test_x_raw);

            const ClassSplit split = split_by_label(train_x, train_y);
            if (spec.mode == Mode::nonlinear) {
                // The training kernel matrix doubles as the train-accuracy
                // input, so it is only evaluated once per fold.
                kernel::KernelSpec ks;
                ks.family = spec.kernel_family;
                ks.degree = spec.degree;
                ks.sigma = spec.sigma;
                ks.data_dim = split.a.cols();
                kernel::validate(ks);
                const Matrix c = split.a.vstack(split.b);
                const Matrix k_full = kernel::kernel_matrix(ks, c, c);
                const NonlinearModel model =
                    train_nonlinear_precomputed(k_full, split.a.rows(), c, spec.delta, ks);

                std::vector<int> train_pred(c.rows()), train_actual(c.rows(), 2);
                for (std::size_t i = 0; i < split.a.rows(); ++i) train_actual[i] = 1;
                for (std::size_t i = 0; i < c.rows(); ++i)
                    train_pred[i] = classify_nonlinear_row(model, k_full.row(i));
                result.per_fold[fold].train = accuracy(train_pred, train_actual);
                result.per_fold[fold].test = accuracy(predict(Model(model), test_x), test_y);
            } else {
                const Model model = fit(spec, split.a, split.b);
                result.per_fold[fold].train = accuracy(predict(model, train_x), train_y);
                result.per_fold[fold].test = accuracy(predict(model, test_x), test_y);
            }
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(fold) + ": " + e.what());
        }
    });

    for (const auto& f : result.per_fold) {
        result.mean_train += f.train;
        result.mean_test += f.test;
    }
    result.mean_train /= static_cast<double>(k);
    result.mean_test /= static_cast<double>(k);
    return result;
}

CvResult tune(const TrainerSpec& spec, const data::Dataset& d, const dsa::DsaConfig& config,
              std::uint64_t seed, std::size_t k) {
    const dsa::SearchSpace space = search_space(spec);

    dsa::DsaConfig cfg = config;
    cfg.seed = seed;
    if (!cfg.target_fitness) cfg.target_fitness = 0.0;  // the 100%-accuracy stop

    // Fold assignment is pinned by the run seed, so the objective is a pure
    // function of the parameter vector.
    const dsa::Objective objective = [&](const Vector& params) {
        const CvResult cv = cross_validate(with_params(spec, params), d, k, seed, 1);
        return 100.0 - cv.mean_test;
    };

    const dsa::OptimizeResult best = dsa::optimize(space, cfg, objective);

    CvResult result = cross_validate(with_params(spec, best.best_position), d, k, seed,
                                     config.jobs == 0 ? 1 : config.jobs);
    result.params = best.best_position;
    result.cycles_used = best.cycles_used;
    result.search_history = best.history;
    return result;
}

namespace {

std::string fmt(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void append_params(std::ostringstream& os, const BenchRow& row) {
    // Table layout: P1 = delta, P2 = sigma, P3 = degree.
    std::string p1 = "-", p2 = "-", p3 = "-";
    if (!row.params.empty()) p1 = fmt(row.params[0]);
    if (row.kernel != "-" && row.params.size() > 1) {
        const kernel::Family fam = kernel::family_from_token(row.kernel);
        if (kernel::uses_sigma(fam)) {
            p2 = fmt(row.params[1]);
            if (kernel::uses_degree(fam) && row.params.size() > 2) p3 = fmt(row.params[2]);
        } else if (kernel::uses_degree(fam)) {
            p3 = fmt(row.params[1]);
        }
    }
    os << p1 << '\t' << p2 << '\t' << p3;
}

}  // namespace

std::string bench_table_tsv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "dataset\tmode\tkernel\tP1\tP2\tP3\ttrain_pct\ttest_pct\tmean_pct\tcycles_used\t"
          "seed\terror\n";
    for (const auto& row : rows) {
        os << row.dataset << '\t' << mode_token(row.mode) << '\t' << row.kernel << '\t';
        append_params(os, row);
        os << '\t';
        if (row.error.empty())
            os << fmt(row.train_pct) << '\t' << fmt(row.test_pct) << '\t' << fmt(row.mean_pct);
        else
            os << "-\t-\t-";
        os << '\t' << row.cycles_used << '\t' << row.seed << '\t'
           << (row.error.empty() ? "" : row.error) << '\n';
    }
    return os.str();
}

std::string bench_plot_tsv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "kernel\tdataset\tmean_acc\n";
    for (const auto& row : rows) {
        if (!row.error.empty()) continue;
        const std::string kernel = row.kernel == "-" ? mode_token(row.mode) : row.kernel;
        os << kernel << '\t' << row.dataset << '\t' << fmt(row.mean_pct) << '\n';
    }
    return os.str();
}

std::string history_tsv(const std::vector<std::pair<std::size_t, double>>& history) {
    std::ostringstream os;
    os << "cycle\tbest_fitness\n";
    char buf[48];
    for (const auto& [cycle, fitness] : history) {
        std::snprintf(buf, sizeof buf, "%.17g", fitness);
        os << cycle << '\t' << buf << '\n';
    }
    return os.str();
}

std::vector<BenchRow> benchmark(const std::vector<data::Dataset>& datasets,
                                const std::vector<TrainerSpec>& specs,
                                const dsa::DsaConfig& config, std::size_t k,
                                std::uint64_t seed, const std::string& output_path) {
    std::vector<BenchRow> rows;
    for (const auto& dataset : datasets) {
        for (const auto& spec : specs) {
            BenchRow row;
            row.dataset = dataset.name;
            row.mode = spec.mode;
            row.kernel =
                spec.mode == Mode::nonlinear ? kernel::family_token(spec.kernel_family) : "-";
            row.seed = seed;
            try {
                const CvResult cv = tune(spec, dataset, config, seed, k);
                row.params = cv.params;
                row.train_pct = cv.mean_train;
                row.test_pct = cv.mean_test;
                row.mean_pct = 0.5 * (cv.mean_train + cv.mean_test);
                row.cycles_used = cv.cycles_used;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }

    if (!output_path.empty()) {
        write_text_atomic(output_path, bench_table_tsv(rows));
        std::string plot_path = output_path;
        const std::string suffix = ".tsv";
        if (plot_path.size() >= suffix.size() &&
            plot_path.compare(plot_path.size() - suffix.size(), suffix.size(), suffix) == 0)
            plot_path.insert(plot_path.size() - suffix.size(), ".plot");
        else
            plot_path += ".plot.tsv";
        write_text_atomic(plot_path, bench_plot_tsv(rows));
    }
    return rows;
}

}  // namespace gepsvm::harness
