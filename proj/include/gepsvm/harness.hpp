#pragma once

#include <string>

#include "gepsvm/dataset.hpp"
#include "gepsvm/dsa.hpp"
#include "gepsvm/model.hpp"

namespace gepsvm::harness {

enum class Mode { linear, linear_fuzzy, nonlinear };
std::string mode_token(Mode m);
Mode mode_from_token(const std::string& token);

/// What to train and which hyperparameters are currently pinned. The tuner
/// overwrites delta/sigma/degree from the search box; fuzzy parameters stay
/// fixed configuration.
struct TrainerSpec {
    Mode mode = Mode::linear;
    kernel::Family kernel_family = kernel::Family::gaussian_rbf;
    fuzzy::Method fuzzy_method = fuzzy::Method::none;
    double fuzzy_f = 1.0;
    double fuzzy_s = 0.5;
    double delta = 1.0;
    double sigma = 1.0;
    double degree = 1.0;
    data::NormKind normalize = data::NormKind::minmax;
};

struct FoldAccuracy {
    double train = 0.0;
    double test = 0.0;
};

struct CvResult {
    std::vector<FoldAccuracy> per_fold;
    double mean_train = 0.0;
    double mean_test = 0.0;
    Vector params;             // tuned/fixed values in P1[,P2][,P3] order
    std::size_t cycles_used = 0;  // 0 for a plain cross-validation
    std::vector<std::pair<std::size_t, double>> search_history;  // (cycle, best fitness)
};

/// 100 * matches / length.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual);

/// Hyperparameter box for the trainer's mode/kernel: delta in
/// [0.001, 10000], sigma and degree in [0.001, 33].
dsa::SearchSpace search_space(const TrainerSpec& spec);
/// Currently pinned parameters laid out like search_space.
Vector spec_params(const TrainerSpec& spec);
/// Copy of the trainer spec with the parameter vector applied.
TrainerSpec with_params(TrainerSpec spec, const Vector& params);

/// Trains one model on pre-split, already-normalized class matrices.
Model fit(const TrainerSpec& spec, const Matrix& a, const Matrix& b);

/// Stratified k-fold cross validation. Normalization, fuzzy weights and the
/// model all come from the training folds only.
CvResult cross_validate(const TrainerSpec& spec, const data::Dataset& d, std::size_t k,
                        std::uint64_t seed, unsigned jobs = 1);

/// DSA search over the trainer's box, minimizing 100 - mean test accuracy of an
/// inner cross validation with folds held fixed; stops early on 100%.
CvResult tune(const TrainerSpec& spec, const data::Dataset& d, const dsa::DsaConfig& config,
              std::uint64_t seed, std::size_t k = 10);

struct BenchRow {
    std::string dataset;
    Mode mode = Mode::linear;
    std::string kernel;  // family token, or "-" for linear modes
    Vector params;
    double train_pct = 0.0;
    double test_pct = 0.0;
    double mean_pct = 0.0;
    std::size_t cycles_used = 0;
    std::uint64_t seed = 0;
    std::string error;  // empty on success
};

/// Tunes every (dataset, spec) pair; per-row failures land in the error
/// column and the run continues. Writes the result table to output_path and
/// bar-chart data (kernel, dataset, mean accuracy) next to it.
std::vector<BenchRow> benchmark(const std::vector<data::Dataset>& datasets,
                                const std::vector<TrainerSpec>& specs,
                                const dsa::DsaConfig& config, std::size_t k,
                                std::uint64_t seed, const std::string& output_path);

std::string bench_table_tsv(const std::vector<BenchRow>& rows);
std::string bench_plot_tsv(const std::vector<BenchRow>& rows);
std::string history_tsv(const std::vector<std::pair<std::size_t, double>>& history);

}  // namespace gepsvm::harness
