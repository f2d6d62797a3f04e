#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "gepsvm/matrix.hpp"

namespace gepsvm::data {

/// Feature matrix with binary labels in {1, 2}.
struct Dataset {
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::string name;
};

struct CsvOptions {
    char delimiter = ',';
    bool header = false;
    int label_column = -1;  // -1 means last column
    std::map<std::string, int> label_map;  // optional explicit raw-label mapping
    bool has_labels = true;
};

Dataset load_csv(const std::string& path, const CsvOptions& options = {});
void save_csv(const Dataset& d, const std::string& path, char delimiter = ',');

enum class NormKind { none, minmax, zscore };
NormKind norm_from_token(const std::string& token);
std::string norm_token(NormKind kind);

struct NormParams {
    NormKind kind = NormKind::none;
    Vector shift;  // per-feature min (minmax) or mean (zscore)
    Vector scale;  // per-feature max-min or standard deviation
};

/// Fit on training data only; constant features map to zero on apply.
NormParams normalize_fit(const Matrix& train, NormKind kind);
Matrix normalize_apply(const NormParams& params, const Matrix& x);

/// Row partition into (A, B) = (class-1 rows, class-2 rows), order preserved.
std::pair<Matrix, Matrix> split_classes(const Dataset& d);

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  // fold index per sample
};

/// Stratified k-fold assignment, deterministic under seed.
FoldPlan make_folds(const Dataset& d, std::size_t k, std::uint64_t seed);

/// TSV rows of (sample_index, fold).
std::string fold_plan_tsv(const FoldPlan& plan);

/// Class 1 near the line y = x, class 2 near y = -x.
Dataset synth_cross_planes(std::size_t points_per_class, double noise_sd, std::uint64_t seed);
/// Two Gaussian clusters a given center distance apart.
Dataset synth_blobs(std::size_t points_per_class, double center_distance, double noise_sd,
                    std::uint64_t seed);
/// Four-quadrant XOR: class 1 owns quadrants (+,+) and (-,-).
Dataset synth_xor(std::size_t points_per_class, double noise_sd, std::uint64_t seed);

}  // namespace gepsvm::data
