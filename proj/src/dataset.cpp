#include "gepsvm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace gepsvm::data {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, delimiter)) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == delimiter) cells.emplace_back();
    return cells;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open dataset file: " + path);

    Dataset d;
    d.name = path;
    std::vector<Vector> feature_rows;
    std::vector<std::string> raw_labels;
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected_cells = 0;

    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split_line(line, options.delimiter);
        if (options.header && d.feature_names.empty() && feature_rows.empty()) {
            d.feature_names = cells;
            continue;
        }
        if (expected_cells == 0) {
            expected_cells = cells.size();
            if (options.has_labels && expected_cells < 2)
                throw ParseError(line_no, 1, "need at least one feature and a label column");
        } else if (cells.size() != expected_cells) {
            throw ParseError(line_no, 1,
                             "inconsistent column count: got " + std::to_string(cells.size()) +
                                 ", expected " + std::to_string(expected_cells));
        }

        std::size_t label_idx = expected_cells;  // out of range = no label
        if (options.has_labels)
            label_idx = options.label_column < 0 ? expected_cells - 1
                                                 : static_cast<std::size_t>(options.label_column);
        if (options.has_labels && label_idx >= expected_cells)
            throw ParseError(line_no, 1, "label column out of range");

        Vector row;
        row.reserve(expected_cells - (options.has_labels ? 1 : 0));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) {
                raw_labels.push_back(cells[c]);
                continue;
            }
            if (cells[c].empty() || cells[c] == "?")
                throw MissingValue("missing value at line " + std::to_string(line_no) +
                                   ", column " + std::to_string(c + 1));
            double v = 0.0;
            if (!parse_number(cells[c], v))
                throw ParseError(line_no, c + 1, "not a finite number: '" + cells[c] + "'");
            row.push_back(v);
        }
        feature_rows.push_back(std::move(row));
    }
    if (feature_rows.empty()) throw IoError("dataset file has no data rows: " + path);

    d.features = Matrix::from_rows(feature_rows);
    if (d.feature_names.size() > d.features.cols()) d.feature_names.clear();

    if (!options.has_labels) return d;

    if (!options.label_map.empty()) {
        d.labels.reserve(raw_labels.size());
        for (const auto& raw : raw_labels) {
            auto it = options.label_map.find(raw);
            if (it == options.label_map.end())
                throw NotBinary("label '" + raw + "' not present in label map");
            d.labels.push_back(it->second);
        }
    } else {
        std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
        if (distinct.size() != 2)
            throw NotBinary("expected exactly 2 distinct labels, found " +
                            std::to_string(distinct.size()));
        // Numeric raw labels sort numerically, otherwise lexicographically.
        std::vector<std::string> ordered(distinct.begin(), distinct.end());
        double v0 = 0.0, v1 = 0.0;
        if (parse_number(ordered[0], v0) && parse_number(ordered[1], v1) && v1 < v0)
            std::swap(ordered[0], ordered[1]);
        d.labels.reserve(raw_labels.size());
        for (const auto& raw : raw_labels) d.labels.push_back(raw == ordered[0] ? 1 : 2);
    }
    return d;
}

void save_csv(const Dataset& d, const std::string& path, char delimiter) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open file for writing: " + path);
    char buf[40];
    for (std::size_t i = 0; i < d.features.rows(); ++i) {
        for (std::size_t j = 0; j < d.features.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", d.features(i, j));
            os << buf << delimiter;
        }
        os << (i < d.labels.size() ? d.labels[i] : 0) << '\n';
    }
    if (!os) throw IoError("failed writing dataset file: " + path);
}

NormKind norm_from_token(const std::string& token) {
    if (token == "none") return NormKind::none;
    if (token == "minmax") return NormKind::minmax;
    if (token == "zscore") return NormKind::zscore;
    throw Error("unknown normalization '" + token + "' (expected none|minmax|zscore)");
}

std::string norm_token(NormKind kind) {
    switch (kind) {
        case NormKind::none: return "none";
        case NormKind::minmax: return "minmax";
        case NormKind::zscore: return "zscore";
    }
    return "none";
}

NormParams normalize_fit(const Matrix& train, NormKind kind) {
    if (train.rows() == 0) throw EmptyClass("normalize_fit: empty training data");
    NormParams p;
    p.kind = kind;
    if (kind == NormKind::none) return p;
    const std::size_t n = train.cols();
    p.shift.assign(n, 0.0);
    p.scale.assign(n, 0.0);
    if (kind == NormKind::minmax) {
        for (std::size_t j = 0; j < n; ++j) {
            double lo = train(0, j), hi = train(0, j);
            for (std::size_t i = 1; i < train.rows(); ++i) {
                lo = std::min(lo, train(i, j));
                hi = std::max(hi, train(i, j));
            }
            p.shift[j] = lo;
            p.scale[j] = hi - lo;
        }
    } else {
        const Vector mean = train.column_means();
        for (std::size_t j = 0; j < n; ++j) {
            double ss = 0.0;
            for (std::size_t i = 0; i < train.rows(); ++i) {
                const double dv = train(i, j) - mean[j];
                ss += dv * dv;
            }
            p.shift[j] = mean[j];
            p.scale[j] = std::sqrt(ss / static_cast<double>(train.rows()));
        }
    }
    return p;
}

Matrix normalize_apply(const NormParams& params, const Matrix& x) {
    if (params.kind == NormKind::none) return x;
    if (x.cols() != params.shift.size())
        throw DimensionMismatch("normalize_apply: feature count mismatch");
    Matrix out = x;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const double scale = params.scale[j];
        for (std::size_t i = 0; i < x.rows(); ++i)
            out(i, j) = scale > 0.0 ? (x(i, j) - params.shift[j]) / scale : 0.0;
    }
    return out;
}

std::pair<Matrix, Matrix> split_classes(const Dataset& d) {
    std::vector<std::size_t> ia, ib;
    for (std::size_t i = 0; i < d.labels.size(); ++i)
        (d.labels[i] == 1 ? ia : ib).push_back(i);
    if (ia.empty() || ib.empty()) throw EmptyClass("split_classes: a class has no samples");
    return {d.features.take_rows(ia), d.features.take_rows(ib)};
}

FoldPlan make_folds(const Dataset& d, std::size_t k, std::uint64_t seed) {
    const std::size_t m = d.labels.size();
    if (k < 2) throw TooFewSamples("make_folds: k must be at least 2");
    if (m < k) throw TooFewSamples("make_folds: fewer samples than folds");

    std::vector<std::size_t> ia, ib;
    for (std::size_t i = 0; i < m; ++i) (d.labels[i] == 1 ? ia : ib).push_back(i);

    std::mt19937_64 rng(seed);
    std::shuffle(ia.begin(), ia.end(), rng);
    std::shuffle(ib.begin(), ib.end(), rng);

    FoldPlan plan;
    plan.k = k;
    plan.assignments.assign(m, 0);
    // One running cursor across both classes keeps per-class and global fold
    // sizes within one of each other.
    std::size_t cursor = 0;
    for (const auto* cls : {&ia, &ib})
        for (std::size_t idx : *cls) plan.assignments[idx] = cursor++ % k;
    return plan;
}

std::string fold_plan_tsv(const FoldPlan& plan) {
    std::ostringstream os;
    os << "sample_index\tfold\n";
    for (std::size_t i = 0; i < plan.assignments.size(); ++i)
        os << i << '\t' << plan.assignments[i] << '\n';
    return os.str();
}

namespace {

Dataset assemble(std::vector<Vector> rows1, std::vector<Vector> rows2, std::string name) {
    Dataset d;
    d.name = std::move(name);
    std::vector<Vector> all = std::move(rows1);
    const std::size_t m1 = all.size();
    all.insert(all.end(), rows2.begin(), rows2.end());
    d.features = Matrix::from_rows(all);
    d.labels.assign(all.size(), 2);
    for (std::size_t i = 0; i < m1; ++i) d.labels[i] = 1;
    return d;
}

}  // namespace

Dataset synth_cross_planes(std::size_t points_per_class, double noise_sd, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    std::bernoulli_distribution flip(0.5);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Vector> rows1, rows2;
    for (std::size_t i = 0; i < points_per_class; ++i) {
        const double t = mag(rng) * (flip(rng) ? 1.0 : -1.0);
        rows1.push_back({t + noise_sd * noise(rng), t + noise_sd * noise(rng)});
    }
    for (std::size_t i = 0; i < points_per_class; ++i) {
        const double t = mag(rng) * (flip(rng) ? 1.0 : -1.0);
        rows2.push_back({t + noise_sd * noise(rng), -t + noise_sd * noise(rng)});
    }
    return assemble(std::move(rows1), std::move(rows2), "cross_planes");
}

Dataset synth_blobs(std::size_t points_per_class, double center_distance, double noise_sd,
                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Vector> rows1, rows2;
    for (std::size_t i = 0; i < points_per_class; ++i)
        rows1.push_back({noise_sd * noise(rng), noise_sd * noise(rng)});
    for (std::size_t i = 0; i < points_per_class; ++i)
        rows2.push_back({center_distance + noise_sd * noise(rng), noise_sd * noise(rng)});
    return assemble(std::move(rows1), std::move(rows2), "blobs");
}

Dataset synth_xor(std::size_t points_per_class, double noise_sd, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Vector> rows1, rows2;
    for (std::size_t i = 0; i < points_per_class; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;  // alternate the two quadrants
        rows1.push_back({sign + noise_sd * noise(rng), sign + noise_sd * noise(rng)});
    }
    for (std::size_t i = 0; i < points_per_class; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        rows2.push_back({sign + noise_sd * noise(rng), -sign + noise_sd * noise(rng)});
    }
    return assemble(std::move(rows1), std::move(rows2), "xor");
}

}  // namespace gepsvm::data
