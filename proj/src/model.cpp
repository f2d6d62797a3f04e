#include "gepsvm/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gepsvm/linalg.hpp"

namespace gepsvm {

namespace {

void check_training_inputs(const Matrix& a, const Matrix& b, double delta) {
    if (a.rows() == 0 || b.rows() == 0) throw EmptyClass("train: a class has no samples");
    if (a.cols() != b.cols()) throw DimensionMismatch("train: feature counts differ");
    if (a.cols() == 0) throw DimensionMismatch("train: no features");
    if (!(delta > 0.0)) throw Error("train: delta must be positive");
    if (!a.is_finite() || !b.is_finite()) throw NonFiniteInput("train: non-finite features");
}

// [X -e]: the data matrix with a trailing column of -1.
Matrix augment(const Matrix& x) {
    Matrix f(x.rows(), x.cols() + 1);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) f(i, j) = x(i, j);
        f(i, x.cols()) = -1.0;
    }
    return f;
}

Matrix scale_rows(const Matrix& x, const Vector& weights) {
    Matrix out = x;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double w = weights[i];
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) *= w;
    }
    return out;
}

// Solves both Rayleigh problems for the (possibly kernelized) class
// matrices. Returns the stacked unit vectors z1 = [w1; g1], z2 = [w2; g2].
std::pair<Vector, Vector> train_planes(const Matrix& xa, const Matrix& xb, double delta) {
    const Matrix fa = augment(xa);
    const Matrix fb = augment(xb);
    const std::size_t order = fa.cols();

    Matrix g = gram_columns(fa);
    for (std::size_t i = 0; i < order; ++i) g(i, i) += delta;
    const linalg::EigenPair plane1 = linalg::min_rayleigh_factored(g, fb);

    Matrix l = gram_columns(fb);
    for (std::size_t i = 0; i < order; ++i) l(i, i) += delta;
    const linalg::EigenPair plane2 = linalg::min_rayleigh_factored(l, fa);

    return {plane1.vector, plane2.vector};
}

int nearest_plane(double dist1, double dist2) {
    return dist1 <= dist2 ? 1 : 2;
}

double plane_distance(std::span<const double> x, const Vector& w, double gamma) {
    const double wn = norm2(w);
    const double num = std::fabs(dot(x, std::span<const double>(w)) - gamma);
    if (wn > 0.0) return num / wn;
    return std::numeric_limits<double>::infinity();
}

}  // namespace

LinearModel train_linear(const Matrix& a, const Matrix& b, double delta) {
    check_training_inputs(a, b, delta);
    auto [z1, z2] = train_planes(a, b, delta);
    LinearModel m;
    m.delta = delta;
    m.w1.assign(z1.begin(), z1.end() - 1);
    m.gamma1 = z1.back();
    m.w2.assign(z2.begin(), z2.end() - 1);
    m.gamma2 = z2.back();
    return m;
}

LinearModel train_linear_fuzzy(const Matrix& a, const Matrix& b, double delta,
                               const fuzzy::FuzzyWeights& fw) {
    check_training_inputs(a, b, delta);
    if (fw.weights_a.size() != a.rows() || fw.weights_b.size() != b.rows())
        throw WeightLengthMismatch("train_linear_fuzzy: weight lengths must match class sizes");
    LinearModel m = train_linear(scale_rows(a, fw.weights_a), scale_rows(b, fw.weights_b), delta);
    return m;
}

NonlinearModel train_nonlinear_precomputed(const Matrix& k_full, std::size_t m1, Matrix c,
                                           double delta, kernel::KernelSpec spec) {
    if (k_full.rows() != c.rows() || k_full.cols() != c.rows() || m1 == 0 ||
        m1 >= k_full.rows())
        throw DimensionMismatch("train_nonlinear_precomputed: kernel/reference shape mismatch");
    std::vector<std::size_t> ia(m1), ib(k_full.rows() - m1);
    for (std::size_t i = 0; i < ia.size(); ++i) ia[i] = i;
    for (std::size_t i = 0; i < ib.size(); ++i) ib[i] = m1 + i;

    NonlinearModel m;
    m.reference_points = std::move(c);
    m.kernel = spec;
    m.delta = delta;

    auto [z1, z2] = train_planes(k_full.take_rows(ia), k_full.take_rows(ib), delta);
    m.u1.assign(z1.begin(), z1.end() - 1);
    m.gamma1 = z1.back();
    m.u2.assign(z2.begin(), z2.end() - 1);
    m.gamma2 = z2.back();
    return m;
}

NonlinearModel train_nonlinear(const Matrix& a, const Matrix& b, double delta,
                               kernel::KernelSpec spec) {
    check_training_inputs(a, b, delta);
    spec.data_dim = a.cols();
    kernel::validate(spec);

    const Matrix c = a.vstack(b);
    const Matrix k_full = kernel::kernel_matrix(spec, c, c);
    return train_nonlinear_precomputed(k_full, a.rows(), c, delta, spec);
}

int classify_linear(const LinearModel& model, std::span<const double> x) {
    if (x.size() != model.w1.size())
        throw DimensionMismatch("classify_linear: feature count mismatch");
    return nearest_plane(plane_distance(x, model.w1, model.gamma1),
                         plane_distance(x, model.w2, model.gamma2));
}

int classify_nonlinear_row(const NonlinearModel& model, std::span<const double> kernel_row) {
    if (kernel_row.size() != model.u1.size())
        throw DimensionMismatch("classify_nonlinear: kernel row length mismatch");
    return nearest_plane(plane_distance(kernel_row, model.u1, model.gamma1),
                         plane_distance(kernel_row, model.u2, model.gamma2));
}

int classify_nonlinear(const NonlinearModel& model, std::span<const double> x) {
    if (x.size() != model.reference_points.cols())
        throw DimensionMismatch("classify_nonlinear: feature count mismatch");
    Vector row(model.reference_points.rows());
    for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = kernel::kernel_value(model.kernel, x, model.reference_points.row(j));
    return classify_nonlinear_row(model, row);
}

std::vector<int> predict(const Model& model, const Matrix& x) {
    std::vector<int> labels(x.rows());
    if (const auto* lin = std::get_if<LinearModel>(&model)) {
        for (std::size_t i = 0; i < x.rows(); ++i) labels[i] = classify_linear(*lin, x.row(i));
    } else {
        const auto& non = std::get<NonlinearModel>(model);
        if (x.cols() != non.reference_points.cols())
            throw DimensionMismatch("predict: feature count mismatch");
        const Matrix k = kernel::kernel_matrix(non.kernel, x, non.reference_points);
        for (std::size_t i = 0; i < x.rows(); ++i)
            labels[i] = classify_nonlinear_row(non, k.row(i));
    }
    return labels;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_vector(std::ostream& os, const char* tag, const Vector& v) {
    os << tag;
    for (double x : v) os << ' ' << fmt(x);
    os << '\n';
}

std::istringstream next_line(std::istream& is, const char* expected_tag) {
    std::string line;
    if (!std::getline(is, line))
        throw ModelFormatError(std::string("model file truncated before '") + expected_tag + "'");
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != expected_tag)
        throw ModelFormatError("expected '" + std::string(expected_tag) + "', got '" + tag + "'");
    return ls;
}

Vector read_vector(std::istream& is, const char* tag, std::size_t count) {
    std::istringstream ls = next_line(is, tag);
    Vector v(count);
    for (double& x : v)
        if (!(ls >> x)) throw ModelFormatError(std::string("short vector for '") + tag + "'");
    return v;
}

double read_scalar(std::istream& is, const char* tag) {
    std::istringstream ls = next_line(is, tag);
    double v = 0.0;
    if (!(ls >> v)) throw ModelFormatError(std::string("bad scalar for '") + tag + "'");
    return v;
}

}  // namespace

void write_model(const Model& model, std::ostream& os) {
    if (const auto* lin = std::get_if<LinearModel>(&model)) {
        os << "gepsvm-model v1 linear\n";
        os << "delta " << fmt(lin->delta) << '\n';
        os << "features " << lin->w1.size() << '\n';
        write_vector(os, "w1", lin->w1);
        os << "gamma1 " << fmt(lin->gamma1) << '\n';
        write_vector(os, "w2", lin->w2);
        os << "gamma2 " << fmt(lin->gamma2) << '\n';
        return;
    }
    const auto& non = std::get<NonlinearModel>(model);
    os << "gepsvm-model v1 nonlinear\n";
    os << "delta " << fmt(non.delta) << '\n';
    os << "kernel " << kernel::family_token(non.kernel.family) << " degree "
       << fmt(non.kernel.degree) << " sigma " << fmt(non.kernel.sigma) << " dim "
       << non.kernel.data_dim << '\n';
    os << "refpoints " << non.reference_points.rows() << ' ' << non.reference_points.cols()
       << '\n';
    for (std::size_t i = 0; i < non.reference_points.rows(); ++i) {
        const auto row = non.reference_points.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << fmt(row[j]);
        os << '\n';
    }
    write_vector(os, "u1", non.u1);
    os << "gamma1 " << fmt(non.gamma1) << '\n';
    write_vector(os, "u2", non.u2);
    os << "gamma2 " << fmt(non.gamma2) << '\n';
}

Model read_model(std::istream& is) {
    std::string magic, version, kind;
    if (!(is >> magic >> version >> kind) || magic != "gepsvm-model" || version != "v1")
        throw ModelFormatError("not a gepsvm-model v1 file");
    is.ignore(std::numeric_limits<std::streamsize>::max(), '\n');

    if (kind == "linear") {
        LinearModel m;
        m.delta = read_scalar(is, "delta");
        const auto n = static_cast<std::size_t>(read_scalar(is, "features"));
        m.w1 = read_vector(is, "w1", n);
        m.gamma1 = read_scalar(is, "gamma1");
        m.w2 = read_vector(is, "w2", n);
        m.gamma2 = read_scalar(is, "gamma2");
        return m;
    }
    if (kind != "nonlinear") throw ModelFormatError("unknown model kind '" + kind + "'");

    NonlinearModel m;
    m.delta = read_scalar(is, "delta");
    {
        std::istringstream ls = next_line(is, "kernel");
        std::string token, key;
        ls >> token;
        m.kernel.family = kernel::family_from_token(token);
        while (ls >> key) {
            if (key == "degree") ls >> m.kernel.degree;
            else if (key == "sigma") ls >> m.kernel.sigma;
            else if (key == "dim") ls >> m.kernel.data_dim;
            else throw ModelFormatError("unknown kernel field '" + key + "'");
        }
    }
    std::size_t rows = 0, cols = 0;
    {
        std::istringstream ls = next_line(is, "refpoints");
        if (!(ls >> rows >> cols)) throw ModelFormatError("bad refpoints header");
    }
    m.reference_points = Matrix(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::string line;
        if (!std::getline(is, line)) throw ModelFormatError("model file truncated in refpoints");
        std::istringstream ls(line);
        for (std::size_t j = 0; j < cols; ++j)
            if (!(ls >> m.reference_points(i, j)))
                throw ModelFormatError("short refpoints row " + std::to_string(i));
    }
    m.u1 = read_vector(is, "u1", rows);
    m.gamma1 = read_scalar(is, "gamma1");
    m.u2 = read_vector(is, "u2", rows);
    m.gamma2 = read_scalar(is, "gamma2");
    return m;
}

void save_model(const Model& model, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open model file for writing: " + path);
    write_model(model, os);
    os.flush();
    if (!os) throw IoError("failed writing model file: " + path);
}

Model load_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open model file: " + path);
    return read_model(is);
}

}  // namespace gepsvm
