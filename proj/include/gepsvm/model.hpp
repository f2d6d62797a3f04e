#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "gepsvm/fuzzy.hpp"
#include "gepsvm/kernel.hpp"
#include "gepsvm/matrix.hpp"

namespace gepsvm {

/// Two non-parallel proximal planes x'w - gamma = 0, each stored
/// unit-normalized in the stacked (w, gamma) coordinates.
struct LinearModel {
    Vector w1;
    double gamma1 = 0.0;
    Vector w2;
    double gamma2 = 0.0;
    double delta = 0.0;
};

/// Kernelized planes K(x', C')u - gamma = 0 over the stacked reference
/// points C = [A; B].
struct NonlinearModel {
    Vector u1;
    double gamma1 = 0.0;
    Vector u2;
    double gamma2 = 0.0;
    Matrix reference_points;
    kernel::KernelSpec kernel;
    double delta = 0.0;
};

using Model = std::variant<LinearModel, NonlinearModel>;

LinearModel train_linear(const Matrix& a, const Matrix& b, double delta);

/// train_linear with the class matrices row-scaled by the membership weights.
LinearModel train_linear_fuzzy(const Matrix& a, const Matrix& b, double delta,
                               const fuzzy::FuzzyWeights& fw);

NonlinearModel train_nonlinear(const Matrix& a, const Matrix& b, double delta,
                               kernel::KernelSpec spec);

/// Variant for callers that already hold K(C, C') for the stacked reference
/// points C = [A; B]; rows 0..m1-1 of k_full belong to class A. Skips the
/// kernel evaluation pass of train_nonlinear.
NonlinearModel train_nonlinear_precomputed(const Matrix& k_full, std::size_t m1, Matrix c,
                                           double delta, kernel::KernelSpec spec);

/// Nearest proximal plane by geometric distance; ties go to class 1.
int classify_linear(const LinearModel& model, std::span<const double> x);
int classify_nonlinear(const NonlinearModel& model, std::span<const double> x);
/// Decision rule applied to an already-computed kernel row against the
/// model's reference points.
int classify_nonlinear_row(const NonlinearModel& model, std::span<const double> kernel_row);

std::vector<int> predict(const Model& model, const Matrix& x);

/// Versioned plain-text persistence, lossless for 64-bit floats.
void save_model(const Model& model, const std::string& path);
void write_model(const Model& model, std::ostream& os);
Model load_model(const std::string& path);
Model read_model(std::istream& is);

}  // namespace gepsvm
