#pragma once

#include <string>

#include "gepsvm/matrix.hpp"

namespace gepsvm::fuzzy {

enum class Method { none, exp, center_ratio, proposed };

/// CLI/config token: none | exp | ratio | proposed.
std::string method_token(Method m);
Method method_from_token(const std::string& token);

/// Per-sample membership weights, the diagonals of the S^A and S^B matrices.
struct FuzzyWeights {
    Vector weights_a;
    Vector weights_b;
    Method method = Method::none;
    double param = 0.0;  // f for exp, s for ratio/proposed
};

struct ClassCenters {
    Vector center_a;
    Vector center_b;
    double distance = 0.0;  // two-norm distance between the centers
};

ClassCenters class_centers(const Matrix& a, const Matrix& b);

/// Weights decay from 1 at the own-class center towards 0.5 at the other
/// center; f sets the decay rate.
FuzzyWeights membership_exp(const Matrix& a, const Matrix& b, double f);

/// s + (1-s) * exp(-(d(x, own center)/d(x, other center))^2) per point.
Vector membership_center_ratio(const Matrix& points, const Vector& own_center,
                               const Vector& other_center, double s);

/// Points within their class's mean center-distance keep weight 1; only the
/// ones farther out get the center-ratio value.
FuzzyWeights membership_proposed(const Matrix& a, const Matrix& b, double s);

FuzzyWeights all_ones(std::size_t m1, std::size_t m2);

/// Dispatch on method; f feeds exp, s feeds ratio/proposed.
FuzzyWeights compute(Method method, const Matrix& a, const Matrix& b, double f, double s);

}  // namespace gepsvm::fuzzy
