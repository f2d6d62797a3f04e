#include "gepsvm/fuzzy.hpp"

#include <cmath>

namespace gepsvm::fuzzy {

namespace {

constexpr double kCenterTol = 1e-12;

double distance(std::span<const double> p, const Vector& c) {
    return std::sqrt(squared_distance(p, std::span<const double>(c)));
}

}  // namespace

std::string method_token(Method m) {
    switch (m) {
        case Method::none: return "none";
        case Method::exp: return "exp";
        case Method::center_ratio: return "ratio";
        case Method::proposed: return "proposed";
    }
    return "none";
}

Method method_from_token(const std::string& token) {
    if (token == "none") return Method::none;
    if (token == "exp") return Method::exp;
    if (token == "ratio") return Method::center_ratio;
    if (token == "proposed") return Method::proposed;
    throw Error("unknown fuzzy token '" + token + "' (expected none|exp|ratio|proposed)");
}

ClassCenters class_centers(const Matrix& a, const Matrix& b) {
    if (a.rows() == 0 || b.rows() == 0) throw EmptyClass("class_centers: empty class");
    if (a.cols() != b.cols()) throw DimensionMismatch("class_centers: feature counts differ");
    ClassCenters c;
    c.center_a = a.column_means();
    c.center_b = b.column_means();
    c.distance = std::sqrt(squared_distance(c.center_a, c.center_b));
    return c;
}

FuzzyWeights membership_exp(const Matrix& a, const Matrix& b, double f) {
    const ClassCenters c = class_centers(a, b);
    if (c.distance <= kCenterTol)
        throw DegenerateCenters("membership_exp: class centers coincide");

    const double ef = std::exp(f);
    const double emf = std::exp(-f);
    const double denom = 2.0 * (ef - emf);

    auto weigh = [&](const Matrix& pts, const Vector& own, const Vector& other) {
        Vector w(pts.rows());
        for (std::size_t i = 0; i < pts.rows(); ++i) {
            const double ratio = (distance(pts.row(i), other) - distance(pts.row(i), own)) /
                                 c.distance;
            w[i] = 0.5 + (std::exp(f * ratio) - emf) / denom;
        }
        return w;
    };

    FuzzyWeights fw;
    fw.method = Method::exp;
    fw.param = f;
    fw.weights_a = weigh(a, c.center_a, c.center_b);
    fw.weights_b = weigh(b, c.center_b, c.center_a);
    return fw;
}

Vector membership_center_ratio(const Matrix& points, const Vector& own_center,
                               const Vector& other_center, double s) {
    if (points.rows() == 0) throw EmptyClass("membership_center_ratio: no points");
    Vector w(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const double d_own = distance(points.row(i), own_center);
        const double d_other = distance(points.row(i), other_center);
        if (d_other <= kCenterTol)
            throw PointOnOtherCenter("membership_center_ratio: point " + std::to_string(i) +
                                     " sits on the other class's center");
        const double ratio = d_own / d_other;
        w[i] = s + (1.0 - s) * std::exp(-ratio * ratio);
    }
    return w;
}

FuzzyWeights membership_proposed(const Matrix& a, const Matrix& b, double s) {
    const ClassCenters c = class_centers(a, b);
    if (c.distance <= kCenterTol)
        throw DegenerateCenters("membership_proposed: class centers coincide");

    auto weigh = [&](const Matrix& pts, const Vector& own, const Vector& other) {
        Vector dists(pts.rows());
        double mean = 0.0;
        for (std::size_t i = 0; i < pts.rows(); ++i) {
            dists[i] = distance(pts.row(i), own);
            mean += dists[i];
        }
        mean /= static_cast<double>(pts.rows());

        const Vector ratio_w = membership_center_ratio(pts, own, other, s);
        Vector w(pts.rows(), 1.0);
        for (std::size_t i = 0; i < pts.rows(); ++i)
            if (dists[i] > mean) w[i] = ratio_w[i];
        return w;
    };

    FuzzyWeights fw;
    fw.method = Method::proposed;
    fw.param = s;
    fw.weights_a = weigh(a, c.center_a, c.center_b);
    fw.weights_b = weigh(b, c.center_b, c.center_a);
    return fw;
}

FuzzyWeights all_ones(std::size_t m1, std::size_t m2) {
    FuzzyWeights fw;
    fw.method = Method::none;
    fw.weights_a.assign(m1, 1.0);
    fw.weights_b.assign(m2, 1.0);
    return fw;
}

FuzzyWeights compute(Method method, const Matrix& a, const Matrix& b, double f, double s) {
    switch (method) {
        case Method::none: return all_ones(a.rows(), b.rows());
        case Method::exp: return membership_exp(a, b, f);
        case Method::center_ratio: {
            const ClassCenters c = class_centers(a, b);
            if (c.distance <= kCenterTol)
                throw DegenerateCenters("fuzzy: class centers coincide");
            FuzzyWeights fw;
            fw.method = Method::center_ratio;
            fw.param = s;
            fw.weights_a = membership_center_ratio(a, c.center_a, c.center_b, s);
            fw.weights_b = membership_center_ratio(b, c.center_b, c.center_a, s);
            return fw;
        }
        case Method::proposed: return membership_proposed(a, b, s);
    }
    throw Error("fuzzy: unknown method");
}

}  // namespace gepsvm::fuzzy
