#include "gepsvm/dsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gepsvm/parallel.hpp"

namespace gepsvm::dsa {

namespace {

double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::size_t random_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

void evaluate_all(const Objective& objective, const Matrix& positions, Vector& fitness,
                  unsigned jobs) {
    fitness.assign(positions.rows(), 0.0);
    gepsvm::detail::parallel_for(positions.rows(), jobs, [&](std::size_t i) {
        try {
            const auto row = positions.row(i);
            fitness[i] = objective(Vector(row.begin(), row.end()));
        } catch (const ObjectiveFailure&) {
            throw;
        } catch (const std::exception& e) {
            throw ObjectiveFailure(i, e.what());
        }
    });
}

std::size_t argmin(const Vector& v) {
    return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

void SearchSpace::validate() const {
    if (dim == 0 || low.size() != dim || up.size() != dim)
        throw InvalidSpace("search space: dim and bound lengths must agree and be positive");
    for (std::size_t j = 0; j < dim; ++j) {
        if (!std::isfinite(low[j]) || !std::isfinite(up[j]))
            throw InvalidSpace("search space: bounds must be finite");
        if (!(low[j] < up[j]))
            throw InvalidSpace("search space: low must be strictly below up in every dimension");
    }
}

void DsaConfig::validate() const {
    if (popsize < 4) throw Error("dsa: popsize must be at least 4");
    if (maxcycle < 1) throw Error("dsa: maxcycle must be at least 1");
    if (!(p_factor > 0.0)) throw Error("dsa: p_factor must be positive");
}

Superorganism initialize(const SearchSpace& space, const DsaConfig& config,
                         const Objective& objective, Rng& rng) {
    space.validate();
    config.validate();
    Superorganism org;
    org.positions = Matrix(config.popsize, space.dim);
    for (std::size_t i = 0; i < config.popsize; ++i)
        for (std::size_t j = 0; j < space.dim; ++j)
            org.positions(i, j) = uniform01(rng) * (space.up[j] - space.low[j]) + space.low[j];
    evaluate_all(objective, org.positions, org.fitness, config.jobs);
    org.best_index = argmin(org.fitness);
    org.best_history.emplace_back(0, org.fitness[org.best_index]);
    return org;
}

double scale_value(double gamma_draw, double r2, double r3) {
    return gamma_draw * (r2 - r3);
}

double generate_scale(Rng& rng) {
    const double r1 = uniform01(rng);
    const double shape = std::max(2.0 * r1, std::numeric_limits<double>::min());
    const double g = std::gamma_distribution<double>(shape, 1.0)(rng);
    const double r2 = uniform01(rng);
    const double r3 = uniform01(rng);
    return scale_value(g, r2, r3);
}

Matrix mutation_mask(std::size_t n, std::size_t d, Rng& rng, double p_factor) {
    const double p1 = p_factor * uniform01(rng);
    const double p2 = p_factor * uniform01(rng);
    Matrix r(n, d, 1.0);

    if (uniform01(rng) < uniform01(rng)) {
        if (uniform01(rng) < p1) {
            // per-row Bernoulli masks
            Matrix u(n, d);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) u(i, j) = uniform01(rng);
            for (std::size_t i = 0; i < n; ++i) {
                const double threshold = uniform01(rng);
                for (std::size_t j = 0; j < d; ++j) r(i, j) = u(i, j) < threshold ? 1.0 : 0.0;
            }
        } else {
            // one element per row compared against a fresh uniform; from an
            // all-ones mask this frees exactly that element
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = random_index(rng, d);
                r(i, j) = r(i, j) < uniform01(rng) ? 1.0 : 0.0;
            }
        }
    } else {
        // knock out ceil(p2 * rand * D) columns per row, drawn with replacement
        for (std::size_t i = 0; i < n; ++i) {
            const double count_raw = std::ceil(p2 * uniform01(rng) * static_cast<double>(d));
            const std::size_t count =
                std::clamp<std::size_t>(static_cast<std::size_t>(count_raw), 1, d);
            for (std::size_t q = 0; q < count; ++q) r(i, random_index(rng, d)) = 0.0;
        }
    }
    return r;
}

namespace detail {

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    return idx;
}

Matrix make_stopover(const Matrix& positions, const std::vector<std::size_t>& donor,
                     double scale, const Matrix& mask) {
    Matrix candidate = positions;
    for (std::size_t i = 0; i < positions.rows(); ++i) {
        const std::size_t di = donor[i];
        for (std::size_t j = 0; j < positions.cols(); ++j) {
            if (mask(i, j) > 0.0) continue;  // frozen: keep the parent element
            candidate(i, j) =
                positions(i, j) + scale * (positions(di, j) - positions(i, j));
        }
    }
    return candidate;
}

}  // namespace detail

void evolve_cycle(Superorganism& org, const SearchSpace& space, const DsaConfig& config,
                  const Objective& objective, Rng& rng) {
    const std::size_t n = org.positions.rows();
    const std::size_t d = org.positions.cols();

    const auto donor = detail::shuffled_indices(n, rng);
    const double scale = generate_scale(rng);
    const Matrix mask = mutation_mask(n, d, rng, config.p_factor);
    Matrix candidate = detail::make_stopover(org.positions, donor, scale, mask);

    // out-of-bounds elements are re-drawn uniformly inside the box
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double& v = candidate(i, j);
            if (v < space.low[j] || v > space.up[j] || !std::isfinite(v))
                v = std::uniform_real_distribution<double>(0.0, 1.0)(rng) *
                        (space.up[j] - space.low[j]) +
                    space.low[j];
        }

    Vector candidate_fitness;
    evaluate_all(objective, candidate, candidate_fitness, config.jobs);

    // greedy one-to-one selection; ties keep the parent
    for (std::size_t i = 0; i < n; ++i) {
        if (candidate_fitness[i] < org.fitness[i]) {
            for (std::size_t j = 0; j < d; ++j) org.positions(i, j) = candidate(i, j);
            org.fitness[i] = candidate_fitness[i];
        }
    }
    org.best_index = argmin(org.fitness);
    org.best_history.emplace_back(org.best_history.size(), org.fitness[org.best_index]);
}

OptimizeResult optimize(const SearchSpace& space, const DsaConfig& config,
                        const Objective& objective) {
    Rng rng(config.seed);
    Superorganism org = initialize(space, config, objective, rng);

    auto reached_target = [&]() {
        return config.target_fitness && org.fitness[org.best_index] <= *config.target_fitness;
    };

    for (std::size_t cycle = 0; cycle < config.maxcycle && !reached_target(); ++cycle)
        evolve_cycle(org, space, config, objective, rng);

    OptimizeResult result;
    const auto row = org.positions.row(org.best_index);
    result.best_position.assign(row.begin(), row.end());
    result.best_fitness = org.fitness[org.best_index];
    result.history = org.best_history;
    result.cycles_used = org.best_history.size() - 1;
    return result;
}

}  // namespace gepsvm::dsa
