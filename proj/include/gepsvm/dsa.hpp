#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>

#include "gepsvm/matrix.hpp"

namespace gepsvm::dsa {

using Rng = std::mt19937_64;
using Objective = std::function<double(const Vector&)>;

/// Box-constrained search domain.
struct SearchSpace {
    std::size_t dim = 0;
    Vector low;
    Vector up;
    void validate() const;
};

struct DsaConfig {
    std::size_t popsize = 30;
    std::size_t maxcycle = 20;
    double p_factor = 0.3;
    std::uint64_t seed = 0;
    std::optional<double> target_fitness;
    unsigned jobs = 1;
    void validate() const;
};

/// The population: one artificial organism per row, fitness kept coherent
/// with the positions at all times.
struct Superorganism {
    Matrix positions;                                       // N x D
    Vector fitness;                                         // N
    std::size_t best_index = 0;
    std::vector<std::pair<std::size_t, double>> best_history;  // (cycle, best fitness)
};

struct OptimizeResult {
    Vector best_position;
    double best_fitness = 0.0;
    std::vector<std::pair<std::size_t, double>> history;
    std::size_t cycles_used = 0;
};

/// Uniform population in the box, fitness evaluated.
Superorganism initialize(const SearchSpace& space, const DsaConfig& config,
                         const Objective& objective, Rng& rng);

/// Scale for the move to the donor: gamma * (r2 - r3), gamma drawn with
/// shape 2*r1 and unit scale.
double generate_scale(Rng& rng);
double scale_value(double gamma_draw, double r2, double r3);

/// Binary freeze mask: entry 1 keeps the parent element, 0 lets it move.
Matrix mutation_mask(std::size_t n, std::size_t d, Rng& rng, double p_factor);

/// One migration cycle: shuffled donor, scaled move, mask, bound repair,
/// greedy one-to-one selection. Appends to best_history.
void evolve_cycle(Superorganism& org, const SearchSpace& space, const DsaConfig& config,
                  const Objective& objective, Rng& rng);

OptimizeResult optimize(const SearchSpace& space, const DsaConfig& config,
                        const Objective& objective);

namespace detail {
std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng);
/// positions + scale * (positions[donor] - positions), with masked elements
/// reset to the parent value. No bound repair.
Matrix make_stopover(const Matrix& positions, const std::vector<std::size_t>& donor,
                     double scale, const Matrix& mask);
}  // namespace detail

}  // namespace gepsvm::dsa
