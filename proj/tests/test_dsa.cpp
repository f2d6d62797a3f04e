#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gepsvm/dsa.hpp"

using namespace gepsvm;
using dsa::DsaConfig;
using dsa::SearchSpace;

namespace {

SearchSpace box(Vector low, Vector up) {
    SearchSpace s;
    s.dim = low.size();
    s.low = std::move(low);
    s.up = std::move(up);
    return s;
}

double sphere(const Vector& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

bool within_bounds(const Matrix& positions, const SearchSpace& space) {
    for (std::size_t i = 0; i < positions.rows(); ++i)
        for (std::size_t j = 0; j < positions.cols(); ++j)
            if (positions(i, j) < space.low[j] || positions(i, j) > space.up[j]) return false;
    return true;
}

}  // namespace

TEST_CASE("search space validation") {
    CHECK_THROWS_AS(box({1.0}, {1.0}).validate(), InvalidSpace);
    CHECK_THROWS_AS(box({2.0}, {1.0}).validate(), InvalidSpace);
    CHECK_NOTHROW(box({0.0, -1.0}, {1.0, 1.0}).validate());
    DsaConfig cfg;
    cfg.popsize = 3;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.popsize = 30;
    cfg.maxcycle = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("initialization fills a degenerate box with the single point") {
    dsa::Rng rng(1);
    DsaConfig cfg;
    cfg.popsize = 8;
    const auto org = dsa::initialize(box({2.0}, {2.0 + 1e-13}), cfg, sphere, rng);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(org.positions(i, 0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("initialization is deterministic under the seed") {
    DsaConfig cfg;
    cfg.popsize = 12;
    const auto space = box({-1.0, 0.0}, {1.0, 5.0});
    dsa::Rng rng1(99), rng2(99);
    const auto a = dsa::initialize(space, cfg, sphere, rng1);
    const auto b = dsa::initialize(space, cfg, sphere, rng2);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(a.positions(i, j) == b.positions(i, j));
}

TEST_CASE("initialization is uniform in the box") {
    DsaConfig cfg;
    cfg.popsize = 1000;
    dsa::Rng rng(7);
    const auto org = dsa::initialize(box({0.0, 0.0}, {1.0, 1.0}), cfg, sphere, rng);
    for (std::size_t j = 0; j < 2; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < 1000; ++i) mean += org.positions(i, j);
        mean /= 1000.0;
        CHECK(mean > 0.45);
        CHECK(mean < 0.55);
    }
    CHECK(within_bounds(org.positions, box({0.0, 0.0}, {1.0, 1.0})));
}

TEST_CASE("scale combiner vanishes when the two uniforms agree") {
    CHECK(dsa::scale_value(1.7, 0.42, 0.42) == 0.0);
    CHECK(dsa::scale_value(0.0, 0.9, 0.1) == 0.0);
}

TEST_CASE("scale sign is symmetric and magnitude bounded in expectation") {
    dsa::Rng rng(13);
    const int draws = 100000;
    int positive = 0;
    double abs_sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double s = dsa::generate_scale(rng);
        if (s > 0) ++positive;
        abs_sum += std::fabs(s);
    }
    const double p_positive = static_cast<double>(positive) / draws;
    CHECK(std::fabs(p_positive - 0.5) < 0.01);
    const double mean_abs = abs_sum / draws;
    CHECK(std::isfinite(mean_abs));
    CHECK(mean_abs < 2.0);  // E|gamma| = 2 E[r1] = 1, times E|r2 - r3| = 1/3
}

TEST_CASE("mutation mask determinism and D=1 behavior") {
    dsa::Rng rng1(3), rng2(3);
    const Matrix m1 = dsa::mutation_mask(20, 4, rng1, 0.3);
    const Matrix m2 = dsa::mutation_mask(20, 4, rng2, 0.3);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(m1(i, j) == m2(i, j));
            CHECK((m1(i, j) == 0.0 || m1(i, j) == 1.0));
        }

    dsa::Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix m = dsa::mutation_mask(6, 1, rng, 0.3);
        for (std::size_t i = 0; i < 6; ++i) CHECK((m(i, 0) == 0.0 || m(i, 0) == 1.0));
    }
}

TEST_CASE("mutation mask neither freezes nor frees everything globally") {
    dsa::Rng rng(11);
    std::size_t zeros = 0, total = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const Matrix m = dsa::mutation_mask(5, 4, rng, 0.3);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                zeros += m(i, j) == 0.0;
                ++total;
            }
    }
    CHECK(zeros > 0);
    CHECK(zeros < total);
}

TEST_CASE("stopover with zero scale or all-ones mask returns the parents") {
    dsa::Rng rng(17);
    DsaConfig cfg;
    cfg.popsize = 10;
    const auto space = box({-3.0, -3.0, -3.0}, {3.0, 3.0, 3.0});
    const auto org = dsa::initialize(space, cfg, sphere, rng);
    const auto donor = dsa::detail::shuffled_indices(10, rng);

    const Matrix free_mask(10, 3, 0.0);
    const Matrix zero_scale = dsa::detail::make_stopover(org.positions, donor, 0.0, free_mask);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(zero_scale(i, j) == org.positions(i, j));

    const Matrix frozen_mask(10, 3, 1.0);
    const Matrix frozen = dsa::detail::make_stopover(org.positions, donor, 2.7, frozen_mask);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(frozen(i, j) == org.positions(i, j));
}

TEST_CASE("donor shuffling is a permutation") {
    dsa::Rng rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        auto idx = dsa::detail::shuffled_indices(30, rng);
        std::sort(idx.begin(), idx.end());
        for (std::size_t i = 0; i < 30; ++i) CHECK(idx[i] == i);
    }
}

TEST_CASE("evolve_cycle keeps bounds, coherence and monotone best") {
    const auto space = box({-5.0, -5.0, -5.0, -5.0}, {5.0, 5.0, 5.0, 5.0});
    DsaConfig cfg;
    cfg.popsize = 20;
    dsa::Rng rng(23);
    auto org = dsa::initialize(space, cfg, sphere, rng);
    double best = org.fitness[org.best_index];
    for (int cycle = 0; cycle < 40; ++cycle) {
        dsa::evolve_cycle(org, space, cfg, sphere, rng);
        CHECK(within_bounds(org.positions, space));
        for (std::size_t i = 0; i < 20; ++i) {
            const auto row = org.positions.row(i);
            CHECK(org.fitness[i] == sphere(Vector(row.begin(), row.end())));
        }
        const double now = org.fitness[org.best_index];
        CHECK(now <= best);
        best = now;
    }
    REQUIRE(org.best_history.size() == 41);
    for (std::size_t c = 1; c < org.best_history.size(); ++c) {
        CHECK(org.best_history[c].first == c);
        CHECK(org.best_history[c].second <= org.best_history[c - 1].second);
    }
}

TEST_CASE("sphere improves over initialization in nearly all seeded trials") {
    const auto space = box({-5.0, -5.0, -5.0, -5.0, -5.0}, {5.0, 5.0, 5.0, 5.0, 5.0});
    int improved = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        DsaConfig cfg;
        cfg.seed = seed;
        const auto result = dsa::optimize(space, cfg, sphere);
        if (result.history.back().second < result.history.front().second) ++improved;
    }
    CHECK(improved >= 95);
}

TEST_CASE("optimize on a constant objective returns the constant") {
    DsaConfig cfg;
    cfg.maxcycle = 5;
    const auto result =
        dsa::optimize(box({0.0}, {1.0}), cfg, [](const Vector&) { return 4.25; });
    CHECK(result.best_fitness == 4.25);
    CHECK(result.best_position[0] >= 0.0);
    CHECK(result.best_position[0] <= 1.0);
}

TEST_CASE("one-dimensional quadratic is located inside a huge box") {
    DsaConfig cfg;
    cfg.maxcycle = 100;
    cfg.seed = 5;
    const auto result = dsa::optimize(box({0.001}, {10000.0}), cfg, [](const Vector& x) {
        return (x[0] - 2.0) * (x[0] - 2.0);
    });
    CHECK(std::fabs(result.best_position[0] - 2.0) < 0.1);
}

TEST_CASE("optimize is bitwise deterministic under the seed") {
    const auto space = box({-5.0, -5.0, -5.0}, {5.0, 5.0, 5.0});
    DsaConfig cfg;
    cfg.seed = 31;
    cfg.maxcycle = 30;
    const auto a = dsa::optimize(space, cfg, sphere);
    const auto b = dsa::optimize(space, cfg, sphere);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].first == b.history[i].first);
        CHECK(a.history[i].second == b.history[i].second);
    }
    CHECK(a.best_position == b.best_position);
    CHECK(a.best_fitness == b.best_fitness);
}

TEST_CASE("parallel evaluation does not change the outcome") {
    const auto space = box({-5.0, -5.0, -5.0}, {5.0, 5.0, 5.0});
    DsaConfig serial;
    serial.seed = 37;
    serial.maxcycle = 15;
    DsaConfig parallel = serial;
    parallel.jobs = 4;
    const auto a = dsa::optimize(space, serial, sphere);
    const auto b = dsa::optimize(space, parallel, sphere);
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(a.best_position == b.best_position);
}

TEST_CASE("early stop triggers as soon as the target is reached") {
    DsaConfig cfg;
    cfg.maxcycle = 50;
    cfg.target_fitness = 0.5;
    const auto result =
        dsa::optimize(box({0.0}, {1.0}), cfg, [](const Vector&) { return 0.25; });
    CHECK(result.cycles_used == 0);  // initialization already meets the target
    CHECK(result.best_fitness == 0.25);
}

TEST_CASE("objective failures carry the organism index") {
    DsaConfig cfg;
    cfg.maxcycle = 2;
    try {
        dsa::optimize(box({0.0}, {1.0}), cfg, [](const Vector&) -> double {
            throw std::runtime_error("boom");
        });
        FAIL("expected ObjectiveFailure");
    } catch (const ObjectiveFailure& e) {
        CHECK(e.organism_index == 0);
    }
}

TEST_CASE("five-dimensional sphere beats equal-budget random search") {
    const auto space = box({-5.0, -5.0, -5.0, -5.0, -5.0}, {5.0, 5.0, 5.0, 5.0, 5.0});
    int wins = 0;
    int reached_tolerance = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        DsaConfig cfg;
        cfg.seed = seed;
        cfg.maxcycle = 200;
        const auto result = dsa::optimize(space, cfg, sphere);

        // random search with the identical evaluation budget: 30 + 200*30
        dsa::Rng rng(seed + 1000);
        std::uniform_real_distribution<double> ud(-5.0, 5.0);
        double best_random = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 30 + 200 * 30; ++i) {
            Vector x(5);
            for (double& v : x) v = ud(rng);
            best_random = std::min(best_random, sphere(x));
        }
        if (result.best_fitness < best_random) ++wins;
        if (result.best_fitness < 1e-2) ++reached_tolerance;
    }
    CHECK(wins >= 45);  // 90% of 50 trials
    CHECK(reached_tolerance >= 45);
}
