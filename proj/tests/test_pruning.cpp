#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "ssp/errors.hpp"
#include "ssp/experiments.hpp"
#include "ssp/pruning.hpp"
#include "ssp/superset.hpp"

using namespace ssp;

namespace {

// |P_omega y - P_{omega\k} y| from SVD projectors.
double gap_oracle(const CVector& y, const std::vector<int>& omega, int k, int n) {
    const int m = static_cast<int>(y.size());
    std::vector<int> rest;
    for (int j : omega) {
        if (j != k) rest.push_back(j);
    }
    const CVector full = oracle::project(oracle::svd_basis(oracle::columns(n, m, omega)), y);
    const CVector reduced =
        rest.empty() ? CVector(CVector::Zero(m)) : oracle::project(oracle::svd_basis(oracle::columns(n, m, rest)), y);
    return (full - reduced).norm();
}

double relative(const RecoveryResult& r, const SparseSignal& x) { return relative_error(r, x); }

} // namespace

TEST_CASE("least_squares") {
    const PartialFourier grid(32, 8);
    Rng rng(8);
    const CVector y = oracle::random_vector(rng, 8);
    const std::vector<int> omega{-9, 2, 3};
    const CVector fast = least_squares(y, omega, grid);
    const CVector slow = oracle::normal_equations(oracle::columns(32, 8, omega), y);
    CHECK((fast - slow).norm() < 1e-8 * slow.norm());

    // singleton: rank-1 projection <a_k, y> / |a_k|^2
    const std::vector<int> one{5};
    const CVector a = atom(grid, 5);
    CHECK(std::abs(least_squares(y, one, grid)[0] - a.dot(y) / a.squaredNorm()) < 1e-13);

    // exact data on its own support
    const SparseSignal x(32, {-4, 7}, {Complex(1, 1), -2.0});
    const Measurement clean = measure(x, MeasurementModel(32, 8, 3), {});
    const std::vector<int> T{-4, 7};
    const CVector coeffs = least_squares(clean.values, T, grid);
    CHECK(std::abs(coeffs[0] - Complex(1, 1)) < 1e-12);
    CHECK(std::abs(coeffs[1] - Complex(-2, 0)) < 1e-12);

    CHECK_THROWS_AS(least_squares(y, std::vector<int>{}, grid), DomainError);
    std::vector<int> too_many{-16, -15, -14, -13, -12, -11, -10, -9, -8};
    CHECK_THROWS_AS(least_squares(y, too_many, grid), OverCompleteError);
}

TEST_CASE("projection_gap examples") {
    const int n = 256;
    const int m = 24;
    const PartialFourier grid(n, m);
    const SparseSignal x(n, {-30, 4, 5, 80}, {1.0, Complex(0, 1), -0.5, 2.0});
    const CVector y = measure(x, MeasurementModel(n, m, 8), {}).values;
    const std::vector<int> T = x.support();

    for (std::size_t i = 0; i < T.size(); ++i) {
        std::vector<int> rest;
        for (int j : T) {
            if (j != T[i]) rest.push_back(j);
        }
        const double dist = oracle::sin_angle(oracle::atom(n, m, T[i]), oracle::columns(n, m, rest)) * std::sqrt(m);
        const double expected = std::abs(x.amplitudes()[i]) * dist;
        CHECK(projection_gap(y, T, T[i], grid) > 0.0);
        CHECK(projection_gap(y, T, T[i], grid) == doctest::Approx(expected).epsilon(1e-8));
    }

    std::vector<int> with_spurious = T;
    with_spurious.push_back(-100);
    CHECK(projection_gap(y, with_spurious, -100, grid) < 1e-9);

    // y orthogonal to Ran A_omega: a full-length Fourier row is orthogonal to the others
    const PartialFourier square(16, 16);
    const CVector orth = atom(square, 3);
    const std::vector<int> omega{-2, 0, 5};
    for (int k : omega) CHECK(projection_gap(orth, omega, k, square) < 1e-12);

    CHECK_THROWS_AS(projection_gap(y, T, 7, grid), DomainError);
}

TEST_CASE("projection gaps match the SVD oracle and both evaluation paths agree") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = trial % 2 ? 1000 : 128;
        const int m = 20 + static_cast<int>(rng.uniform_int(0, 40));
        const PartialFourier grid(n, m);
        const int size = 2 + static_cast<int>(rng.uniform_int(0, 8));
        const std::vector<int> omega = oracle::random_support(rng, n, size);
        const CVector y = oracle::random_vector(rng, m);
        const Eigen::VectorXd refactor = projection_gaps(y, omega, grid, Execution::serial, GapMethod::refactor);
        const Eigen::VectorXd closed = projection_gaps(y, omega, grid, Execution::serial, GapMethod::closed_form);
        for (int i = 0; i < size; ++i) {
            const double truth = gap_oracle(y, omega, omega[i], n);
            CHECK(std::abs(refactor[i] - truth) < 1e-8 * std::max(1.0, y.norm()));
            CHECK(std::abs(closed[i] - refactor[i]) < 1e-10 * std::max(1.0, y.norm()));
        }
        const Eigen::VectorXd par = projection_gaps(y, omega, grid, Execution::parallel, GapMethod::refactor);
        CHECK((par.array() == refactor.array()).all());
        const Eigen::VectorXd par_closed = projection_gaps(y, omega, grid, Execution::parallel, GapMethod::closed_form);
        CHECK((par_closed.array() == closed.array()).all());
    }
}

TEST_CASE("projection identity: delta_k = sin(P_omega y, Ran A_{omega\\k}) |P_omega y|") {
    Rng rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 256;
        const int m = 16 + static_cast<int>(rng.uniform_int(0, 30));
        const PartialFourier grid(n, m);
        const int size = 2 + static_cast<int>(rng.uniform_int(0, 6));
        const std::vector<int> omega = oracle::random_support(rng, n, size);
        const CVector y = oracle::random_vector(rng, m);
        const CVector py = oracle::project(oracle::svd_basis(oracle::columns(n, m, omega)), y);
        const int k = omega[static_cast<std::size_t>(rng.uniform_int(0, size - 1))];
        std::vector<int> rest;
        for (int j : omega) {
            if (j != k) rest.push_back(j);
        }
        const double rhs = oracle::sin_angle(py, oracle::columns(n, m, rest)) * py.norm();
        CHECK(std::abs(projection_gap(y, omega, k, grid) - rhs) < 1e-8);
    }
}

TEST_CASE("prune examples") {
    const int n = 64;
    const int m = 20;
    const MeasurementModel model(n, m, 6);
    const SparseSignal x(n, {-10, 3, 21}, {1.0, Complex(-0.5, 0.8), 1.2});
    const Measurement y = measure(x, model, {});

    SUBCASE("omega = T keeps everything") {
        const RecoveryResult r = prune(y, x.support(), 1e-12);
        CHECK(r.iterations == 0);
        CHECK(r.support == x.support());
        CHECK(relative(r, x) < 1e-9);
    }

    SUBCASE("one spurious index is removed, brute force over j") {
        for (int j = -n / 2; j < n / 2; ++j) {
            if (std::find(x.support().begin(), x.support().end(), j) != x.support().end()) continue;
            std::vector<int> omega = x.support();
            omega.push_back(j);
            for (GapMethod method : {GapMethod::refactor, GapMethod::closed_form}) {
                const RecoveryResult r = prune(y, omega, 1e-6, Execution::serial, method);
                INFO("j=" << j);
                CHECK(r.iterations == 1);
                REQUIRE(r.prune_trace.size() == 1);
                CHECK(r.prune_trace[0].index == j);
                CHECK(r.support == x.support());
                CHECK(relative(r, x) < 1e-9);
            }
        }
    }

    SUBCASE("errors and the singleton floor") {
        CHECK_THROWS_AS(prune(y, {}, 1e-6), EmptyEstimateError);
        CHECK_THROWS_AS(prune(y, x.support(), -1.0), DomainError);
        const Measurement zero{CVector::Zero(m), model};
        const RecoveryResult r = prune(zero, {-3, 4, 9}, 1e-3);
        CHECK(r.support.size() == 1);
        CHECK(r.possibly_zero);
        CHECK(r.iterations == 2);
    }
}

TEST_CASE("prune: monotone residual, bounded iterations, deterministic") {
    Rng rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 1000;
        const int m = 60 + static_cast<int>(rng.uniform_int(0, 60));
        const SparseSignal x(n, oracle::random_support(rng, n, 4), oracle::random_amplitudes(rng, 4));
        const Measurement y = measure(x, MeasurementModel::with_default_rows(n, m), NoiseSpec(1e-2, rng.next_u64()));
        std::vector<int> omega = x.support();
        for (int extra : oracle::random_support(rng, n, 8)) {
            if (std::find(omega.begin(), omega.end(), extra) == omega.end()) omega.push_back(extra);
        }
        const RecoveryResult r = prune(y, omega, 0.1);
        CHECK(r.iterations <= static_cast<int>(omega.size()));
        CHECK(r.iterations == static_cast<int>(r.prune_trace.size()));

        std::vector<int> active = omega;
        std::sort(active.begin(), active.end());
        const PartialFourier grid(n, m);
        double residual = (y.values - atoms(grid, active) * least_squares(y.values, active, grid)).norm();
        for (const PruneStep& step : r.prune_trace) {
            CHECK(step.delta < 0.1);
            active.erase(std::find(active.begin(), active.end(), step.index));
            const double next = (y.values - atoms(grid, active) * least_squares(y.values, active, grid)).norm();
            CHECK(next >= residual - 1e-10);
            residual = next;
        }
        CHECK(active == r.support);
        CHECK(r.residual == doctest::Approx(residual).epsilon(1e-12));

        const RecoveryResult again = prune(y, omega, 0.1, Execution::serial);
        CHECK(again.support == r.support);
        CHECK((again.coefficients.array() == r.coefficients.array()).all());
    }
}

TEST_CASE("noiseless recovery") {
    SUBCASE("single spike at k = 0") {
        const SparseSignal x(8, {0}, {Complex(0.25, -3)});
        const RecoveryResult r = noiseless_recover(measure(x, MeasurementModel(8, 4, 2), {}));
        CHECK(r.support == x.support());
        CHECK(std::abs(r.coefficient(0) - Complex(0.25, -3)) < 1e-13);
    }
    SUBCASE("random 5-sparse, n = 256, m = 16, L = 6") {
        Rng rng(256);
        for (int trial = 0; trial < 100; ++trial) {
            const SparseSignal x(256, oracle::random_support(rng, 256, 5), oracle::random_amplitudes(rng, 5));
            const RecoveryResult r = noiseless_recover(measure(x, MeasurementModel(256, 16, 6), {}));
            CHECK(r.support == x.support());
            CHECK(relative(r, x) < 1e-9);
        }
    }
    SUBCASE("alternating adjacent spikes") {
        const SparseSignal x(1000, {100, 101}, {1 / std::sqrt(2.0), -1 / std::sqrt(2.0)});
        for (int m : {8, 20, 120}) {
            // exactness needs L > |T|; floor(8 / 3) = 2 would make the Hankel range all of C^2
            const RecoveryResult r = noiseless_recover(measure(x, MeasurementModel(1000, m, std::max(3, m / 3)), {}));
            CHECK(r.support == x.support());
            CHECK(relative(r, x) < 1e-8);
        }
    }
    SUBCASE("empty and over-complete selections") {
        const Measurement zero{CVector::Zero(12), MeasurementModel(64, 12, 4)};
        CHECK_THROWS_AS(noiseless_recover(zero), EmptyEstimateError);
    }
}

TEST_CASE("superset pipeline") {
    SUBCASE("noiseless with tiny thresholds is exact") {
        Rng rng(4);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 1000;
            const int s = 1 + static_cast<int>(rng.uniform_int(0, 7));
            const int m = 3 * s + 3 + static_cast<int>(rng.uniform_int(0, 60));
            const SparseSignal x(n, oracle::random_support(rng, n, s), oracle::random_amplitudes(rng, s));
            SupersetConfig config;
            config.selection.epsilon1 = 1e-8;
            config.epsilon2 = 1e-8;
            const RecoveryResult r = superset_recover(measure(x, MeasurementModel::with_default_rows(n, m), {}), config);
            CHECK(r.support == x.support());
            CHECK(relative(r, x) < 1e-8);
        }
    }
    SUBCASE("epsilon2 defaults to 10 sigma") {
        SupersetConfig config;
        config.selection.sigma = 2e-3;
        CHECK(resolved_epsilon2(config) == doctest::Approx(2e-2));
        config.epsilon2 = 0.5;
        CHECK(resolved_epsilon2(config) == 0.5);
    }
    SUBCASE("well-separated signal at sigma = 1e-3") {
        const SparseSignal x = make_signal(SignalFamily::well_separated(), 1000, 120, 17);
        const Measurement y = measure(x, MeasurementModel::with_default_rows(1000, 120), NoiseSpec(1e-3, 18));
        SupersetConfig config;
        config.selection.sigma = 1e-3;
        const RecoveryResult r = superset_recover(y, config);
        CHECK((r.coefficients - x.dense()).norm() <= 0.2);
        CHECK(r.gammas.size() == 1000);
        CHECK(r.epsilon2 == doctest::Approx(1e-2));
    }
}
