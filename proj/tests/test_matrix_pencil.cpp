#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "ssp/errors.hpp"
#include "ssp/experiments.hpp"
#include "ssp/hankel_subspace.hpp"
#include "ssp/matrix_pencil.hpp"

using namespace ssp;

namespace {

Complex unit(int k, int n) { return std::polar(1.0, 2.0 * std::numbers::pi * k / n); }

std::vector<Complex> sorted_by_angle(std::vector<Complex> z) {
    std::sort(z.begin(), z.end(), [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
    return z;
}

} // namespace

TEST_CASE("pencil_pair") {
    CMatrix Y(2, 2);
    Y << 1, 2, 3, 4;
    const PencilPair p = pencil_pair(Y);
    REQUIRE(p.advanced.rows() == 1);
    CHECK(p.advanced(0, 0) == Complex(3, 0));
    CHECK(p.advanced(0, 1) == Complex(4, 0));
    CHECK(p.lagged(0, 0) == Complex(1, 0));
    CHECK(p.lagged(0, 1) == Complex(2, 0));
    CHECK_THROWS_AS(pencil_pair(CMatrix::Ones(1, 4)), DomainError);

    const PartialFourier grid(1000, 30);
    for (int k : {-500, -3, 0, 101, 499}) {
        const PencilPair q = pencil_pair(build_hankel(atom(grid, k), 10));
        CHECK((q.advanced - unit(k, 1000) * q.lagged).norm() < 1e-12);
    }
}

TEST_CASE("noiseless pencil drops rank exactly at the true nodes") {
    const int n = 1000;
    const SparseSignal x(n, {100, 101}, {1 / std::sqrt(2.0), -1 / std::sqrt(2.0)});
    const Measurement y = measure(x, MeasurementModel::with_default_rows(n, 120), {});
    const PencilPair p = pencil_pair(build_hankel(y.values, y.model.L));
    const auto second_sv = [&p](Complex z) {
        Eigen::BDCSVD<CMatrix> svd(p.advanced - z * p.lagged);
        return svd.singularValues()[1];
    };
    const double generic = second_sv(unit(250, n));
    CHECK(generic > 1e-3);
    CHECK(second_sv(unit(100, n)) < 1e-9 * generic);
    CHECK(second_sv(unit(101, n)) < 1e-9 * generic);
    // one step off the grid point still has full rank 2
    CHECK(second_sv(unit(102, n)) > 1e3 * second_sv(unit(101, n)));
}

TEST_CASE("denoise") {
    Rng rng(2);
    const CMatrix M = CMatrix::NullaryExpr(6, 9, [&rng] { return Complex(rng.normal(), rng.normal()); });
    CHECK(denoise(M, 0.0, 6, 1.5) == M);

    // singular values (1, 1e-6); threshold 1e-3 sqrt(40 ln 40) ~ 0.0121
    CHECK(1e-3 * std::sqrt(40 * std::log(40.0)) == doctest::Approx(0.0121).epsilon(0.01));
    const CMatrix U = oracle::svd_basis(M.leftCols(2));
    CMatrix V = CMatrix::Zero(9, 2);
    V(0, 0) = 1;
    V(4, 1) = 1;
    const CMatrix two = U * Eigen::Vector2d(1.0, 1e-6).cast<Complex>().asDiagonal() * V.adjoint();
    const CMatrix one = denoise(two, 1e-3, 40, 1.0);
    Eigen::BDCSVD<CMatrix> svd(one);
    CHECK(svd.singularValues()[0] == doctest::Approx(1.0));
    CHECK(svd.singularValues()[1] < 1e-14);

    CHECK(denoise(two * 1e-3, 1e-3, 40, 1.0).norm() == 0.0);
    CHECK_THROWS_AS(denoise(M, 1e-3, 6, 0.0), DomainError);
}

TEST_CASE("pencil estimates on noiseless data") {
    for (int k : {-37, 0, 12}) {
        const SparseSignal x(256, {k}, {Complex(0.3, 0.4)});
        const Measurement y = measure(x, MeasurementModel(256, 12, 4), {});
        CHECK(pencil_frequencies(y, 0.0, {}) == std::vector<int>{k});
    }

    const SparseSignal pair(1000, {100, 101}, {1 / std::sqrt(2.0), -1 / std::sqrt(2.0)});
    const Measurement y = measure(pair, MeasurementModel::with_default_rows(1000, 120), {});
    CHECK(pencil_frequencies(y, 0.0, {}) == std::vector<int>{100, 101});
    const RecoveryResult r = pencil_recover(y, 0.0, {});
    CHECK(r.support == pair.support());
    CHECK(relative_error(r, pair) < 1e-8);
    CHECK(r.method == "pencil");

    const Measurement zero{CVector::Zero(30), MeasurementModel(100, 30, 10)};
    CHECK_THROWS_AS(pencil_recover(zero, 1e-3, {}), EmptyEstimateError);
}

TEST_CASE("pencil: noiseless exactness for random supports, n <= 256") {
    Rng rng(404);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = trial % 2 ? 256 : 64;
        const int s = 1 + static_cast<int>(rng.uniform_int(0, 5));
        const int m = 2 * s + 2 + static_cast<int>(rng.uniform_int(0, 30));
        const int L = static_cast<int>(rng.uniform_int(s + 1, m - s));
        const SparseSignal x(n, oracle::random_support(rng, n, s), oracle::random_amplitudes(rng, s));
        const Measurement y = measure(x, MeasurementModel(n, m, L), {});
        INFO("n=" << n << " m=" << m << " L=" << L << " s=" << s);
        CHECK(pencil_frequencies(y, 0.0, {}) == x.support());
    }
}

TEST_CASE("Prony order equals general order on noiseless data") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 256;
        const int s = 1 + static_cast<int>(rng.uniform_int(0, 4));
        const int m = 2 * s + 4 + static_cast<int>(rng.uniform_int(0, 20));
        const SparseSignal x(n, oracle::random_support(rng, n, s), oracle::random_amplitudes(rng, s));
        const MeasurementModel prony(n, m, s + 1);
        const MeasurementModel general(n, m, std::max(s + 1, m / 2));
        CHECK(pencil_frequencies(measure(x, prony, {}), 0.0, {}) ==
              pencil_frequencies(measure(x, general, {}), 0.0, {}));
    }
}

TEST_CASE("compressed and full eigensolves agree") {
    const SparseSignal x = make_signal(SignalFamily::k_sparse_adjacent(3), 1000, 90, 0);
    const Measurement y = measure(x, MeasurementModel::with_default_rows(1000, 90), NoiseSpec(1e-3, 44));
    PencilConfig compressed;
    PencilConfig full;
    full.compressed = false;
    const PencilEstimate a = pencil_estimate(y, 1e-3, compressed);
    const PencilEstimate b = pencil_estimate(y, 1e-3, full);
    CHECK(a.indices == b.indices);
    CHECK(a.rank == b.rank);

    std::vector<Complex> nonzero;
    for (Complex z : b.eigenvalues) {
        if (std::abs(z) > 1e-6) nonzero.push_back(z);
    }
    const auto lhs = sorted_by_angle(a.eigenvalues);
    const auto rhs = sorted_by_angle(nonzero);
    REQUIRE(lhs.size() == rhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-8);
}

TEST_CASE("grid mapping inverts atom generation") {
    for (int n : {8, 64, 1000}) {
        for (int k = -n / 2; k < n / 2; ++k) {
            CHECK(nearest_grid_index(atom(PartialFourier(n, 2), k)[1], n) == k);
            CHECK(nearest_grid_index(1.1 * unit(k, n), n) == k);
        }
    }
}

TEST_CASE("config validation") {
    PencilConfig c;
    CHECK_NOTHROW(c.validate());
    c.rho_lo = 1.2;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = PencilConfig{};
    c.denoise_constant = -1;
    CHECK_THROWS_AS(c.validate(), DomainError);
}
