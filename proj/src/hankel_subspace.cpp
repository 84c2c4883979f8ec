#include "ssp/hankel_subspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "ssp/errors.hpp"

namespace ssp {

CMatrix build_hankel(const CVector& y, int L) {
    const auto m = static_cast<int>(y.size());
    if (L <= 1 || L >= m) throw DomainError("Hankel rows must satisfy 1 < L < m");
    const int cols = m - L + 1;
    CMatrix Y(L, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < L; ++i) Y(i, j) = y[i + j];
    return Y;
}

int estimate_rank(std::span<const double> singular_values, double sigma, int m, [[maybe_unused]] int L, double c_rank) {
    if (singular_values.empty()) throw DomainError("empty singular value list");
    if (!(sigma >= 0.0)) throw DomainError("noise level must be >= 0");
    double cut = 0.0;
    if (sigma > 0.0) {
        cut = c_rank * sigma * std::sqrt(m * std::log(static_cast<double>(m)));
    } else {
        cut = singular_values.front() * exact_rank_tolerance;
    }
    const auto above = std::count_if(singular_values.begin(), singular_values.end(), [cut](double s) { return s > cut; });
    return std::max(1, static_cast<int>(above));
}

CMatrix range_basis(const CMatrix& hankel, int rank, BasisMethod method) {
    const auto limit = std::min(hankel.rows(), hankel.cols());
    if (rank < 1 || rank > limit) throw DomainError("basis rank " + std::to_string(rank) + " out of range");
    if (method == BasisMethod::pivoted_qr) {
        Eigen::ColPivHouseholderQR<CMatrix> qr(hankel);
        CMatrix Q = qr.householderQ() * CMatrix::Identity(hankel.rows(), rank);
        return Q;
    }
    Eigen::BDCSVD<CMatrix> svd(hankel, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(rank);
}

double atom_angle(const CVector& a, const CMatrix& basis) {
    if (a.size() != basis.rows()) throw DomainError("atom length differs from basis row count");
    const double norm = a.norm();
    if (norm == 0.0) throw DomainError("angle of a zero vector is undefined");
    const CVector residual = a - basis * (basis.adjoint() * a);
    return std::clamp(residual.norm() / norm, 0.0, 1.0);
}

double epsilon1(double sigma, int rank, int m, double s1, double s2, double c, ThresholdScaling scaling) {
    if (!(s1 > s2)) throw DegenerateGapError("epsilon1 needs s1 > s2");
    if (sigma < 0.0 || rank < 1 || m < 2 || s2 < 0.0) throw DomainError("invalid epsilon1 arguments");
    const double bound = sigma * std::sqrt(rank * m * std::log(static_cast<double>(m))) / (s1 - s2);
    switch (scaling) {
    case ThresholdScaling::sqrt_c: return std::sqrt(c * bound);
    case ThresholdScaling::linear_c: return c * std::sqrt(bound);
    case ThresholdScaling::bound_c: return c * bound;
    }
    return std::sqrt(c * bound);
}

HankelSpectrum analyze_hankel(const Measurement& y, const SelectionConfig& config) {
    const int L = y.model.L;
    const int m = y.size();
    HankelSpectrum out;
    out.matrix = build_hankel(y.values, L);
    Eigen::BDCSVD<CMatrix> svd(out.matrix, Eigen::ComputeThinU);
    out.singular_values = svd.singularValues();
    const std::span<const double> sv(out.singular_values.data(), static_cast<std::size_t>(out.singular_values.size()));
    out.rank = estimate_rank(sv, config.sigma, m, L, config.c_rank);
    if (config.basis == BasisMethod::svd) {
        out.basis = svd.matrixU().leftCols(out.rank);
    } else {
        out.basis = range_basis(out.matrix, out.rank, BasisMethod::pivoted_qr);
    }
    return out;
}

Eigen::VectorXd atom_angles(const PartialFourier& grid, const CMatrix& basis, Execution execution) {
    const int n = grid.n;
    const auto rows = static_cast<int>(basis.rows());
    Eigen::VectorXd gammas(n);
    const auto one = [&](int idx) { gammas[idx] = atom_angle(atom_prefix(grid, idx - n / 2, rows), basis); };
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int idx = 0; idx < n; ++idx) one(idx);
    } else {
        for (int idx = 0; idx < n; ++idx) one(idx);
    }
    return gammas;
}

ThresholdChoice choose_epsilon1(const HankelSpectrum& spectrum, int m, const SelectionConfig& config) {
    ThresholdChoice choice;
    if (config.epsilon1) {
        choice.value = *config.epsilon1;
    } else if (config.sigma > 0.0) {
        const auto& sv = spectrum.singular_values;
        const auto at = [&sv](int i) { return i < sv.size() ? sv[i] : 0.0; };
        const double noise_gap = 10.0 * config.sigma;
        if (at(0) - at(1) > noise_gap) {
            choice.value = epsilon1(config.sigma, spectrum.rank, m, at(0), at(1), config.c, config.scaling);
        } else {
            choice.fallback = true;
            const int r = spectrum.rank;
            if (at(r - 1) - at(r) > noise_gap) {
                choice.value = epsilon1(config.sigma, r, m, at(r - 1), at(r), config.c, config.scaling);
            } else {
                choice.value = 0.5;
                choice.warning = "no usable singular gap above 10*sigma; epsilon1 set to 0.5";
            }
        }
    }
    choice.value = std::max(choice.value, config.floor);
    return choice;
}

SupersetSelection select_superset(const Measurement& y, const SelectionConfig& config) {
    const MeasurementModel& model = y.model;
    if (y.size() != model.m) throw DomainError("measurement length differs from model m");
    const HankelSpectrum spectrum = analyze_hankel(y, config);
    const ThresholdChoice threshold = choose_epsilon1(spectrum, model.m, config);

    SupersetSelection out;
    out.rank = spectrum.rank;
    out.epsilon1 = threshold.value;
    out.gap_fallback = threshold.fallback;
    if (threshold.warning) out.warnings.push_back(*threshold.warning);
    out.gammas = atom_angles(model.fourier(), spectrum.basis, config.execution);

    const int n = model.n;
    for (int idx = 0; idx < n; ++idx)
        if (out.gammas[idx] <= out.epsilon1) out.omega.push_back(idx - n / 2);

    if (static_cast<int>(out.omega.size()) > model.L) {
        // Keep the L best-aligned atoms; ties go to smaller |k|, then smaller k.
        std::stable_sort(out.omega.begin(), out.omega.end(), [&](int a, int b) {
            const double ga = out.gammas[a + n / 2];
            const double gb = out.gammas[b + n / 2];
            if (ga != gb) return ga < gb;
            if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
            return a < b;
        });
        out.omega.resize(static_cast<std::size_t>(model.L));
        std::sort(out.omega.begin(), out.omega.end());
        out.capped = true;
    }
    return out;
}

} // namespace ssp
