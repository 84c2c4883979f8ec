#include "ssp/pruning.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "ssp/errors.hpp"
#include "ssp/hankel_subspace.hpp"

namespace ssp {

namespace {

void check_columns(std::span<const int> omega, const PartialFourier& grid) {
    if (omega.empty()) throw DomainError("empty index set");
    if (static_cast<int>(omega.size()) > grid.m) {
        throw OverCompleteError("index set of size " + std::to_string(omega.size()) + " exceeds m=" +
                                std::to_string(grid.m));
    }
}

// Orthonormal basis of Ran A_S.
CMatrix range_of(const PartialFourier& grid, std::span<const int> indices) {
    const CMatrix A = atoms(grid, indices);
    Eigen::HouseholderQR<CMatrix> qr(A);
    return qr.householderQ() * CMatrix::Identity(grid.m, A.cols());
}

CVector project(const CMatrix& Q, const CVector& y) { return Q * (Q.adjoint() * y); }

// P_omega y minus P_{omega without position `skip`} y.
double gap_at(const CVector& y, const CVector& full_projection, std::span<const int> omega, std::size_t skip,
              const PartialFourier& grid) {
    std::vector<int> rest;
    rest.reserve(omega.size() - 1);
    for (std::size_t i = 0; i < omega.size(); ++i)
        if (i != skip) rest.push_back(omega[i]);
    if (rest.empty()) return full_projection.norm();
    return (full_projection - project(range_of(grid, rest), y)).norm();
}

// With A = QR and x the least-squares coefficients, P_omega y - P_{omega \ k} y
// = x_k w_k where w_k is a_k minus its projection on the other columns, and
// |w_k| = 1 / |row k of R^{-1}|.
Eigen::VectorXd closed_form_gaps(const CVector& y, std::span<const int> omega, const PartialFourier& grid,
                                 Execution execution) {
    const CMatrix A = atoms(grid, omega);
    const Eigen::HouseholderQR<CMatrix> qr(A);
    const auto count = static_cast<int>(omega.size());
    const CMatrix R = qr.matrixQR().topRows(count).triangularView<Eigen::Upper>();
    const CVector qty = (qr.householderQ().adjoint() * y).head(count);
    const CVector x = R.triangularView<Eigen::Upper>().solve(qty);
    const CMatrix R_inv = R.triangularView<Eigen::Upper>().solve(CMatrix::Identity(count, count));
    Eigen::VectorXd deltas(count);
    const auto one = [&](int i) { deltas[i] = std::abs(x[i]) / R_inv.row(i).norm(); };
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < count; ++i) one(i);
    } else {
        for (int i = 0; i < count; ++i) one(i);
    }
    return deltas;
}

} // namespace

CVector least_squares(const CVector& y, std::span<const int> omega, const PartialFourier& grid) {
    check_columns(omega, grid);
    if (y.size() != grid.m) throw DomainError("measurement length differs from m");
    const CMatrix A = atoms(grid, omega);
    return A.colPivHouseholderQr().solve(y);
}

double projection_gap(const CVector& y, std::span<const int> omega, int k, const PartialFourier& grid) {
    check_columns(omega, grid);
    const auto it = std::find(omega.begin(), omega.end(), k);
    if (it == omega.end()) throw DomainError("index " + std::to_string(k) + " is not in the active set");
    const CVector full = project(range_of(grid, omega), y);
    return gap_at(y, full, omega, static_cast<std::size_t>(it - omega.begin()), grid);
}

Eigen::VectorXd projection_gaps(const CVector& y, std::span<const int> omega, const PartialFourier& grid,
                                Execution execution, GapMethod method) {
    check_columns(omega, grid);
    if (method == GapMethod::closed_form) return closed_form_gaps(y, omega, grid, execution);
    const CVector full = project(range_of(grid, omega), y);
    const auto count = static_cast<int>(omega.size());
    Eigen::VectorXd deltas(count);
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i) deltas[i] = gap_at(y, full, omega, static_cast<std::size_t>(i), grid);
    } else {
        for (int i = 0; i < count; ++i) deltas[i] = gap_at(y, full, omega, static_cast<std::size_t>(i), grid);
    }
    return deltas;
}

RecoveryResult finalize_recovery(const Measurement& y, std::vector<int> support, std::string method) {
    const PartialFourier grid = y.model.fourier();
    std::sort(support.begin(), support.end());
    const CVector local = least_squares(y.values, support, grid);

    RecoveryResult out;
    out.method = std::move(method);
    out.n = grid.n;
    out.coefficients = CVector::Zero(grid.n);
    for (std::size_t i = 0; i < support.size(); ++i) out.coefficients[support[i] + grid.n / 2] = local[static_cast<Eigen::Index>(i)];
    out.residual = (y.values - atoms(grid, support) * local).norm();
    out.support = std::move(support);
    return out;
}

RecoveryResult prune(const Measurement& y, std::vector<int> omega, double epsilon2, Execution execution,
                     GapMethod method) {
    if (!(epsilon2 >= 0.0)) throw DomainError("epsilon2 must be >= 0");
    std::sort(omega.begin(), omega.end());
    omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
    if (omega.empty()) throw EmptyEstimateError("pruning needs a nonempty superset");
    const PartialFourier grid = y.model.fourier();
    check_columns(omega, grid);

    std::vector<PruneStep> trace;
    bool possibly_zero = false;
    while (true) {
        const Eigen::VectorXd deltas = projection_gaps(y.values, omega, grid, execution, method);
        if (omega.size() == 1) {
            possibly_zero = deltas[0] < epsilon2;
            break;
        }
        // argmin delta; exact ties remove the larger |k|, then the larger k.
        std::size_t best = 0;
        for (std::size_t i = 1; i < omega.size(); ++i) {
            const double d = deltas[static_cast<Eigen::Index>(i)];
            const double b = deltas[static_cast<Eigen::Index>(best)];
            const int ki = omega[i];
            const int kb = omega[best];
            if (d < b || (d == b && (std::abs(ki) > std::abs(kb) || (std::abs(ki) == std::abs(kb) && ki > kb)))) best = i;
        }
        const double delta = deltas[static_cast<Eigen::Index>(best)];
        if (!(delta < epsilon2)) break;
        trace.push_back({omega[best], delta});
        omega.erase(omega.begin() + static_cast<std::ptrdiff_t>(best));
    }

    RecoveryResult out = finalize_recovery(y, std::move(omega), "superset");
    out.iterations = static_cast<int>(trace.size());
    out.prune_trace = std::move(trace);
    out.epsilon2 = epsilon2;
    out.possibly_zero = possibly_zero;
    if (possibly_zero) out.warnings.emplace_back("single surviving atom is below epsilon2; signal may be zero");
    return out;
}

RecoveryResult noiseless_recover(const Measurement& y, double tolerance, Execution execution) {
    SelectionConfig config;
    config.sigma = 0.0;
    config.execution = execution;
    const HankelSpectrum spectrum = analyze_hankel(y, config);
    const PartialFourier grid = y.model.fourier();
    const Eigen::VectorXd gammas = atom_angles(grid, spectrum.basis, execution);

    std::vector<int> support;
    for (int idx = 0; idx < grid.n; ++idx)
        if (gammas[idx] < tolerance) support.push_back(idx - grid.n / 2);
    if (support.empty()) throw EmptyEstimateError("no atom lies in the Hankel range");
    if (static_cast<int>(support.size()) > grid.m) {
        throw OverCompleteError("selected " + std::to_string(support.size()) +
                                " atoms, more than m; sparsity hypothesis violated");
    }
    RecoveryResult out = finalize_recovery(y, std::move(support), "noiseless");
    out.gammas = gammas;
    out.rank = spectrum.rank;
    out.epsilon1 = tolerance;
    return out;
}

} // namespace ssp
