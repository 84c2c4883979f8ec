#include "ssp/matrix_pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ssp/errors.hpp"
#include "ssp/hankel_subspace.hpp"

namespace ssp {

namespace {

double retention_threshold(double sigma, int L, double c) {
    return c * sigma * std::sqrt(L * std::log(static_cast<double>(L)));
}

// Singular values at or below this are numerically zero for exact data.
double roundoff_threshold(const Eigen::VectorXd& sv) { return sv.size() == 0 ? 0.0 : sv[0] * exact_rank_tolerance; }

} // namespace

void PencilConfig::validate() const {
    if (!(denoise_constant > 0.0)) throw DomainError("pencil denoising constant must be > 0");
    if (!(rho_lo > 0.0 && rho_lo <= 1.0 && rho_hi >= 1.0)) throw DomainError("modulus band must satisfy 0 < lo <= 1 <= hi");
}

PencilPair pencil_pair(const CMatrix& hankel) {
    const auto L = hankel.rows();
    if (L < 2) throw DomainError("pencil needs at least two Hankel rows");
    return {hankel.bottomRows(L - 1), hankel.topRows(L - 1)};
}

CMatrix denoise(const CMatrix& M, double sigma, int L, double c) {
    if (!(c > 0.0)) throw DomainError("denoising constant must be > 0");
    if (sigma == 0.0) return M;
    Eigen::BDCSVD<CMatrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cut = retention_threshold(sigma, L, c);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index keep = 0;
    while (keep < sv.size() && sv[keep] > cut) ++keep;
    if (keep == 0) return CMatrix::Zero(M.rows(), M.cols());
    return svd.matrixU().leftCols(keep) * sv.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
}

int nearest_grid_index(Complex z, int n) {
    const double turns = std::arg(z) / (2.0 * std::numbers::pi);
    long long k = std::llround(turns * n);
    const long long period = n;
    k = ((k + period / 2) % period + period) % period - period / 2;
    return static_cast<int>(k);
}

PencilEstimate pencil_estimate(const Measurement& y, double sigma, const PencilConfig& config) {
    config.validate();
    const MeasurementModel& model = y.model;
    const CMatrix hankel = build_hankel(y.values, model.L);
    PencilPair pair = pencil_pair(hankel);
    const CMatrix advanced = denoise(pair.advanced, sigma, model.L, config.denoise_constant);
    const CMatrix lagged = denoise(pair.lagged, sigma, model.L, config.denoise_constant);

    // Pseudo-inverse of the lagged matrix, truncated at its retained rank.
    Eigen::BDCSVD<CMatrix> svd(lagged, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = sigma > 0.0 ? retention_threshold(sigma, model.L, config.denoise_constant)
                                   : roundoff_threshold(sv);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cut) ++rank;

    PencilEstimate out;
    out.rank = static_cast<int>(rank);
    if (rank == 0) return out;
    const auto U = svd.matrixU().leftCols(rank);
    const auto V = svd.matrixV().leftCols(rank);
    const Eigen::VectorXd inv_sv = sv.head(rank).cwiseInverse();
    CMatrix operator_matrix;
    if (config.compressed) {
        operator_matrix = inv_sv.asDiagonal() * (U.adjoint() * advanced * V);
    } else {
        operator_matrix = V * inv_sv.asDiagonal() * U.adjoint() * advanced;
    }
    Eigen::ComplexEigenSolver<CMatrix> eig(operator_matrix, false);
    const CVector values = eig.eigenvalues();
    out.eigenvalues.assign(values.data(), values.data() + values.size());

    std::vector<Complex> accepted;
    for (const Complex& z : out.eigenvalues) {
        const double rho = std::abs(z);
        if (rho >= config.rho_lo && rho <= config.rho_hi) accepted.push_back(z);
    }
    std::stable_sort(accepted.begin(), accepted.end(), [](Complex a, Complex b) {
        return std::abs(std::abs(a) - 1.0) < std::abs(std::abs(b) - 1.0);
    });
    for (const Complex& z : accepted) {
        if (static_cast<int>(out.indices.size()) == out.rank) break;
        const int k = nearest_grid_index(z, model.n);
        if (std::find(out.indices.begin(), out.indices.end(), k) == out.indices.end()) out.indices.push_back(k);
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

std::vector<int> pencil_frequencies(const Measurement& y, double sigma, const PencilConfig& config) {
    PencilEstimate estimate = pencil_estimate(y, sigma, config);
    if (estimate.indices.empty()) throw EmptyEstimateError("matrix pencil found no eigenvalue in the modulus band");
    return std::move(estimate.indices);
}

RecoveryResult pencil_recover(const Measurement& y, double sigma, const PencilConfig& config) {
    PencilEstimate estimate = pencil_estimate(y, sigma, config);
    if (estimate.indices.empty()) throw EmptyEstimateError("matrix pencil found no eigenvalue in the modulus band");
    RecoveryResult out = finalize_recovery(y, std::move(estimate.indices), "pencil");
    out.rank = estimate.rank;
    return out;
}

} // namespace ssp
