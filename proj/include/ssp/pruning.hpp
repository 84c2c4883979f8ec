#pragma once

#include <span>
#include <string>
#include <vector>

#include "ssp/execution.hpp"
#include "ssp/fourier_model.hpp"

namespace ssp {

// How delta_k = |P_omega y - P_{omega \ k} y| is evaluated inside the removal loop.
enum class GapMethod {
    refactor,    // orthogonal factorization of A_{omega \ k} for every candidate k
    closed_form, // one QR of A_omega: delta_k = |x_k| / |row k of R^{-1}|
};

struct PruneStep {
    int index = 0;
    double delta = 0.0;
};

struct RecoveryResult {
    std::string method;
    int n = 0;
    std::vector<int> support;        // sorted
    CVector coefficients;            // length n, entry k + n/2; zero off support
    double residual = 0.0;           // |y - A_support x_support|
    Eigen::VectorXd gammas;          // selection-phase angles (empty for the pencil)
    std::vector<PruneStep> prune_trace;
    int iterations = 0;
    int rank = 0;
    double epsilon1 = 0.0;
    double epsilon2 = 0.0;
    bool possibly_zero = false;      // the last surviving atom was itself below epsilon2
    std::vector<std::string> warnings;

    Complex coefficient(int k) const { return coefficients[k + n / 2]; }
};

// argmin_x |y - A_omega x| by Householder QR. Coefficients follow `omega`'s order.
CVector least_squares(const CVector& y, std::span<const int> omega, const PartialFourier& grid);

// |P_omega y - P_{omega \ k} y|, P_S the orthogonal projector onto Ran A_S.
double projection_gap(const CVector& y, std::span<const int> omega, int k, const PartialFourier& grid);

// projection_gap for every k in omega (same order), sharing one factorization of A_omega.
Eigen::VectorXd projection_gaps(const CVector& y, std::span<const int> omega, const PartialFourier& grid,
                                Execution execution, GapMethod method = GapMethod::refactor);

// Iterative removal: drop argmin_k delta_k while it is below epsilon2, then solve.
RecoveryResult prune(const Measurement& y, std::vector<int> omega, double epsilon2,
                     Execution execution = Execution::parallel, GapMethod method = GapMethod::closed_form);

// One-shot recovery for exact data: keep {k : gamma_k < tolerance}, solve A_T x_T = y.
RecoveryResult noiseless_recover(const Measurement& y, double tolerance = 1e-8,
                                 Execution execution = Execution::parallel);

// Assemble a RecoveryResult from a support and its least-squares fit.
RecoveryResult finalize_recovery(const Measurement& y, std::vector<int> support, std::string method);

} // namespace ssp
