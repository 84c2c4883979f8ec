#pragma once

#include <vector>

#include "ssp/fourier_model.hpp"
#include "ssp/pruning.hpp"

namespace ssp {

struct PencilConfig {
    double denoise_constant = 1.5; // keep singular values above c * sigma * sqrt(L log L)
    double rho_lo = 0.7;           // accepted eigenvalue modulus band
    double rho_hi = 1.3;
    // Solve the r x r compression S^-1 U^* Ybar V instead of the full
    // (m-L+1)^2 matrix pinv(Yunder) Ybar; the nonzero eigenvalues coincide.
    bool compressed = true;

    void validate() const;
};

struct PencilPair {
    CMatrix advanced; // Y without its first row
    CMatrix lagged;   // Y without its last row
};

PencilPair pencil_pair(const CMatrix& hankel);

// Zero every singular value <= c * sigma * sqrt(L log L). sigma == 0 returns M.
CMatrix denoise(const CMatrix& M, double sigma, int L, double c);

struct PencilEstimate {
    std::vector<int> indices;           // sorted grid indices
    std::vector<Complex> eigenvalues;   // eigenvalues of pinv(lagged) * advanced (nonzero ones only when compressed)
    int rank = 0;
};

PencilEstimate pencil_estimate(const Measurement& y, double sigma, const PencilConfig& config);

// Grid indices from the pencil eigenvalues; throws EmptyEstimateError if none survive.
std::vector<int> pencil_frequencies(const Measurement& y, double sigma, const PencilConfig& config);

RecoveryResult pencil_recover(const Measurement& y, double sigma, const PencilConfig& config);

// round(n arg(z) / 2 pi) wrapped into [-n/2, n/2).
int nearest_grid_index(Complex z, int n);

} // namespace ssp
