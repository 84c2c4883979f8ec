#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssp/execution.hpp"
#include "ssp/fourier_model.hpp"

namespace ssp {

// Hankel matrix of the observations together with its spectrum and the
// orthonormal basis of its retained (rank-r) range.
struct HankelSpectrum {
    CMatrix matrix;                 // L x (m - L + 1), entry (i, j) = y_{i+j}
    Eigen::VectorXd singular_values; // non-increasing
    CMatrix basis;                  // L x rank, orthonormal columns
    int rank = 0;
};

enum class BasisMethod {
    svd,        // dominant left singular vectors
    pivoted_qr, // column-pivoted Householder QR of Y, truncated at r
};

// How the multiplier c enters the epsilon1 threshold.
enum class ThresholdScaling {
    sqrt_c,   // c scales epsilon1^2: threshold = sqrt(c) * sqrt(bound)
    linear_c, // c scales epsilon1:   threshold = c * sqrt(bound)
    bound_c,  // threshold = c * bound, the squared quantity itself
};

struct SelectionConfig {
    double sigma = 0.0;              // noise level used by the thresholds
    double c = 1.0;                  // epsilon1 multiplier
    ThresholdScaling scaling = ThresholdScaling::bound_c;
    std::optional<double> epsilon1;  // explicit threshold, bypasses the formula
    double c_rank = 1.0;             // rank cut c_rank * sigma * sqrt(m log m)
    BasisMethod basis = BasisMethod::svd;
    double floor = 1e-8;             // smallest threshold ever applied
    Execution execution = Execution::parallel;
};

struct SupersetSelection {
    std::vector<int> omega;   // sorted
    Eigen::VectorXd gammas;   // gammas[k + n/2] for every candidate k
    double epsilon1 = 0.0;    // threshold actually applied
    int rank = 0;
    bool gap_fallback = false;
    bool capped = false;
    std::vector<std::string> warnings;

    double gamma(int k, int n) const { return gammas[k + n / 2]; }
};

// Relative singular-value cut for exact data (sigma = 0). Roundoff in y comes
// from summing unit-modulus terms, so it is absolute, not relative to s1.
inline constexpr double exact_rank_tolerance = 1e-10;

CMatrix build_hankel(const CVector& y, int L);

int estimate_rank(std::span<const double> singular_values, double sigma, int m, int L, double c_rank = 1.0);

CMatrix range_basis(const CMatrix& hankel, int rank, BasisMethod method = BasisMethod::svd);

// sin of the angle between `a` and the span of the orthonormal columns of `basis`.
double atom_angle(const CVector& a, const CMatrix& basis);

double epsilon1(double sigma, int rank, int m, double s1, double s2, double c,
                ThresholdScaling scaling = ThresholdScaling::sqrt_c);

// Hankel matrix, SVD, rank estimate and range basis in one pass.
HankelSpectrum analyze_hankel(const Measurement& y, const SelectionConfig& config);

// gamma_k = |a_k^L - Q Q^* a_k^L| / |a_k^L| for all k in [-n/2, n/2).
Eigen::VectorXd atom_angles(const PartialFourier& grid, const CMatrix& basis, Execution execution);

// The threshold select_superset applies, including the degenerate-gap fallback.
struct ThresholdChoice {
    double value = 0.0;
    bool fallback = false;
    std::optional<std::string> warning;
};
ThresholdChoice choose_epsilon1(const HankelSpectrum& spectrum, int m, const SelectionConfig& config);

SupersetSelection select_superset(const Measurement& y, const SelectionConfig& config);

} // namespace ssp
