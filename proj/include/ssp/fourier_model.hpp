#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ssp {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// The partial Fourier matrix A with A(j, k) = exp(2 pi i j k / n),
// 0 <= j < m, -n/2 <= k < n/2.
struct PartialFourier {
    int n = 0;
    int m = 0;

    PartialFourier() = default;
    PartialFourier(int n, int m); // throws DomainError unless n even, 1 <= m <= n

    int min_index() const { return -n / 2; }
    int max_index() const { return n / 2 - 1; }
    bool contains(int k) const { return k >= min_index() && k <= max_index(); }

    friend bool operator==(const PartialFourier&, const PartialFourier&) = default;
};

// Measurement operator plus the Hankel row count L, 1 < L < m <= n.
struct MeasurementModel {
    int n = 0;
    int m = 0;
    int L = 0;

    MeasurementModel() = default;
    MeasurementModel(int n, int m, int L);

    // L = floor(m / 3), the rule used throughout the experiments.
    static MeasurementModel with_default_rows(int n, int m);

    PartialFourier fourier() const { return {n, m}; }

    friend bool operator==(const MeasurementModel&, const MeasurementModel&) = default;
};

// Ground-truth sparse vector: sorted support in [-n/2, n/2), nonzero amplitudes.
class SparseSignal {
public:
    SparseSignal() = default;
    SparseSignal(int n, std::vector<int> support, std::vector<Complex> amplitudes);

    int n() const { return n_; }
    const std::vector<int>& support() const { return support_; }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }
    std::size_t sparsity() const { return support_.size(); }

    // Dense length-n vector, entry k + n/2 holds x_k.
    CVector dense() const;
    double norm() const;

    friend bool operator==(const SparseSignal&, const SparseSignal&) = default;

private:
    int n_ = 0;
    std::vector<int> support_;
    std::vector<Complex> amplitudes_;
};

enum class NoiseKind {
    circular_complex, // re, im each N(0, sigma^2 / 2)
    real,             // real part N(0, sigma^2), imaginary part zero
};

struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
    NoiseKind kind = NoiseKind::circular_complex;

    NoiseSpec() = default;
    NoiseSpec(double sigma, std::uint64_t seed, NoiseKind kind = NoiseKind::circular_complex);
};

struct Measurement {
    CVector values;
    MeasurementModel model;

    int size() const { return static_cast<int>(values.size()); }
};

// Column a_k of the partial Fourier matrix (length m, unnormalized).
CVector atom(const PartialFourier& grid, int k);
// First `length` entries of a_k; used for the Hankel-row restrictions a_k^L.
CVector atom_prefix(const PartialFourier& grid, int k, int length);

// Columns a_k for k in `indices`, in the given order.
CMatrix atoms(const PartialFourier& grid, std::span<const int> indices);

// Noise vector of length m drawn per `noise`.
CVector draw_noise(int m, const NoiseSpec& noise);

Measurement measure(const SparseSignal& signal, const MeasurementModel& model, const NoiseSpec& noise);

// max_{i != j} |<a_i, a_j>| / m. Uses the Dirichlet-kernel closed form over lags.
double coherence(const PartialFourier& grid);
inline double coherence(const MeasurementModel& model) { return coherence(model.fourier()); }

} // namespace ssp
