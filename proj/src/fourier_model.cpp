#include "ssp/fourier_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ssp/errors.hpp"
#include "ssp/rng.hpp"

namespace ssp {

namespace {

// exp(2 pi i r / n) for an integer phase index, reduced exactly mod n first.
Complex unit_root(std::int64_t phase, int n) {
    std::int64_t r = phase % n;
    if (r < 0) r += n;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    return std::polar(1.0, angle);
}

void check_index(const PartialFourier& grid, int k) {
    if (!grid.contains(k)) {
        throw DomainError("frequency index " + std::to_string(k) + " outside [" + std::to_string(grid.min_index()) +
                          ", " + std::to_string(grid.max_index()) + "]");
    }
}

} // namespace

PartialFourier::PartialFourier(int n_, int m_) : n(n_), m(m_) {
    if (n <= 0 || n % 2 != 0) throw DomainError("n must be a positive even integer, got " + std::to_string(n));
    if (m < 1 || m > n) throw DomainError("m must satisfy 1 <= m <= n, got m=" + std::to_string(m));
}

MeasurementModel::MeasurementModel(int n_, int m_, int L_) : n(n_), m(m_), L(L_) {
    PartialFourier check(n, m);
    (void)check;
    if (L <= 1 || L >= m) {
        throw DomainError("Hankel rows must satisfy 1 < L < m, got L=" + std::to_string(L) + " m=" + std::to_string(m));
    }
}

MeasurementModel MeasurementModel::with_default_rows(int n, int m) { return {n, m, m / 3}; }

SparseSignal::SparseSignal(int n, std::vector<int> support, std::vector<Complex> amplitudes)
    : n_(n), support_(std::move(support)), amplitudes_(std::move(amplitudes)) {
    if (n_ <= 0 || n_ % 2 != 0) throw DomainError("signal dimension must be positive and even");
    if (support_.size() != amplitudes_.size()) throw DomainError("support and amplitudes differ in length");
    for (std::size_t i = 0; i < support_.size(); ++i) {
        const int k = support_[i];
        if (k < -n_ / 2 || k >= n_ / 2) throw DomainError("support index " + std::to_string(k) + " out of range");
        if (i > 0 && support_[i - 1] >= k) throw DomainError("support must be strictly increasing");
        if (amplitudes_[i] == Complex(0.0, 0.0)) throw DomainError("zero amplitude at index " + std::to_string(k));
    }
}

CVector SparseSignal::dense() const {
    CVector x = CVector::Zero(n_);
    for (std::size_t i = 0; i < support_.size(); ++i) x[support_[i] + n_ / 2] = amplitudes_[i];
    return x;
}

double SparseSignal::norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return std::sqrt(sum);
}

NoiseSpec::NoiseSpec(double sigma_, std::uint64_t seed_, NoiseKind kind_) : sigma(sigma_), seed(seed_), kind(kind_) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("noise level must be finite and >= 0");
}

CVector atom_prefix(const PartialFourier& grid, int k, int length) {
    check_index(grid, k);
    if (length < 0 || length > grid.m) throw DomainError("atom prefix length out of range");
    CVector a(length);
    for (int j = 0; j < length; ++j) a[j] = unit_root(static_cast<std::int64_t>(j) * k, grid.n);
    return a;
}

CVector atom(const PartialFourier& grid, int k) { return atom_prefix(grid, k, grid.m); }

CMatrix atoms(const PartialFourier& grid, std::span<const int> indices) {
    CMatrix A(grid.m, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t c = 0; c < indices.size(); ++c) A.col(static_cast<Eigen::Index>(c)) = atom(grid, indices[c]);
    return A;
}

CVector draw_noise(int m, const NoiseSpec& noise) {
    CVector e = CVector::Zero(m);
    if (noise.sigma == 0.0) return e;
    Rng rng(noise.seed);
    if (noise.kind == NoiseKind::circular_complex) {
        const double scale = noise.sigma / std::numbers::sqrt2;
        for (int j = 0; j < m; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            e[j] = Complex(scale * re, scale * im);
        }
    } else {
        for (int j = 0; j < m; ++j) e[j] = Complex(noise.sigma * rng.normal(), 0.0);
    }
    return e;
}

Measurement measure(const SparseSignal& signal, const MeasurementModel& model, const NoiseSpec& noise) {
    if (signal.n() != model.n) {
        throw DomainError("signal dimension " + std::to_string(signal.n()) + " differs from model n=" +
                          std::to_string(model.n));
    }
    const PartialFourier grid = model.fourier();
    CVector y = draw_noise(model.m, noise);
    const auto& support = signal.support();
    const auto& amplitudes = signal.amplitudes();
    for (std::size_t i = 0; i < support.size(); ++i) y += amplitudes[i] * atom(grid, support[i]);
    return {std::move(y), model};
}

double coherence(const PartialFourier& grid) {
    if (grid.m == grid.n) return 0.0;
    // |<a_i, a_j>| depends only on the lag d = j - i:
    //   |sum_j exp(2 pi i j d / n)| / m = |sin(pi m d / n)| / (m |sin(pi d / n)|).
    double best = 0.0;
    const double n = grid.n;
    const double m = grid.m;
    for (int d = 1; d <= grid.n / 2; ++d) {
        const double num = std::abs(std::sin(std::numbers::pi * m * d / n));
        const double den = m * std::abs(std::sin(std::numbers::pi * d / n));
        best = std::max(best, num / den);
    }
    return std::min(best, 1.0);
}

} // namespace ssp
