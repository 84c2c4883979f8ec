#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssp/execution.hpp"
#include "ssp/fourier_model.hpp"
#include "ssp/hankel_subspace.hpp"
#include "ssp/matrix_pencil.hpp"
#include "ssp/pruning.hpp"

namespace ssp {

enum class FamilyKind { well_separated, five_cluster, k_sparse_adjacent };

struct SignalFamily {
    FamilyKind kind = FamilyKind::k_sparse_adjacent;
    int spikes = 2;                   // well_separated: count; k_sparse_adjacent: k
    double separation_multiple = 4.0; // well_separated: min gap = ceil(multiple * n / m)
    int base = 100;                   // k_sparse_adjacent: first index
    // five_cluster: one sign pattern per cluster, neighbouring spikes within a cluster.
    std::vector<std::vector<int>> clusters{{1}, {-1}, {1, 1}, {1, -1}, {-1, 1}};

    static SignalFamily well_separated(int count = 29);
    static SignalFamily five_cluster();
    static SignalFamily k_sparse_adjacent(int k, int base = 100);

    // "well-separated", "five-cluster", "k2", "k3", "k4"
    static SignalFamily parse(std::string_view name);
    std::string name() const;

    // epsilon1 multiplier used for this family's experiments: 1 for
    // well-separated and 2-sparse signals, 5 for clustered ones.
    double default_c() const;
};

SparseSignal make_signal(const SignalFamily& family, int n, int m, std::uint64_t seed);

enum class Method { superset, pencil };
std::string_view method_name(Method method);
Method parse_method(std::string_view name);

struct TrialConfig {
    double c = 1.0;
    ThresholdScaling scaling = ThresholdScaling::bound_c;
    GapMethod gap_method = GapMethod::closed_form;
    double epsilon2_factor = 10.0; // epsilon2 = factor * sigma
    double c_rank = 1.0;
    BasisMethod basis = BasisMethod::svd;
    PencilConfig pencil;
    NoiseKind noise = NoiseKind::circular_complex;
    double success_tolerance = 1e-3;
};

struct TrialOutcome {
    bool success = false;
    double relative_error = 0.0;
    std::string failure; // reason tag when a solver threw; empty otherwise
    std::optional<RecoveryResult> result;
};

// |x_hat - x0| / |x0| for a recovery against ground truth.
double relative_error(const RecoveryResult& result, const SparseSignal& truth);

RecoveryResult recover(const Measurement& y, double sigma, Method method, const TrialConfig& config,
                       Execution execution = Execution::serial);

// One noisy realization; solver exceptions become failures, never escape.
TrialOutcome run_trial(const SparseSignal& signal, const MeasurementModel& model, double sigma, Method method,
                       std::uint64_t seed, const TrialConfig& config);

struct PhaseDiagram {
    std::string family;
    std::string method;
    int n = 0;
    int trials = 0;
    std::uint64_t base_seed = 0;
    std::vector<int> m_grid;
    std::vector<double> sigmas;         // linear noise levels
    std::vector<double> log10_sigmas;   // -inf for sigma == 0
    std::vector<double> coherence_axis; // log10(1 - mu(m)) per m
    std::vector<std::vector<int>> successes;   // [m index][sigma index]
    std::vector<std::vector<double>> success;  // successes / trials

    double aggregate() const;
};

// Optional checkpointing: `lookup` returns a previously finished cell's success
// count, `on_cell` is called after each computed cell.
struct PhaseDiagramHooks {
    std::function<std::optional<int>(int cell)> lookup;
    std::function<void(int cell, int successes)> on_cell;
};

// Seed of trial `trial` in grid cell `cell`; signal and noise streams derive from it.
std::uint64_t trial_seed(std::uint64_t base_seed, int cell, int trial);

PhaseDiagram phase_diagram(const SignalFamily& family, int n, const std::vector<int>& m_grid,
                           const std::vector<double>& sigmas, int trials, Method method, std::uint64_t base_seed,
                           const TrialConfig& config, Execution execution = Execution::parallel,
                           const PhaseDiagramHooks& hooks = {});

struct PencilTuning {
    double best_constant = 0.0;
    std::vector<double> constants;
    std::vector<double> aggregates;
};

// Sweep the pencil's denoising constant and keep the best aggregate success.
PencilTuning tune_pencil_constant(const SignalFamily& family, int n, const std::vector<int>& m_grid,
                                  const std::vector<double>& sigmas, int trials, std::uint64_t base_seed,
                                  const TrialConfig& config, std::vector<double> candidates = {0.5, 1.0, 1.5, 2.0, 3.0},
                                  Execution execution = Execution::parallel);

} // namespace ssp
