#include "ssp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ssp/errors.hpp"
#include "ssp/rng.hpp"
#include "ssp/superset.hpp"

namespace ssp {

SignalFamily SignalFamily::well_separated(int count) {
    SignalFamily f;
    f.kind = FamilyKind::well_separated;
    f.spikes = count;
    return f;
}

SignalFamily SignalFamily::five_cluster() {
    SignalFamily f;
    f.kind = FamilyKind::five_cluster;
    return f;
}

SignalFamily SignalFamily::k_sparse_adjacent(int k, int base) {
    SignalFamily f;
    f.kind = FamilyKind::k_sparse_adjacent;
    f.spikes = k;
    f.base = base;
    return f;
}

SignalFamily SignalFamily::parse(std::string_view name) {
    if (name == "well-separated" || name == "well_separated") return well_separated();
    if (name == "five-cluster" || name == "five_cluster") return five_cluster();
    if (name.size() == 2 && name[0] == 'k' && name[1] >= '2' && name[1] <= '4') return k_sparse_adjacent(name[1] - '0');
    throw DomainError("unknown signal family '" + std::string(name) + "' (expected well-separated, five-cluster, k2, k3, k4)");
}

std::string SignalFamily::name() const {
    switch (kind) {
    case FamilyKind::well_separated: return "well-separated";
    case FamilyKind::five_cluster: return "five-cluster";
    case FamilyKind::k_sparse_adjacent: return "k" + std::to_string(spikes);
    }
    return "unknown";
}

double SignalFamily::default_c() const {
    switch (kind) {
    case FamilyKind::well_separated: return 1.0;
    case FamilyKind::five_cluster: return 5.0;
    case FamilyKind::k_sparse_adjacent: return spikes <= 2 ? 1.0 : 5.0;
    }
    return 1.0;
}

namespace {

// `count` spikes on the circle of n grid points with every cyclic gap >= gap.
std::vector<int> separated_support(int n, int count, int gap, Rng& rng) {
    const int slack = n - count * gap;
    std::vector<int> offsets(static_cast<std::size_t>(count));
    for (auto& o : offsets) o = static_cast<int>(rng.uniform_int(0, slack));
    std::sort(offsets.begin(), offsets.end());
    const int rotation = static_cast<int>(rng.uniform_int(0, n - 1));
    std::vector<int> support;
    support.reserve(offsets.size());
    for (int i = 0; i < count; ++i) {
        const int position = (offsets[static_cast<std::size_t>(i)] + i * gap + rotation) % n;
        support.push_back(position - n / 2);
    }
    std::sort(support.begin(), support.end());
    return support;
}

} // namespace

SparseSignal make_signal(const SignalFamily& family, int n, int m, std::uint64_t seed) {
    const PartialFourier grid(n, m);
    std::vector<int> support;
    std::vector<Complex> amplitudes;
    switch (family.kind) {
    case FamilyKind::well_separated: {
        if (family.spikes < 1) throw DomainError("well-separated family needs at least one spike");
        const int gap = static_cast<int>(std::ceil(family.separation_multiple * n / m - 1e-9));
        if (static_cast<long long>(gap) * family.spikes > n) {
            throw DomainError("cannot place " + std::to_string(family.spikes) + " spikes " + std::to_string(gap) +
                              " apart in n=" + std::to_string(n));
        }
        Rng rng(seed);
        support = separated_support(n, family.spikes, gap, rng);
        const double magnitude = 1.0 / std::sqrt(static_cast<double>(family.spikes));
        for (std::size_t i = 0; i < support.size(); ++i) amplitudes.emplace_back(rng.coin() ? magnitude : -magnitude, 0.0);
        break;
    }
    case FamilyKind::five_cluster: {
        std::size_t total = 0;
        for (const auto& c : family.clusters) total += c.size();
        if (family.clusters.empty() || total == 0) throw DomainError("cluster family needs at least one spike");
        const auto clusters = static_cast<int>(family.clusters.size());
        const double magnitude = 1.0 / std::sqrt(static_cast<double>(total));
        const int spacing = n / clusters;
        for (int c = 0; c < clusters; ++c) {
            const auto& signs = family.clusters[static_cast<std::size_t>(c)];
            if (static_cast<int>(signs.size()) >= spacing) throw DomainError("clusters overlap at this n");
            const int start = -n / 2 + spacing / 2 + c * spacing;
            for (std::size_t s = 0; s < signs.size(); ++s) {
                support.push_back(start + static_cast<int>(s));
                amplitudes.emplace_back(signs[s] >= 0 ? magnitude : -magnitude, 0.0);
            }
        }
        break;
    }
    case FamilyKind::k_sparse_adjacent: {
        if (family.spikes < 2 || family.spikes > 4) throw DomainError("adjacent family supports k in {2, 3, 4}");
        if (!grid.contains(family.base) || !grid.contains(family.base + family.spikes - 1))
            throw DomainError("adjacent cluster does not fit in [-n/2, n/2)");
        const double magnitude = 1.0 / std::sqrt(static_cast<double>(family.spikes));
        for (int i = 0; i < family.spikes; ++i) {
            support.push_back(family.base + i);
            amplitudes.emplace_back(i % 2 == 0 ? magnitude : -magnitude, 0.0);
        }
        break;
    }
    }
    return {n, std::move(support), std::move(amplitudes)};
}

std::string_view method_name(Method method) { return method == Method::superset ? "superset" : "pencil"; }

Method parse_method(std::string_view name) {
    if (name == "superset") return Method::superset;
    if (name == "pencil") return Method::pencil;
    throw DomainError("unknown method '" + std::string(name) + "'");
}

double relative_error(const RecoveryResult& result, const SparseSignal& truth) {
    if (result.n != truth.n()) throw DomainError("result and ground truth differ in n");
    const double reference = truth.norm();
    const double diff = (result.coefficients - truth.dense()).norm();
    return reference > 0.0 ? diff / reference : diff;
}

RecoveryResult recover(const Measurement& y, double sigma, Method method, const TrialConfig& config,
                       Execution execution) {
    if (method == Method::pencil) return pencil_recover(y, sigma, config.pencil);
    SupersetConfig sc;
    sc.selection.sigma = sigma;
    sc.selection.c = config.c;
    sc.selection.scaling = config.scaling;
    sc.selection.c_rank = config.c_rank;
    sc.selection.basis = config.basis;
    sc.selection.execution = execution;
    sc.epsilon2 = config.epsilon2_factor * sigma;
    sc.gap_method = config.gap_method;
    return superset_recover(y, sc);
}

TrialOutcome run_trial(const SparseSignal& signal, const MeasurementModel& model, double sigma, Method method,
                       std::uint64_t seed, const TrialConfig& config) {
    TrialOutcome out;
    try {
        const Measurement y = measure(signal, model, NoiseSpec(sigma, seed, config.noise));
        RecoveryResult result = recover(y, sigma, method, config, Execution::serial);
        out.relative_error = relative_error(result, signal);
        out.success = out.relative_error < config.success_tolerance;
        out.result = std::move(result);
    } catch (const EmptyEstimateError&) {
        out.failure = "empty-estimate";
    } catch (const OverCompleteError&) {
        out.failure = "over-complete";
    } catch (const DegenerateGapError&) {
        out.failure = "degenerate-gap";
    } catch (const std::exception&) {
        out.failure = "solver-error";
    }
    if (!out.failure.empty()) out.relative_error = std::numeric_limits<double>::infinity();
    return out;
}

double PhaseDiagram::aggregate() const {
    double sum = 0.0;
    std::size_t cells = 0;
    for (const auto& row : success) {
        for (double s : row) sum += s;
        cells += row.size();
    }
    return cells == 0 ? 0.0 : sum / static_cast<double>(cells);
}

std::uint64_t trial_seed(std::uint64_t base_seed, int cell, int trial) {
    return derive_seed(base_seed, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(trial));
}

PhaseDiagram phase_diagram(const SignalFamily& family, int n, const std::vector<int>& m_grid,
                           const std::vector<double>& sigmas, int trials, Method method, std::uint64_t base_seed,
                           const TrialConfig& config, Execution execution, const PhaseDiagramHooks& hooks) {
    if (m_grid.empty() || sigmas.empty()) throw DomainError("phase diagram grids must be nonempty");
    if (trials < 1) throw DomainError("phase diagram needs at least one trial per cell");
    for (double s : sigmas)
        if (!(s >= 0.0)) throw DomainError("noise levels must be >= 0");

    PhaseDiagram out;
    out.family = family.name();
    out.method = std::string(method_name(method));
    out.n = n;
    out.trials = trials;
    out.base_seed = base_seed;
    out.m_grid = m_grid;
    out.sigmas = sigmas;
    for (double s : sigmas) out.log10_sigmas.push_back(std::log10(s));
    for (int m : m_grid) {
        const MeasurementModel model = MeasurementModel::with_default_rows(n, m);
        out.coherence_axis.push_back(std::log10(1.0 - coherence(model)));
    }
    out.successes.assign(m_grid.size(), std::vector<int>(sigmas.size(), 0));
    out.success.assign(m_grid.size(), std::vector<double>(sigmas.size(), 0.0));

    std::vector<char> flags(static_cast<std::size_t>(trials));
    for (std::size_t mi = 0; mi < m_grid.size(); ++mi) {
        const MeasurementModel model = MeasurementModel::with_default_rows(n, m_grid[mi]);
        for (std::size_t si = 0; si < sigmas.size(); ++si) {
            const int cell = static_cast<int>(mi * sigmas.size() + si);
            std::optional<int> cached;
            if (hooks.lookup) cached = hooks.lookup(cell);
            int count = 0;
            if (cached) {
                count = *cached;
            } else {
                const auto one = [&](int t) {
                    const std::uint64_t seed = trial_seed(base_seed, cell, t);
                    const SparseSignal signal = make_signal(family, n, model.m, derive_seed(seed, 1));
                    flags[static_cast<std::size_t>(t)] =
                        run_trial(signal, model, sigmas[si], method, derive_seed(seed, 2), config).success ? 1 : 0;
                };
                if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
                    for (int t = 0; t < trials; ++t) one(t);
                } else {
                    for (int t = 0; t < trials; ++t) one(t);
                }
                count = std::accumulate(flags.begin(), flags.end(), 0);
                if (hooks.on_cell) hooks.on_cell(cell, count);
            }
            out.successes[mi][si] = count;
            out.success[mi][si] = static_cast<double>(count) / trials;
        }
    }
    return out;
}

PencilTuning tune_pencil_constant(const SignalFamily& family, int n, const std::vector<int>& m_grid,
                                  const std::vector<double>& sigmas, int trials, std::uint64_t base_seed,
                                  const TrialConfig& config, std::vector<double> candidates, Execution execution) {
    if (candidates.empty()) throw DomainError("no candidate constants to sweep");
    PencilTuning out;
    out.constants = std::move(candidates);
    double best = -1.0;
    for (double c : out.constants) {
        TrialConfig trial = config;
        trial.pencil.denoise_constant = c;
        const double score =
            phase_diagram(family, n, m_grid, sigmas, trials, Method::pencil, base_seed, trial, execution).aggregate();
        out.aggregates.push_back(score);
        if (score > best) {
            best = score;
            out.best_constant = c;
        }
    }
    return out;
}

} // namespace ssp
