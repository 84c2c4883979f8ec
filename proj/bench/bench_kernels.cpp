// Serial vs OpenMP timings for the parallel kernels. Each pair of runs is
// also checked for bit-identical output; any mismatch gives exit status 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"

#include "ssp/experiments.hpp"
#include "ssp/hankel_subspace.hpp"
#include "ssp/pruning.hpp"

using namespace ssp;

namespace {

double median_ms(int repeats, const std::function<void()>& body) {
    std::vector<double> times;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        body();
        times.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

bool all_identical = true;

void report(const std::string& name, double serial, double parallel, bool identical) {
    all_identical = all_identical && identical;
    std::cout << std::left << std::setw(42) << name << std::right << std::fixed << std::setprecision(3) << std::setw(11)
              << serial << std::setw(11) << parallel << std::setw(9) << std::setprecision(2) << serial / parallel << "x"
              << (identical ? "   identical" : "   MISMATCH") << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs parallel kernel benchmark"};
    int repeats = 5;
    int n = 1000;
    int m = 200;
    int trials = 20;
    app.add_option("--repeats", repeats, "timed repetitions per kernel (median reported)")->check(CLI::PositiveNumber);
    app.add_option("--n", n, "ambient dimension");
    app.add_option("--m", m, "number of samples");
    app.add_option("--trials", trials, "trials per phase-diagram cell")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::cout << "threads: " << omp_get_max_threads() << "  n=" << n << " m=" << m << '\n';
    std::cout << std::left << std::setw(42) << "kernel" << std::right << std::setw(11) << "serial ms" << std::setw(11)
              << "omp ms" << std::setw(10) << "speedup" << '\n';

    const MeasurementModel model = MeasurementModel::with_default_rows(n, m);
    const PartialFourier grid = model.fourier();
    SparseSignal x;
    try {
        x = make_signal(SignalFamily::well_separated(), n, m, 1);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << " (the well-separated signal needs m >= ~120 at n = 1000)\n";
        return 2;
    }
    const Measurement y = measure(x, model, NoiseSpec(1e-3, 2));
    SelectionConfig config;
    config.sigma = 1e-3;
    const HankelSpectrum spectrum = analyze_hankel(y, config);

    {
        Eigen::VectorXd a;
        Eigen::VectorXd b;
        const double s = median_ms(repeats, [&] { a = atom_angles(grid, spectrum.basis, Execution::serial); });
        const double p = median_ms(repeats, [&] { b = atom_angles(grid, spectrum.basis, Execution::parallel); });
        report("atom angles (all n candidates)", s, p, (a.array() == b.array()).all());
    }

    // superset: support plus off-support atoms, as pruning sees it
    std::vector<int> omega = x.support();
    for (int k = -n / 2 + 3; static_cast<int>(omega.size()) < std::min(model.L, 2 * static_cast<int>(x.sparsity())); k += 17) {
        if (std::find(omega.begin(), omega.end(), k) == omega.end()) omega.push_back(k);
    }
    std::sort(omega.begin(), omega.end());
    for (GapMethod method : {GapMethod::refactor, GapMethod::closed_form}) {
        Eigen::VectorXd a;
        Eigen::VectorXd b;
        const double s = median_ms(repeats, [&] { a = projection_gaps(y.values, omega, grid, Execution::serial, method); });
        const double p = median_ms(repeats, [&] { b = projection_gaps(y.values, omega, grid, Execution::parallel, method); });
        const std::string name = std::string("projection gaps, ") + (method == GapMethod::refactor ? "refactor" : "closed form") +
                                 " |omega|=" + std::to_string(omega.size());
        report(name, s, p, (a.array() == b.array()).all());
    }

    {
        RecoveryResult a;
        RecoveryResult b;
        const double s = median_ms(repeats, [&] { a = prune(y, omega, 1e-2, Execution::serial); });
        const double p = median_ms(repeats, [&] { b = prune(y, omega, 1e-2, Execution::parallel); });
        report("prune loop", s, p, a.support == b.support && (a.coefficients.array() == b.coefficients.array()).all());
    }

    const SignalFamily family = SignalFamily::k_sparse_adjacent(3);
    TrialConfig trial_config;
    trial_config.c = family.default_c();
    const std::vector<int> ms{80, 160};
    const std::vector<double> sigmas{std::pow(10.0, -3.5), 1e-3};
    for (Method method : {Method::superset, Method::pencil}) {
        PhaseDiagram a;
        PhaseDiagram b;
        const double s = median_ms(1, [&] {
            a = phase_diagram(family, n, ms, sigmas, trials, method, 3, trial_config, Execution::serial);
        });
        const double p = median_ms(1, [&] {
            b = phase_diagram(family, n, ms, sigmas, trials, method, 3, trial_config, Execution::parallel);
        });
        report("phase diagram 2x2, " + std::string(method_name(method)), s, p, a.successes == b.successes);
    }
    return all_identical ? 0 : 1;
}
