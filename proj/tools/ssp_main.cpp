// Command-line front end: synth, recover, phase-diagram, coherence.
//
// Exit codes:
//   0  success
//   1  unexpected internal failure
//   2  usage error (bad flag or parameter)
//   3  unreadable or malformed input file
//   4  empty estimate (no atom survived)
//   5  over-complete support (|support| > m)
//   6  a file could not be opened

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "ssp/errors.hpp"
#include "ssp/experiments.hpp"
#include "ssp/io.hpp"
#include "ssp/pruning.hpp"
#include "ssp/rng.hpp"
#include "ssp/superset.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_runtime = 1,
    exit_usage = 2,
    exit_input = 3,
    exit_empty = 4,
    exit_overcomplete = 5,
    exit_io = 6,
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    const auto number = [&text](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw UsageError("");
            return v;
        } catch (const std::exception&) {
            throw UsageError("bad grid '" + text + "'");
        }
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream in(text);
        for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw UsageError("grid ranges are start:stop:step, got '" + text + "'");
        const double start = number(parts[0]);
        const double stop = number(parts[1]);
        const double step = number(parts[2]);
        if (!(step > 0.0) || stop < start) throw UsageError("grid range needs step > 0 and stop >= start");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    } else {
        std::stringstream in(text);
        for (std::string p; std::getline(in, p, ',');) out.push_back(number(p));
    }
    if (out.empty()) throw UsageError("empty grid '" + text + "'");
    return out;
}

ssp::ThresholdScaling parse_scaling(const std::string& name) {
    if (name == "bound") return ssp::ThresholdScaling::bound_c;
    if (name == "sqrt") return ssp::ThresholdScaling::sqrt_c;
    if (name == "linear") return ssp::ThresholdScaling::linear_c;
    throw UsageError("unknown threshold scaling '" + name + "'");
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string support_text(const std::vector<int>& support) {
    std::string out = "[";
    for (std::size_t i = 0; i < support.size(); ++i) out += (i ? "," : "") + std::to_string(support[i]);
    return out + "]";
}

// Path with the method name inserted before the extension: result.json -> result.pencil.json
fs::path tagged_path(const fs::path& path, const std::string& tag) {
    fs::path out = path;
    out.replace_filename(path.stem().string() + "." + tag + path.extension().string());
    return out;
}

struct SynthOptions {
    std::string family;
    int n = 1000;
    int m = 120;
    int L = 0;
    int spikes = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    bool real_noise = false;
    std::string signal_out = "signal.txt";
    std::string measurement_out = "measurement.csv";
};

int run_synth(const SynthOptions& o) {
    ssp::SignalFamily family = ssp::SignalFamily::parse(o.family);
    if (o.spikes > 0) family.spikes = o.spikes;
    const ssp::MeasurementModel model(o.n, o.m, o.L > 0 ? o.L : o.m / 3);
    const ssp::SparseSignal signal = ssp::make_signal(family, o.n, o.m, ssp::derive_seed(o.seed, 1));
    const ssp::NoiseSpec noise(o.sigma, ssp::derive_seed(o.seed, 2),
                               o.real_noise ? ssp::NoiseKind::real : ssp::NoiseKind::circular_complex);
    const ssp::Measurement y = ssp::measure(signal, model, noise);

    std::ostringstream sig;
    ssp::io::write_signal(sig, signal);
    ssp::io::write_text_file(o.signal_out, sig.str());
    std::ostringstream meas;
    ssp::io::write_measurement(meas, y.values);
    ssp::io::write_text_file(o.measurement_out, meas.str());

    std::cout << "coherence " << std::fixed << std::setprecision(4) << ssp::coherence(model) << '\n';
    return exit_ok;
}

struct RecoverOptions {
    std::string measurement;
    int n = 0;
    int L = 0;
    double sigma = 0.0;
    double c = 1.0;
    std::optional<double> epsilon2;
    std::string scaling = "bound";
    double c_rank = 1.0;
    double pencil_c = 1.5;
    std::string method = "superset";
    std::string truth;
    std::string out = "result.json";
    std::string gammas_out;
    bool verbose = false;
};

int run_recover(const RecoverOptions& o) {
    const ssp::CVector values = ssp::io::load_measurement(o.measurement);
    const int m = static_cast<int>(values.size());
    const ssp::MeasurementModel model(o.n, m, o.L > 0 ? o.L : m / 3);
    const ssp::Measurement y{values, model};
    std::optional<ssp::SparseSignal> truth;
    if (!o.truth.empty()) {
        truth = ssp::io::load_signal(o.truth);
        if (truth->n() != o.n) throw ssp::DomainError("ground truth n differs from --n");
    }

    std::vector<std::string> methods;
    if (o.method == "both") {
        methods = {"superset", "pencil"};
    } else if (o.method == "superset" || o.method == "pencil" || o.method == "noiseless") {
        methods = {o.method};
    } else {
        throw UsageError("unknown method '" + o.method + "'");
    }

    int status = exit_ok;
    for (const auto& method : methods) {
        try {
            ssp::RecoveryResult result;
            if (method == "superset") {
                ssp::SupersetConfig config;
                config.selection.sigma = o.sigma;
                config.selection.c = o.c;
                config.selection.scaling = parse_scaling(o.scaling);
                config.selection.c_rank = o.c_rank;
                config.epsilon2 = o.epsilon2;
                result = ssp::superset_recover(y, config);
            } else if (method == "pencil") {
                ssp::PencilConfig config;
                config.denoise_constant = o.pencil_c;
                result = ssp::pencil_recover(y, o.sigma, config);
            } else {
                result = ssp::noiseless_recover(y);
            }
            const fs::path path = methods.size() > 1 ? tagged_path(o.out, method) : fs::path(o.out);
            ssp::io::write_text_file(path, ssp::io::to_json(result).dump(2) + "\n");
            if (o.verbose && result.gammas.size() > 0) {
                const fs::path gpath = o.gammas_out.empty() ? tagged_path(path, "gammas").replace_extension(".csv")
                                                            : fs::path(o.gammas_out);
                std::ostringstream g;
                ssp::io::write_gammas(g, result.gammas, o.n);
                ssp::io::write_text_file(gpath, g.str());
            }
            for (const auto& w : result.warnings) std::cerr << "warning: " << method << ": " << w << '\n';
            std::cout << method << " support=" << support_text(result.support)
                      << " residual=" << ssp::io::format_double(result.residual)
                      << " iterations=" << result.iterations;
            if (truth) std::cout << " rel_error=" << ssp::io::format_double(ssp::relative_error(result, *truth));
            std::cout << '\n';
        } catch (const ssp::EmptyEstimateError& e) {
            std::cerr << "error: " << method << ": empty estimate: " << e.what() << '\n';
            if (status == exit_ok) status = exit_empty;
        } catch (const ssp::OverCompleteError& e) {
            std::cerr << "error: " << method << ": over-complete support: " << e.what() << '\n';
            if (status == exit_ok) status = exit_overcomplete;
        }
    }
    return status;
}

struct PhaseOptions {
    std::string family;
    int n = 1000;
    std::string m_grid = "10:220:10";
    std::string sigma_grid = "-3.5:-2:0.1";
    int trials = 100;
    std::string methods = "superset";
    std::uint64_t seed = 0;
    std::string out = "phase";
    bool pgm = false;
    std::optional<double> c;
    std::string scaling = "bound";
    double c_rank = 1.0;
    double epsilon2_factor = 10.0;
    double pencil_c = 1.5;
    bool tune_pencil = false;
    bool real_noise = false;
};

// Completed cells of an interrupted run, keyed by cell index.
class ProgressFile {
public:
    ProgressFile(fs::path path, std::string fingerprint) : path_(std::move(path)), fingerprint_(std::move(fingerprint)) {
        std::ifstream in(path_);
        std::string header;
        if (in && std::getline(in, header) && header == "# " + fingerprint_) {
            int cell = 0;
            int count = 0;
            while (in >> cell >> count) done_[cell] = count;
        } else {
            std::ofstream fresh(path_, std::ios::trunc);
            fresh << "# " << fingerprint_ << '\n';
        }
    }

    std::optional<int> lookup(int cell) const {
        const auto it = done_.find(cell);
        if (it == done_.end()) return std::nullopt;
        return it->second;
    }

    void record(int cell, int successes) {
        std::ofstream out(path_, std::ios::app);
        out << cell << ' ' << successes << '\n';
        done_[cell] = successes;
    }

    std::size_t resumed() const { return done_.size(); }
    void finish() const { fs::remove(path_); }

private:
    fs::path path_;
    std::string fingerprint_;
    std::map<int, int> done_;
};

int run_phase(const PhaseOptions& o) {
    if (o.trials < 1) throw UsageError("--trials must be >= 1");
    const ssp::SignalFamily family = ssp::SignalFamily::parse(o.family);
    std::vector<int> m_grid;
    for (double v : parse_grid(o.m_grid)) {
        if (v != std::floor(v)) throw UsageError("m grid values must be integers");
        m_grid.push_back(static_cast<int>(v));
    }
    const std::vector<double> log_sigmas = parse_grid(o.sigma_grid);
    std::vector<double> sigmas;
    for (double l : log_sigmas) sigmas.push_back(std::pow(10.0, l));

    std::vector<ssp::Method> methods;
    if (o.methods == "both") {
        methods = {ssp::Method::superset, ssp::Method::pencil};
    } else {
        methods = {ssp::parse_method(o.methods)};
    }

    ssp::TrialConfig config;
    config.c = o.c ? *o.c : family.default_c();
    config.scaling = parse_scaling(o.scaling);
    config.c_rank = o.c_rank;
    config.epsilon2_factor = o.epsilon2_factor;
    config.pencil.denoise_constant = o.pencil_c;
    config.noise = o.real_noise ? ssp::NoiseKind::real : ssp::NoiseKind::circular_complex;

    json tuning;
    if (o.tune_pencil && std::find(methods.begin(), methods.end(), ssp::Method::pencil) != methods.end()) {
        const ssp::PencilTuning t = ssp::tune_pencil_constant(family, o.n, m_grid, sigmas, o.trials,
                                                              ssp::derive_seed(o.seed, 0x7u), config);
        config.pencil.denoise_constant = t.best_constant;
        tuning = {{"constants", t.constants}, {"aggregates", t.aggregates}, {"best", t.best_constant}};
    }

    for (const auto method : methods) {
        const std::string name(ssp::method_name(method));
        json resolved = {
            {"family", family.name()},        {"n", o.n},
            {"m_grid", m_grid},               {"log10_sigma_grid", log_sigmas},
            {"trials", o.trials},             {"method", name},
            {"seed", o.seed},                 {"c", config.c},
            {"scaling", o.scaling},           {"c_rank", config.c_rank},
            {"epsilon2_factor", config.epsilon2_factor},
            {"pencil_constant", config.pencil.denoise_constant},
            {"pencil_band", {config.pencil.rho_lo, config.pencil.rho_hi}},
            {"noise", o.real_noise ? "real" : "circular-complex"},
            {"success_tolerance", config.success_tolerance},
            {"L_rule", "floor(m/3)"},
        };
        if (!tuning.is_null() && method == ssp::Method::pencil) resolved["pencil_tuning"] = tuning;

        const fs::path prefix = o.out + "." + name;
        std::ostringstream fp;
        fp << std::hex << fnv1a(resolved.dump());
        ProgressFile progress(prefix.string() + ".progress", fp.str());
        if (progress.resumed() > 0) std::cerr << name << ": resuming with " << progress.resumed() << " finished cells\n";

        ssp::PhaseDiagramHooks hooks;
        hooks.lookup = [&progress](int cell) { return progress.lookup(cell); };
        hooks.on_cell = [&progress](int cell, int successes) { progress.record(cell, successes); };
        const ssp::PhaseDiagram diagram =
            ssp::phase_diagram(family, o.n, m_grid, sigmas, o.trials, method, o.seed, config,
                               ssp::Execution::parallel, hooks);

        std::ostringstream csv;
        ssp::io::write_phase_csv(csv, diagram);
        ssp::io::write_text_file(prefix.string() + ".csv", csv.str());
        json sidecar = {{"config", resolved}, {"fingerprint", fp.str()}, {"result", ssp::io::phase_json(diagram)}};
        ssp::io::write_text_file(prefix.string() + ".json", sidecar.dump(2) + "\n");
        if (o.pgm) {
            std::ostringstream pgm;
            ssp::io::write_phase_pgm(pgm, diagram);
            ssp::io::write_text_file(prefix.string() + ".pgm", pgm.str());
        }
        progress.finish();
        std::cout << name << " aggregate_success=" << ssp::io::format_double(diagram.aggregate()) << " -> "
                  << prefix.string() << ".csv\n";
    }
    return exit_ok;
}

int run_coherence(int n, int m) {
    const double mu = ssp::coherence(ssp::PartialFourier(n, m));
    std::cout << "coherence " << ssp::io::format_double(mu) << '\n'
              << "log10_1_minus_mu " << ssp::io::format_double(std::log10(1.0 - mu)) << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse super-resolution: superset selection and pruning, matrix pencil baseline"};
    app.set_config("--config", "", "TOML/INI file with option defaults (flags override it)");
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads for experiment runs")->envname("SSP_NUM_THREADS");

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a ground-truth signal and its measurement");
    synth_cmd->add_option("--family", synth.family, "well-separated | five-cluster | k2 | k3 | k4")->required();
    synth_cmd->add_option("--n", synth.n, "ambient dimension (even)");
    synth_cmd->add_option("--m", synth.m, "number of Fourier samples")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--L", synth.L, "Hankel rows (default floor(m/3))");
    synth_cmd->add_option("--spikes", synth.spikes, "override the family's spike count");
    synth_cmd->add_option("--sigma", synth.sigma, "noise level")->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--seed", synth.seed, "RNG seed");
    synth_cmd->add_flag("--real-noise", synth.real_noise, "real N(0, sigma^2) noise instead of circular complex");
    synth_cmd->add_option("--signal-out", synth.signal_out, "signal file to write");
    synth_cmd->add_option("--measurement-out", synth.measurement_out, "measurement CSV to write");

    RecoverOptions rec;
    auto* rec_cmd = app.add_subcommand("recover", "Recover a sparse signal from a measurement CSV");
    rec_cmd->add_option("--measurement", rec.measurement, "measurement CSV (j,re,im)")->required();
    rec_cmd->add_option("--n", rec.n, "ambient dimension")->required();
    rec_cmd->add_option("--L", rec.L, "Hankel rows (default floor(m/3))");
    rec_cmd->add_option("--sigma", rec.sigma, "noise level used by the thresholds")->check(CLI::NonNegativeNumber);
    rec_cmd->add_option("--c", rec.c, "epsilon1 multiplier");
    rec_cmd->add_option("--epsilon2", rec.epsilon2, "pruning threshold (default 10*sigma)");
    rec_cmd->add_option("--scaling", rec.scaling, "how c enters epsilon1: bound | sqrt | linear");
    rec_cmd->add_option("--c-rank", rec.c_rank, "rank cut multiplier");
    rec_cmd->add_option("--pencil-c", rec.pencil_c, "matrix pencil denoising constant");
    rec_cmd->add_option("--method", rec.method, "superset | pencil | both | noiseless");
    rec_cmd->add_option("--truth", rec.truth, "ground-truth signal file for the error report");
    rec_cmd->add_option("--out", rec.out, "result document (JSON)");
    rec_cmd->add_option("--gammas-out", rec.gammas_out, "selection angle CSV (with --verbose)");
    rec_cmd->add_flag("-v,--verbose", rec.verbose, "also write the per-atom angle CSV");

    PhaseOptions ph;
    auto* ph_cmd = app.add_subcommand("phase-diagram", "Empirical success frequencies over (m, sigma)");
    ph_cmd->add_option("--family", ph.family, "well-separated | five-cluster | k2 | k3 | k4")->required();
    ph_cmd->add_option("--n", ph.n, "ambient dimension");
    ph_cmd->add_option("--m-grid", ph.m_grid, "m values: start:stop:step or comma list");
    ph_cmd->add_option("--sigma-grid", ph.sigma_grid, "log10 sigma values: start:stop:step or comma list");
    ph_cmd->add_option("--trials", ph.trials, "trials per cell");
    ph_cmd->add_option("--methods", ph.methods, "superset | pencil | both");
    ph_cmd->add_option("--seed", ph.seed, "base seed");
    ph_cmd->add_option("--out", ph.out, "output prefix");
    ph_cmd->add_flag("--pgm", ph.pgm, "also write a PGM image per method");
    ph_cmd->add_option("--c", ph.c, "epsilon1 multiplier (default per family)");
    ph_cmd->add_option("--scaling", ph.scaling, "how c enters epsilon1: bound | sqrt | linear");
    ph_cmd->add_option("--c-rank", ph.c_rank, "rank cut multiplier");
    ph_cmd->add_option("--epsilon2-factor", ph.epsilon2_factor, "epsilon2 = factor * sigma");
    ph_cmd->add_option("--pencil-c", ph.pencil_c, "matrix pencil denoising constant");
    ph_cmd->add_flag("--tune-pencil", ph.tune_pencil, "sweep the pencil constant over {0.5,1,1.5,2,3} first");
    ph_cmd->add_flag("--real-noise", ph.real_noise, "real noise instead of circular complex");

    int coh_n = 1000;
    int coh_m = 120;
    auto* coh_cmd = app.add_subcommand("coherence", "Coherence of the partial Fourier matrix");
    coh_cmd->add_option("--n", coh_n, "ambient dimension");
    coh_cmd->add_option("--m", coh_m, "number of Fourier samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*synth_cmd) return run_synth(synth);
        if (*rec_cmd) return run_recover(rec);
        if (*ph_cmd) return run_phase(ph);
        if (*coh_cmd) return run_coherence(coh_n, coh_m);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ssp::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ssp::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const ssp::EmptyEstimateError& e) {
        std::cerr << "error: empty estimate: " << e.what() << '\n';
        return exit_empty;
    } catch (const ssp::OverCompleteError& e) {
        std::cerr << "error: over-complete support: " << e.what() << '\n';
        return exit_overcomplete;
    } catch (const ssp::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}
