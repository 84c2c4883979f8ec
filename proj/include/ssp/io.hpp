#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "ssp/experiments.hpp"
#include "ssp/fourier_model.hpp"
#include "ssp/pruning.hpp"

namespace ssp::io {

// Signal file:   "n <n>" then one "<index> <re> <im>" line per spike; '#' starts a comment.
void write_signal(std::ostream& out, const SparseSignal& signal);
SparseSignal read_signal(std::istream& in);

// Measurement CSV: header "j,re,im", one row per sample in order j = 0..m-1.
void write_measurement(std::ostream& out, const CVector& values);
CVector read_measurement(std::istream& in);

nlohmann::json to_json(const RecoveryResult& result);
RecoveryResult recovery_from_json(const nlohmann::json& doc);

// "k,gamma" rows for every candidate index.
void write_gammas(std::ostream& out, const Eigen::VectorXd& gammas, int n);

// Header "m,log10_1_minus_mu,<log10 sigma>...", one row per m.
void write_phase_csv(std::ostream& out, const PhaseDiagram& diagram);
nlohmann::json phase_json(const PhaseDiagram& diagram);
// Plain PGM (P2); top row is the largest m, white = every trial succeeded.
void write_phase_pgm(std::ostream& out, const PhaseDiagram& diagram);

// Shortest decimal text that parses back to the same double (17 significant digits).
std::string format_double(double value);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
SparseSignal load_signal(const std::filesystem::path& path);
CVector load_measurement(const std::filesystem::path& path);

} // namespace ssp::io
