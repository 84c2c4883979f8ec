#include "ssp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ssp/errors.hpp"

namespace ssp::io {

namespace {

std::string strip_comment(std::string line) {
    if (const auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = line.find_last_not_of(" \t\r");
    return line.substr(first, last - first + 1);
}

double parse_double(const std::string& text, int line_no) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + text + "'");
    return value;
}

long long parse_int(const std::string& text, int line_no) {
    long long value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) throw ParseError("line " + std::to_string(line_no) + ": bad integer '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(strip_comment(field));
    return out;
}

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

nlohmann::json complex_pair(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

} // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    if (ec != std::errc()) return "nan";
    return {buffer, ptr};
}

void write_signal(std::ostream& out, const SparseSignal& signal) {
    out << "n " << signal.n() << '\n';
    const auto& support = signal.support();
    const auto& amplitudes = signal.amplitudes();
    for (std::size_t i = 0; i < support.size(); ++i) {
        out << support[i] << ' ' << format_double(amplitudes[i].real()) << ' ' << format_double(amplitudes[i].imag())
            << '\n';
    }
}

SparseSignal read_signal(std::istream& in) {
    std::string raw;
    int line_no = 0;
    std::optional<long long> n;
    std::vector<int> support;
    std::vector<Complex> amplitudes;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip_comment(raw);
        if (line.empty()) continue;
        const auto t = tokens(line);
        if (!n) {
            if (t.size() != 2 || t[0] != "n") throw ParseError("line " + std::to_string(line_no) + ": expected 'n <dimension>'");
            n = parse_int(t[1], line_no);
            continue;
        }
        if (t.size() != 3) throw ParseError("line " + std::to_string(line_no) + ": expected '<index> <re> <im>'");
        support.push_back(static_cast<int>(parse_int(t[0], line_no)));
        amplitudes.emplace_back(parse_double(t[1], line_no), parse_double(t[2], line_no));
    }
    if (!n) throw ParseError("signal file has no 'n' header");
    try {
        return {static_cast<int>(*n), std::move(support), std::move(amplitudes)};
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid signal: ") + e.what());
    }
}

void write_measurement(std::ostream& out, const CVector& values) {
    out << "j,re,im\n";
    for (Eigen::Index j = 0; j < values.size(); ++j)
        out << j << ',' << format_double(values[j].real()) << ',' << format_double(values[j].imag()) << '\n';
}

CVector read_measurement(std::istream& in) {
    std::string raw;
    int line_no = 0;
    bool header = false;
    std::vector<Complex> values;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip_comment(raw);
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (!header) {
            if (fields != std::vector<std::string>{"j", "re", "im"})
                throw ParseError("measurement CSV must start with header 'j,re,im'");
            header = true;
            continue;
        }
        if (fields.size() != 3) throw ParseError("line " + std::to_string(line_no) + ": expected 'j,re,im'");
        if (parse_int(fields[0], line_no) != static_cast<long long>(values.size()))
            throw ParseError("line " + std::to_string(line_no) + ": rows must be ordered j = 0, 1, ...");
        values.emplace_back(parse_double(fields[1], line_no), parse_double(fields[2], line_no));
    }
    if (!header) throw ParseError("measurement CSV is empty");
    if (values.empty()) throw ParseError("measurement CSV has no samples");
    CVector out(static_cast<Eigen::Index>(values.size()));
    for (std::size_t j = 0; j < values.size(); ++j) out[static_cast<Eigen::Index>(j)] = values[j];
    return out;
}

nlohmann::json to_json(const RecoveryResult& result) {
    nlohmann::json doc;
    doc["method"] = result.method;
    doc["n"] = result.n;
    doc["support"] = result.support;
    nlohmann::json coefficients = nlohmann::json::array();
    for (int k : result.support) coefficients.push_back({{"index", k}, {"value", complex_pair(result.coefficient(k))}});
    doc["coefficients"] = coefficients;
    doc["residual"] = result.residual;
    doc["iterations"] = result.iterations;
    doc["rank"] = result.rank;
    doc["epsilon1"] = result.epsilon1;
    doc["epsilon2"] = result.epsilon2;
    doc["possibly_zero"] = result.possibly_zero;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& step : result.prune_trace) trace.push_back({{"index", step.index}, {"delta", step.delta}});
    doc["prune_trace"] = trace;
    doc["gammas"] = std::vector<double>(result.gammas.data(), result.gammas.data() + result.gammas.size());
    doc["warnings"] = result.warnings;
    return doc;
}

RecoveryResult recovery_from_json(const nlohmann::json& doc) {
    try {
        RecoveryResult out;
        out.method = doc.at("method").get<std::string>();
        out.n = doc.at("n").get<int>();
        out.support = doc.at("support").get<std::vector<int>>();
        out.coefficients = CVector::Zero(out.n);
        for (const auto& entry : doc.at("coefficients")) {
            const int k = entry.at("index").get<int>();
            const auto& v = entry.at("value");
            if (k < -out.n / 2 || k >= out.n / 2) throw ParseError("coefficient index out of range");
            out.coefficients[k + out.n / 2] = Complex(v.at(0).get<double>(), v.at(1).get<double>());
        }
        out.residual = doc.at("residual").get<double>();
        out.iterations = doc.at("iterations").get<int>();
        out.rank = doc.value("rank", 0);
        out.epsilon1 = doc.value("epsilon1", 0.0);
        out.epsilon2 = doc.value("epsilon2", 0.0);
        out.possibly_zero = doc.value("possibly_zero", false);
        for (const auto& step : doc.at("prune_trace"))
            out.prune_trace.push_back({step.at("index").get<int>(), step.at("delta").get<double>()});
        const auto gammas = doc.value("gammas", std::vector<double>{});
        out.gammas = Eigen::Map<const Eigen::VectorXd>(gammas.data(), static_cast<Eigen::Index>(gammas.size()));
        out.warnings = doc.value("warnings", std::vector<std::string>{});
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed recovery document: ") + e.what());
    }
}

void write_gammas(std::ostream& out, const Eigen::VectorXd& gammas, int n) {
    out << "k,gamma\n";
    for (Eigen::Index idx = 0; idx < gammas.size(); ++idx)
        out << static_cast<int>(idx) - n / 2 << ',' << format_double(gammas[idx]) << '\n';
}

void write_phase_csv(std::ostream& out, const PhaseDiagram& diagram) {
    out << "m,log10_1_minus_mu";
    for (double s : diagram.log10_sigmas) out << ',' << format_double(s);
    out << '\n';
    for (std::size_t mi = 0; mi < diagram.m_grid.size(); ++mi) {
        out << diagram.m_grid[mi] << ',' << format_double(diagram.coherence_axis[mi]);
        for (double v : diagram.success[mi]) out << ',' << format_double(v);
        out << '\n';
    }
}

nlohmann::json phase_json(const PhaseDiagram& diagram) {
    nlohmann::json doc;
    doc["family"] = diagram.family;
    doc["method"] = diagram.method;
    doc["n"] = diagram.n;
    doc["trials"] = diagram.trials;
    doc["base_seed"] = diagram.base_seed;
    doc["m_grid"] = diagram.m_grid;
    doc["sigmas"] = diagram.sigmas;
    doc["coherence_axis"] = diagram.coherence_axis;
    doc["successes"] = diagram.successes;
    doc["aggregate_success"] = diagram.aggregate();
    return doc;
}

void write_phase_pgm(std::ostream& out, const PhaseDiagram& diagram) {
    const auto width = diagram.sigmas.size();
    const auto height = diagram.m_grid.size();
    out << "P2\n" << width << ' ' << height << "\n255\n";
    for (std::size_t r = 0; r < height; ++r) {
        const auto& row = diagram.success[height - 1 - r];
        for (std::size_t c = 0; c < width; ++c) {
            if (c) out << ' ';
            out << static_cast<int>(std::lround(255.0 * row[c]));
        }
        out << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

SparseSignal load_signal(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_signal(in);
}

CVector load_measurement(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_measurement(in);
}

} // namespace ssp::io
