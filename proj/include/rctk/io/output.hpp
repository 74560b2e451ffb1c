#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rctk/dynamics/redfield.hpp"
#include "rctk/errors.hpp"
#include "rctk/quantum/hilbert_space.hpp"
#include "rctk/spectral/spectral_density.hpp"
#include "rctk/version.hpp"

namespace rctk {

// 17 significant digits, '.' decimal, locale-free: round-trips double exactly.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string config_hash(const std::string& canonical) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical)));
    return buf;
}

// Every output file starts with one metadata comment line.
inline std::string meta_header(const std::string& hash) {
    return "# rctk v" + std::string(kVersion) + " config=" + hash;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& hash,
              const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw ValidationError("cannot open output file: " + path);
        out_ << meta_header(hash) << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }

    void row(const std::vector<double>& values, const std::string& trailing = {}) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            out_ << format_g17(values[i]);
            if (i + 1 < values.size() || !trailing.empty()) out_ << ",";
        }
        if (!trailing.empty()) out_ << trailing;
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

// Density files: `omega,gamma` in user energy units; comment lines ignored.
inline SpectralDensity load_density_csv(const std::string& path, Statistics stat) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open density file: " + path);
    std::string line;
    std::vector<double> w, g;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.find("omega") == std::string::npos)
                throw ValidationError("density file must carry an 'omega,gamma' header");
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw ValidationError("malformed density row: " + line);
        w.push_back(std::stod(a));
        g.push_back(std::stod(b));
    }
    if (w.size() < 2) throw ValidationError("density file has fewer than two samples");
    return SpectralDensity::from_grid(std::move(w), std::move(g), stat);
}

inline void save_density_csv(const std::string& path, const SpectralDensity& d,
                             const std::string& hash, std::size_t n_samples = 1001) {
    CsvWriter csv(path, hash, {"omega", "gamma"});
    if (d.is_grid()) {
        const auto& x = d.grid().abscissae();
        const auto& y = d.grid().ordinates();
        for (std::size_t i = 0; i < x.size(); ++i) csv.row({x[i], y[i]});
        return;
    }
    double lo = d.lo(), hi = d.hi();
    if (!d.bounded()) {
        const auto& bp = d.breakpoints();
        const double c = bp.empty() ? 0.0 : bp[bp.size() / 2];
        double width = bp.size() >= 2 ? 2.0 * (bp.back() - bp.front()) : 1.0;
        lo = std::isfinite(lo) ? lo : c - 3.0 * width;
        hi = std::isfinite(hi) ? hi : c + 3.0 * width;
    }
    const double h = (hi - lo) / static_cast<double>(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double x = lo + h * (0.5 + static_cast<double>(i));
        csv.row({x, d.raw(x)});
    }
}

// Steady-state report as JSON. Units follow the hbar = k_B = 1 convention:
// matter currents in units of the reference energy, energy currents in its
// square (documented in the header field).
inline std::string steady_report_to_json(const SteadyReport& rep,
                                         const std::vector<std::string>& labels,
                                         const std::string& hash) {
    std::ostringstream out;
    out << "{\n  \"units\": \"hbar=kB=1; I_M in eps, I_E in eps^2\",\n";
    out << "  \"toolkit_version\": \"" << kVersion << "\",\n";
    out << "  \"config_hash\": \"" << hash << "\",\n";
    out << "  \"residual_norm\": " << format_g17(rep.residual_norm) << ",\n";
    out << "  \"reservoirs\": [";
    for (std::size_t i = 0; i < rep.matter_current.size(); ++i) {
        out << (i ? ", " : "") << "{\"label\": \""
            << (i < labels.size() ? labels[i] : std::to_string(i)) << "\", \"I_M\": "
            << format_g17(rep.matter_current[i]) << ", \"I_E\": "
            << format_g17(rep.energy_current[i]) << "}";
    }
    out << "]\n}\n";
    return out.str();
}

// Binary operator container: magic, JSON metadata line, then row-major complex
// doubles (re, im interleaved, little-endian host order).
inline void save_operator(const std::string& path, const OperatorMatrix& op,
                          const std::string& metadata_json) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open operator file: " + path);
    out << "RCOP1\n";
    out << op.mat.rows() << " " << op.mat.cols() << "\n";
    out << metadata_json << "\n";
    for (Eigen::Index i = 0; i < op.mat.rows(); ++i)
        for (Eigen::Index j = 0; j < op.mat.cols(); ++j) {
            const double re = op.mat(i, j).real();
            const double im = op.mat(i, j).imag();
            out.write(reinterpret_cast<const char*>(&re), sizeof(double));
            out.write(reinterpret_cast<const char*>(&im), sizeof(double));
        }
}

inline OperatorMatrix load_operator(const std::string& path, std::string* metadata = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open operator file: " + path);
    std::string magic;
    std::getline(in, magic);
    if (magic != "RCOP1") throw ValidationError("not an operator container: " + path);
    Eigen::Index rows = 0, cols = 0;
    in >> rows >> cols;
    in.ignore();
    std::string meta;
    std::getline(in, meta);
    if (metadata) *metadata = meta;
    OperatorMatrix op;
    op.mat.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re = 0.0, im = 0.0;
            in.read(reinterpret_cast<char*>(&re), sizeof(double));
            in.read(reinterpret_cast<char*>(&im), sizeof(double));
            op.mat(i, j) = Complex(re, im);
        }
    if (!in) throw ValidationError("truncated operator container: " + path);
    return op;
}

} // namespace rctk
