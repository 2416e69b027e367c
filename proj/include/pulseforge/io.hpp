#pragma once

// CSV and JSON plumbing. Trace data goes to CSV (one row per sample, fixed
// headers) and structured results to JSON. Numbers are written with %.17g so
// a round trip preserves doubles bit-for-bit and repeated runs produce
// byte-identical bodies.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseforge/grid.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {

inline double parse_field(const std::string& text, const std::string& file, std::size_t line,
                          const std::string& column) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw CsvError(file + ":" + std::to_string(line) + ": column '" + column +
                       "' is not a number: '" + text + "'");
    return value;
}

/// Splits one CSV record on commas (no quoting; none of our fields need it).
inline std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::string& path, const std::vector<std::string>& expect_columns) {
    std::ifstream in(path);
    if (!in) throw CsvError(path + ": cannot open file");
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_record(line);
        if (lineno == 1) {
            table.columns = fields;
            if (!expect_columns.empty() && fields != expect_columns) {
                std::string want;
                for (const std::string& c : expect_columns) want += (want.empty() ? "" : ",") + c;
                throw CsvError(path + ":1: expected header '" + want + "'");
            }
            continue;
        }
        if (fields.size() != table.columns.size())
            throw CsvError(path + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(table.columns.size()) + " fields, got " +
                           std::to_string(fields.size()));
        std::vector<double> row(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c)
            row[c] = parse_field(fields[c], path, lineno, table.columns[c]);
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw CsvError(path + ": empty file");
    if (table.rows.size() < 2)
        throw CsvError(path + ": need at least two data rows");
    return table;
}

/// Validates that the time column is uniform from 0 and returns the grid.
inline TimeGrid grid_from_times(const CsvTable& table, const std::string& path) {
    const std::size_t n = table.rows.size();
    const double t_end = table.rows.back()[0];
    if (!(t_end > 0.0)) throw CsvError(path + ": final time must be positive");
    const TimeGrid grid(t_end, static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(table.rows[i][0] - grid.time(static_cast<int>(i))) > 1e-9 * t_end)
            throw CsvError(path + ":" + std::to_string(i + 2) +
                           ": time column is not uniformly spaced from 0");
    }
    return grid;
}

}  // namespace detail

inline void write_trajectory_csv(const std::string& path, const InvariantTrajectory& traj) {
    std::ofstream out(path);
    if (!out) throw CsvError(path + ": cannot open file for writing");
    out << "t,gamma,beta,zeta\n";
    for (int i = 0; i < traj.size(); ++i) {
        out << format_double(traj.grid.time(i)) << ',' << format_double(traj.gamma[i]) << ','
            << format_double(traj.beta[i]) << ',' << format_double(traj.zeta[i]) << '\n';
    }
}

/// Reads angle samples; derivative arrays are rebuilt with the shared
/// finite-difference stencil.
inline InvariantTrajectory read_trajectory_csv(const std::string& path) {
    const detail::CsvTable table = detail::read_csv(path, {"t", "gamma", "beta", "zeta"});
    const TimeGrid grid = detail::grid_from_times(table, path);
    const std::size_t n = table.rows.size();
    std::vector<double> gamma(n), beta(n), zeta(n);
    for (std::size_t i = 0; i < n; ++i) {
        gamma[i] = table.rows[i][1];
        beta[i] = table.rows[i][2];
        zeta[i] = table.rows[i][3];
    }
    InvariantTrajectory traj{grid, std::move(gamma), std::move(beta), std::move(zeta), {}, {}, {}};
    traj.gamma_dot = derivative_samples(traj.gamma, grid.dt());
    traj.beta_dot = derivative_samples(traj.beta, grid.dt());
    traj.zeta_dot = derivative_samples(traj.zeta, grid.dt());
    return traj;
}

inline void write_pulse_csv(const std::string& path, const ControlPulse& pulse) {
    std::ofstream out(path);
    if (!out) throw CsvError(path + ": cannot open file for writing");
    out << "t,omega,phi,delta\n";
    for (int i = 0; i < pulse.grid.size(); ++i) {
        out << format_double(pulse.grid.time(i)) << ',' << format_double(pulse.omega[i]) << ','
            << format_double(pulse.phi[i]) << ',' << format_double(pulse.delta[i]) << '\n';
    }
}

inline ControlPulse read_pulse_csv(const std::string& path) {
    const detail::CsvTable table = detail::read_csv(path, {"t", "omega", "phi", "delta"});
    const TimeGrid grid = detail::grid_from_times(table, path);
    const std::size_t n = table.rows.size();
    ControlPulse pulse{grid, std::vector<double>(n), std::vector<double>(n),
                       std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        pulse.omega[i] = table.rows[i][1];
        pulse.phi[i] = table.rows[i][2];
        pulse.delta[i] = table.rows[i][3];
    }
    return pulse;
}

inline void write_ff_csv(const std::string& path, const std::vector<double>& omega,
                         const std::vector<double>& value) {
    if (omega.size() != value.size())
        throw std::invalid_argument("write_ff_csv: omega/value size mismatch");
    std::ofstream out(path);
    if (!out) throw CsvError(path + ": cannot open file for writing");
    out << "omega,F\n";
    for (std::size_t i = 0; i < omega.size(); ++i)
        out << format_double(omega[i]) << ',' << format_double(value[i]) << '\n';
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out << body;
}

}  // namespace pulseforge
