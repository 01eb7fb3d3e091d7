#pragma once

#include <cerrno>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "combospec/combo.hpp"
#include "combospec/matrix.hpp"
#include "combospec/multiobj.hpp"

namespace combospec {

/// 17 significant decimal digits: enough to reproduce any double exactly on
/// re-read, so files written this way round-trip bit-for-bit.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {

inline double parse_field(const std::string& field, const std::string& path, std::size_t line_no) {
    if (field.empty()) {
        throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": empty field");
    }
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || errno == ERANGE) {
        throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                    ": cannot parse '" + field + "' as a number");
    }
    return value;
}

}  // namespace detail

/// Reads a headerless comma-separated matrix, one row per line. Rejects
/// ragged rows, non-numeric fields, and files with no data.
inline Matrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_matrix_csv: cannot open '" + path + "'");

    std::vector<Vector> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        Vector row;
        std::string field;
        std::istringstream fields(line);
        while (std::getline(fields, field, ',')) {
            row.push_back(detail::parse_field(field, path, line_no));
        }
        if (!line.empty() && line.back() == ',') {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": empty field");
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": ragged row (" +
                                        std::to_string(row.size()) + " fields, expected " +
                                        std::to_string(width) + ")");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw std::invalid_argument("load_matrix_csv: '" + path + "' contains no data");
    }

    Matrix m(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return m;
}

inline void save_matrix_csv(std::ostream& out, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_full(m(i, j));
        }
        out << '\n';
    }
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

inline void save_matrix_csv(const std::string& path, const Matrix& m) {
    auto out = open_output(path);
    save_matrix_csv(out, m);
}

/// Grid spectra, one row per grid node: alpha,lambda_1,...,lambda_m
/// (eigenvalues in descending order).
inline void write_table_csv(std::ostream& out, const SpectrumTable& table) {
    out << "alpha";
    const std::size_t m = table.spectra.empty() ? 0 : table.spectra.front().eigenvalues.size();
    for (std::size_t i = 1; i <= m; ++i) out << ",lambda_" << i;
    out << '\n';
    for (std::size_t row = 0; row < table.alphas.size(); ++row) {
        out << format_full(table.alphas[row]);
        for (double lambda : table.spectra[row].eigenvalues) out << ',' << format_full(lambda);
        out << '\n';
    }
}

inline void write_table_csv(const std::string& path, const SpectrumTable& table) {
    auto out = open_output(path);
    write_table_csv(out, table);
}

/// Predicted eigenvalue intervals, one row per eigenvalue index:
/// alpha,i,lo,hi,anchor_k,mode.
inline void write_intervals_csv(std::ostream& out, const std::vector<EigenIntervals>& queries) {
    out << "alpha,i,lo,hi,anchor_k,mode\n";
    for (const EigenIntervals& q : queries) {
        for (std::size_t i = 0; i < q.intervals.size(); ++i) {
            out << format_full(q.alpha) << ',' << (i + 1) << ','
                << format_full(q.intervals[i].first) << ',' << format_full(q.intervals[i].second)
                << ',' << q.anchor_k << ',' << to_string(q.mode) << '\n';
        }
    }
}

inline void write_intervals_csv(const std::string& path, const std::vector<EigenIntervals>& queries) {
    auto out = open_output(path);
    write_intervals_csv(out, queries);
}

/// Dense-sweep check results, one row per sampled alpha:
/// alpha,anchor_k,max_deviation,radius,exceedances.
inline void write_verify_csv(std::ostream& out, const BoundCheckReport& report) {
    out << "alpha,anchor_k,max_deviation,radius,exceedances\n";
    for (const BoundCheckSample& s : report.samples) {
        out << format_full(s.alpha) << ',' << s.anchor_k << ',' << format_full(s.max_deviation)
            << ',' << format_full(report.radius) << ',' << s.exceedances << '\n';
    }
}

inline void write_verify_csv(const std::string& path, const BoundCheckReport& report) {
    auto out = open_output(path);
    write_verify_csv(out, report);
}

/// Sweep results, one row per alpha:
/// alpha,converged,iters,j1,j2,p_1,...,p_n (converged as 1/0).
inline void write_pareto_csv(std::ostream& out, const std::vector<ParetoPoint>& points) {
    out << "alpha,converged,iters,j1,j2";
    const std::size_t n = points.empty() ? 0 : points.front().p_star.size();
    for (std::size_t i = 1; i <= n; ++i) out << ",p_" << i;
    out << '\n';
    for (const ParetoPoint& p : points) {
        out << format_full(p.alpha) << ',' << (p.converged ? 1 : 0) << ',' << p.iters << ','
            << format_full(p.j1) << ',' << format_full(p.j2);
        for (double x : p.p_star) out << ',' << format_full(x);
        out << '\n';
    }
}

inline void write_pareto_csv(const std::string& path, const std::vector<ParetoPoint>& points) {
    auto out = open_output(path);
    write_pareto_csv(out, points);
}

}  // namespace combospec
