#ifndef PLATE_IO_HPP
#define PLATE_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "plate/errors.hpp"
#include "plate/field.hpp"
#include "plate/modal.hpp"
#include "plate/spectra.hpp"
#include "plate/stepper.hpp"

namespace plate {

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open output file " + path.string());
    return f;
}

} // namespace detail

// Probe time series: t, w_p1, v_p1, w_p2, v_p2, ...  The resolved config is
// embedded as a header comment for provenance.
inline void write_probe_csv(const std::filesystem::path& path, const std::string& config_json,
                            const ProbeSeries& probes) {
    auto f = detail::open_out(path);
    f << "# config: " << config_json << "\n";
    f << "t";
    for (size_t p = 0; p < probes.w.size(); ++p)
        f << ",w_p" << p + 1 << ",v_p" << p + 1;
    f << "\n";
    for (size_t k = 0; k < probes.t.size(); ++k) {
        f << detail::fmt_g17(probes.t[k]);
        for (size_t p = 0; p < probes.w.size(); ++p)
            f << "," << detail::fmt_g17(probes.w[p][k]) << "," << detail::fmt_g17(probes.v[p][k]);
        f << "\n";
    }
}

// Legacy ASCII structured-grid VTK with one point scalar "w".  The annulus
// seam is closed by repeating the first angular row.
inline void write_vtk(const std::filesystem::path& path, const std::string& title,
                      const Field& field) {
    const Mesh& m = *field.mesh;
    auto f = detail::open_out(path);
    const int nj = m.periodic2 ? m.n2 + 1 : m.n2;
    f << "# vtk DataFile Version 3.0\n";
    std::string t = title.empty() ? "plate field" : title;
    for (auto& c : t)
        if (c == '\n' || c == '\r') c = ' ';
    f << t << "\n";
    f << "ASCII\nDATASET STRUCTURED_GRID\n";
    f << "DIMENSIONS " << m.n1 << " " << nj << " 1\n";
    f << "POINTS " << m.n1 * nj << " double\n";
    for (int j = 0; j < nj; ++j)
        for (int i = 0; i < m.n1; ++i)
            f << detail::fmt_g17(m.coord_x(i, m.wrap2(j))) << " "
              << detail::fmt_g17(m.coord_y(i, m.wrap2(j))) << " 0\n";
    f << "POINT_DATA " << m.n1 * nj << "\n";
    f << "SCALARS w double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < nj; ++j)
        for (int i = 0; i < m.n1; ++i) f << detail::fmt_g17(field.wat(i, j)) << "\n";
}

inline void write_spectrum_csv(const std::filesystem::path& path, const std::string& config_json,
                               const Spectrum& s) {
    auto f = detail::open_out(path);
    f << "# config: " << config_json << "\n";
    f << "freq_hz,power\n";
    for (size_t k = 0; k < s.freqs.size(); ++k)
        f << detail::fmt_g17(s.freqs[k]) << "," << detail::fmt_g17(s.power[k]) << "\n";
}

inline void write_modes_csv(const std::filesystem::path& path, const std::string& config_json,
                            const std::vector<Mode>& modes) {
    auto f = detail::open_out(path);
    f << "# config: " << config_json << "\n";
    f << "index,lambda,f_hz,residual\n";
    for (size_t i = 0; i < modes.size(); ++i)
        f << i + 1 << "," << detail::fmt_g17(modes[i].lambda) << ","
          << detail::fmt_g17(modes[i].f) << "," << detail::fmt_g17(modes[i].residual) << "\n";
}

// Nodal polylines: one row per vertex, polyline id in the first column.
inline void write_nodal_csv(const std::filesystem::path& path, const std::string& config_json,
                            const NodalLineSet& lines) {
    auto f = detail::open_out(path);
    f << "# config: " << config_json << "\n";
    f << "polyline,x,y\n";
    for (size_t p = 0; p < lines.polylines.size(); ++p)
        for (const auto& v : lines.polylines[p])
            f << p + 1 << "," << detail::fmt_g17(v[0]) << "," << detail::fmt_g17(v[1]) << "\n";
}

struct ConvergenceRow {
    std::string grid_label;
    double h = 0.0;
    double max_error = 0.0;
    double l2_error = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double order = 0.0;    // least-squares slope; NaN when undefined
    bool order_defined = false;
};

inline void write_convergence_csv(const std::filesystem::path& path,
                                  const std::string& config_json, const ConvergenceTable& table) {
    auto f = detail::open_out(path);
    f << "# config: " << config_json << "\n";
    f << "grid,h,max_error,l2_error\n";
    for (const auto& r : table.rows)
        f << r.grid_label << "," << detail::fmt_g17(r.h) << "," << detail::fmt_g17(r.max_error)
          << "," << detail::fmt_g17(r.l2_error) << "\n";
    f << "# estimated_order," << (table.order_defined ? detail::fmt_g17(table.order) : "n/a")
      << "\n";
}

} // namespace plate

#endif
