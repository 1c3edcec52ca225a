#include <cstdio>
#include <string>

#include "igavib/model.hpp"

namespace igavib {

namespace {

std::string num9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string results_to_csv(const ResultBundle& bundle) {
    std::string out = "mode,omega_rad_s,omega_tilde\n";
    for (int i = 0; i < bundle.omega.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += num9(bundle.omega[i]);
        out += ',';
        out += num9(bundle.omega_tilde[i]);
        out += '\n';
    }
    return out;
}

std::string results_to_vtk(const ResultBundle& bundle) {
    const int g = bundle.grid;
    const int n_pts = (g + 1) * (g + 1);
    const int n_cells = g * g;
    auto pid = [g](int i, int j) { return i * (g + 1) + j; };

    std::string out;
    out.reserve(static_cast<size_t>(n_pts) * 40 * (bundle.mode_w0.size() + 1));
    out += "# vtk DataFile Version 3.0\n";
    out += "mode shapes (w0) on the parametric sample grid\n";
    out += "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    out += "POINTS " + std::to_string(n_pts) + " float\n";
    for (int i = 0; i <= g; ++i) {
        for (int j = 0; j <= g; ++j) {
            out += num9(bundle.grid_x(i, j));
            out += ' ';
            out += num9(bundle.grid_y(i, j));
            out += " 0\n";
        }
    }
    out += "CELLS " + std::to_string(n_cells) + " " + std::to_string(5 * n_cells) + "\n";
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            out += "4 " + std::to_string(pid(i, j)) + " " + std::to_string(pid(i + 1, j)) + " " +
                   std::to_string(pid(i + 1, j + 1)) + " " + std::to_string(pid(i, j + 1)) + "\n";
        }
    }
    out += "CELL_TYPES " + std::to_string(n_cells) + "\n";
    for (int c = 0; c < n_cells; ++c) out += "9\n";
    out += "POINT_DATA " + std::to_string(n_pts) + "\n";
    for (size_t m = 0; m < bundle.mode_w0.size(); ++m) {
        out += "SCALARS mode_" + std::to_string(m + 1) + "_w0 float 1\n";
        out += "LOOKUP_TABLE default\n";
        for (int i = 0; i <= g; ++i) {
            for (int j = 0; j <= g; ++j) {
                out += num9(bundle.mode_w0[m](i, j));
                out += '\n';
            }
        }
    }
    return out;
}

}  // namespace igavib
