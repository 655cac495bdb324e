#include "purcellsim/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "purcellsim/errors.hpp"

namespace purcellsim {

namespace {

static_assert(std::endian::native == std::endian::little, "binary grid I/O assumes little-endian");

constexpr const char* kHeader =
    "x_m,y_m,z_m,eqx_re,eqx_im,eqy_re,eqy_im,eqz_re,eqz_im,"
    "ecx_re,ecx_im,ecy_re,ecy_im,ecz_re,ecz_im,mask";
constexpr int kColumns = 16;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, long row, int column) {
    const std::string t = trim(field);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw IngestionError("column " + std::to_string(column + 1) + ": bad number '" + t + "'",
                             row);
    }
    return v;
}

// Sorted unique axis values, checked for uniform spacing.
std::vector<double> axis_values(std::vector<double> v, const char* name) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() < 2) {
        throw IngestionError(std::string("axis ") + name + " needs at least two distinct values");
    }
    const double step = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double expected = v.front() + step * static_cast<double>(i);
        if (std::abs(v[i] - expected) > 1e-6 * step) {
            throw IngestionError(std::string("axis ") + name + " is not uniformly spaced");
        }
    }
    return v;
}

std::size_t axis_index(const std::vector<double>& axis, double x) {
    return static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), x) - axis.begin());
}

template <class T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IngestionError("binary grid is truncated");
    return v;
}

double& component(Vec3c& e, int col) {
    auto* parts = reinterpret_cast<double*>(&e[col / 2]);
    return parts[col % 2];
}

}  // namespace

FieldGrid read_field_grid_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IngestionError("empty grid file", 1);
    if (trim(line) != kHeader) throw IngestionError("unexpected header", 1);

    struct Row {
        double v[kColumns];
        long source_row;
    };
    std::vector<Row> rows;
    long row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        Row r{};
        r.source_row = row_no;
        std::stringstream ss(line);
        std::string field;
        int col = 0;
        while (std::getline(ss, field, ',')) {
            if (col >= kColumns) throw IngestionError("too many columns", row_no);
            r.v[col] = parse_number(field, row_no, col);
            ++col;
        }
        if (col != kColumns) throw IngestionError("expected 16 columns", row_no);
        if (r.v[15] != 0.0 && r.v[15] != 1.0) throw IngestionError("mask must be 0 or 1", row_no);
        rows.push_back(r);
    }
    if (rows.empty()) throw IngestionError("grid file has no data rows", row_no);

    std::vector<double> xs, ys, zs;
    for (const auto& r : rows) {
        xs.push_back(r.v[0]);
        ys.push_back(r.v[1]);
        zs.push_back(r.v[2]);
    }
    const auto ax = axis_values(xs, "x");
    const auto ay = axis_values(ys, "y");
    const auto az = axis_values(zs, "z");

    FieldGrid g;
    g.dims = {ax.size(), ay.size(), az.size()};
    g.origin = {ax.front(), ay.front(), az.front()};
    g.spacing = {(ax.back() - ax.front()) / (ax.size() - 1), (ay.back() - ay.front()) / (ay.size() - 1),
                 (az.back() - az.front()) / (az.size() - 1)};
    const std::size_t n = g.voxel_count();
    if (rows.size() != n) {
        throw IngestionError("lattice " + std::to_string(g.dims[0]) + "x" +
                             std::to_string(g.dims[1]) + "x" + std::to_string(g.dims[2]) +
                             " needs " + std::to_string(n) + " rows, found " +
                             std::to_string(rows.size()));
    }
    g.e_qubit.assign(n, Vec3c{});
    g.e_cavity.assign(n, Vec3c{});
    g.mask.assign(n, 0);
    std::vector<std::uint8_t> filled(n, 0);
    for (const auto& r : rows) {
        const std::size_t idx =
            g.index(axis_index(ax, r.v[0]), axis_index(ay, r.v[1]), axis_index(az, r.v[2]));
        if (filled[idx]) throw IngestionError("duplicate lattice point", r.source_row);
        filled[idx] = 1;
        for (int c = 0; c < 6; ++c) {
            component(g.e_qubit[idx], c) = r.v[3 + c];
            component(g.e_cavity[idx], c) = r.v[9 + c];
        }
        g.mask[idx] = r.v[15] != 0.0;
    }
    return g;
}

void write_field_grid_csv(std::ostream& out, const FieldGrid& g) {
    out << kHeader << '\n';
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t idx = 0; idx < g.voxel_count(); ++idx) {
        const auto p = g.position(idx);
        for (int a = 0; a < 3; ++a) {
            num(p[a]);
            out << ',';
        }
        Vec3c q = g.e_qubit[idx], c = g.e_cavity[idx];
        for (int k = 0; k < 6; ++k) {
            num(component(q, k));
            out << ',';
        }
        for (int k = 0; k < 6; ++k) {
            num(component(c, k));
            out << ',';
        }
        out << (g.mask[idx] ? 1 : 0) << '\n';
    }
}

FieldGrid read_field_grid_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kGridMagic, 4) != 0) {
        throw IngestionError("binary grid has a bad magic tag");
    }
    FieldGrid g;
    for (int a = 0; a < 3; ++a) g.dims[a] = get<std::uint32_t>(in);
    for (int a = 0; a < 3; ++a) g.origin[a] = get<double>(in);
    for (int a = 0; a < 3; ++a) g.spacing[a] = get<double>(in);
    const std::size_t n = g.voxel_count();
    if (n == 0) throw IngestionError("binary grid has a zero dimension");
    g.e_qubit.assign(n, Vec3c{});
    g.e_cavity.assign(n, Vec3c{});
    for (int col = 0; col < 12; ++col) {
        auto& field = col < 6 ? g.e_qubit : g.e_cavity;
        for (std::size_t i = 0; i < n; ++i) component(field[i], col % 6) = get<double>(in);
    }
    g.mask.resize(n);
    in.read(reinterpret_cast<char*>(g.mask.data()), static_cast<std::streamsize>(n));
    if (!in) throw IngestionError("binary grid is truncated");
    if (in.peek() != std::char_traits<char>::eof()) {
        throw IngestionError("binary grid has trailing bytes");
    }
    for (auto& m : g.mask) {
        if (m > 1) throw IngestionError("binary grid mask must be 0 or 1");
    }
    return g;
}

void write_field_grid_binary(std::ostream& out, const FieldGrid& g) {
    out.write(kGridMagic, 4);
    for (int a = 0; a < 3; ++a) put(out, static_cast<std::uint32_t>(g.dims[a]));
    for (int a = 0; a < 3; ++a) put(out, g.origin[a]);
    for (int a = 0; a < 3; ++a) put(out, g.spacing[a]);
    for (int col = 0; col < 12; ++col) {
        const auto& field = col < 6 ? g.e_qubit : g.e_cavity;
        for (const auto& e : field) {
            Vec3c copy = e;
            put(out, component(copy, col % 6));
        }
    }
    out.write(reinterpret_cast<const char*>(g.mask.data()),
              static_cast<std::streamsize>(g.mask.size()));
}

FieldGrid read_field_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open grid file " + path);
    char magic[4] = {};
    in.read(magic, 4);
    in.clear();
    in.seekg(0);
    FieldGrid g = std::memcmp(magic, kGridMagic, 4) == 0 ? read_field_grid_binary(in)
                                                         : read_field_grid_csv(in);
    validate(g);
    return g;
}

}  // namespace purcellsim
