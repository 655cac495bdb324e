#include "purcellsim/field_overlap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "purcellsim/errors.hpp"

namespace purcellsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double energy(const Vec3c& e) { return std::norm(e[0]) + std::norm(e[1]) + std::norm(e[2]); }

std::complex<double> inner(const Vec3c& a, const Vec3c& b) {
    return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

}  // namespace

std::array<double, 3> FieldGrid::position(std::size_t idx) const {
    const std::size_t i = idx % dims[0];
    const std::size_t j = (idx / dims[0]) % dims[1];
    const std::size_t k = idx / (dims[0] * dims[1]);
    return {origin[0] + i * spacing[0], origin[1] + j * spacing[1], origin[2] + k * spacing[2]};
}

void validate(const FieldGrid& g) {
    for (int a = 0; a < 3; ++a) {
        if (g.dims[a] == 0) throw IngestionError("grid dimension is zero");
        if (!(g.spacing[a] > 0.0) || !std::isfinite(g.spacing[a])) {
            throw IngestionError("grid spacing must be positive");
        }
    }
    const std::size_t n = g.voxel_count();
    if (g.e_qubit.size() != n || g.e_cavity.size() != n || g.mask.size() != n) {
        throw IngestionError("qubit field, cavity field and mask must share the grid shape");
    }
    if (std::none_of(g.mask.begin(), g.mask.end(), [](std::uint8_t m) { return m != 0; })) {
        throw DegenerateFieldError("every voxel is masked out");
    }
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw ValidationError("quantile of an empty set");
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double t = pos - static_cast<double>(lo);
    return values[lo] + t * (values[hi] - values[lo]);
}

OverlapMap overlap_metric(const FieldGrid& g) {
    validate(g);
    const std::size_t n = g.voxel_count();
    OverlapMap m;
    m.metric.assign(n, kNaN);
    m.defined.assign(n, 0);
    m.cavity_energy.assign(n, kNaN);

    double max_energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.mask[i]) continue;
        m.cavity_energy[i] = energy(g.e_cavity[i]);
        max_energy = std::max(max_energy, m.cavity_energy[i]);
    }
    const double floor = kFieldEpsilon * max_energy;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.mask[i] || !(m.cavity_energy[i] > 0.0) || m.cavity_energy[i] < floor) continue;
        m.metric[i] = std::abs(inner(g.e_qubit[i], g.e_cavity[i])) / m.cavity_energy[i];
        m.defined[i] = 1;
        ++count;
    }
    if (count == 0) throw DegenerateFieldError("cavity field vanishes on every unmasked voxel");
    return m;
}

OverlapMap rank_port_regions(OverlapMap m, const FieldGrid& g, double min_volume,
                             const RankOptions& opt) {
    validate(g);
    const std::size_t n = g.voxel_count();
    if (m.metric.size() != n || m.defined.size() != n || m.cavity_energy.size() != n) {
        throw ValidationError("overlap map does not match the grid");
    }
    std::vector<double> metrics, energies;
    for (std::size_t i = 0; i < n; ++i) {
        if (!m.defined[i]) continue;
        metrics.push_back(m.metric[i]);
        energies.push_back(m.cavity_energy[i]);
    }
    if (metrics.empty()) throw DegenerateFieldError("no defined voxels to rank");

    const bool min_mode = opt.mode == RankOptions::Mode::min;
    const double metric_gate =
        quantile(metrics, min_mode ? opt.metric_quantile : 1.0 - opt.metric_quantile);
    const double energy_gate = quantile(energies, opt.energy_quantile);

    std::vector<std::uint8_t> selected(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!m.defined[i] || m.cavity_energy[i] < energy_gate) continue;
        selected[i] = min_mode ? m.metric[i] <= metric_gate : m.metric[i] >= metric_gate;
    }

    // 6-connected labeling, breadth first, seeds in ascending voxel order.
    const auto [nx, ny, nz] = g.dims;
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<PortRegion> regions;
    std::size_t rejected = 0;
    std::deque<std::size_t> queue;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!selected[seed] || seen[seed]) continue;
        PortRegion r{};
        seen[seed] = 1;
        queue.push_back(seed);
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            r.voxels.push_back(v);
            const std::size_t i = v % nx, j = (v / nx) % ny, k = v / (nx * ny);
            auto visit = [&](std::size_t w) {
                if (selected[w] && !seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
            };
            if (i > 0) visit(v - 1);
            if (i + 1 < nx) visit(v + 1);
            if (j > 0) visit(v - nx);
            if (j + 1 < ny) visit(v + nx);
            if (k > 0) visit(v - nx * ny);
            if (k + 1 < nz) visit(v + nx * ny);
        }
        std::sort(r.voxels.begin(), r.voxels.end());
        r.volume = static_cast<double>(r.voxels.size()) * g.voxel_volume();
        if (r.volume < min_volume) {
            ++rejected;
            continue;
        }
        r.score = min_mode ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
        std::array<double, 3> sum{};
        double energy_sum = 0.0;
        for (std::size_t v : r.voxels) {
            r.score = min_mode ? std::max(r.score, m.metric[v]) : std::min(r.score, m.metric[v]);
            const auto p = g.position(v);
            for (int a = 0; a < 3; ++a) sum[a] += p[a];
            energy_sum += m.cavity_energy[v];
        }
        const double count = static_cast<double>(r.voxels.size());
        for (int a = 0; a < 3; ++a) r.centroid[a] = sum[a] / count;
        r.mean_cavity_energy = energy_sum / count;
        regions.push_back(std::move(r));
    }

    std::stable_sort(regions.begin(), regions.end(),
                     [min_mode](const PortRegion& a, const PortRegion& b) {
                         if (a.score != b.score) return min_mode ? a.score < b.score
                                                                 : a.score > b.score;
                         return a.mean_cavity_energy > b.mean_cavity_energy;
                     });
    m.candidate_regions = std::move(regions);
    if (m.candidate_regions.empty()) {
        m.diagnostic = rejected > 0 ? "no candidate region reaches the minimum volume (" +
                                          std::to_string(rejected) + " smaller regions dropped)"
                                    : "no voxel passes the metric and cavity-energy gates";
    }
    return m;
}

}  // namespace purcellsim
