#pragma once

// Port-placement figure of merit from co-registered qubit-mode and
// cavity-mode electric fields on a rectilinear grid:
//
//     metric = |E_q . conj(E_c)| / (E_c . conj(E_c))
//
// Good readout-port locations have a weak qubit field and a strong cavity
// field, so candidate regions are the 6-connected voxel sets with low metric
// and high |E_c|^2.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace purcellsim {

using Vec3c = std::array<std::complex<double>, 3>;

struct FieldGrid {
    std::array<std::size_t, 3> dims{};     // nx, ny, nz
    std::array<double, 3> spacing{};       // m
    std::array<double, 3> origin{};        // m
    std::vector<Vec3c> e_qubit;            // x-fastest: i + nx * (j + ny * k)
    std::vector<Vec3c> e_cavity;
    std::vector<std::uint8_t> mask;        // 1 = vacuum voxel that counts

    std::size_t voxel_count() const { return dims[0] * dims[1] * dims[2]; }
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return i + dims[0] * (j + dims[1] * k);
    }
    std::array<double, 3> position(std::size_t idx) const;
    double voxel_volume() const { return spacing[0] * spacing[1] * spacing[2]; }
};

// Throws IngestionError for inconsistent sizes or nonpositive spacing, and
// DegenerateFieldError when no voxel is unmasked.
void validate(const FieldGrid& g);

struct PortRegion {
    std::vector<std::size_t> voxels;       // ascending voxel indices
    double score;                          // max metric (min mode) or min metric (max mode)
    std::array<double, 3> centroid;        // m
    double volume;                         // m^3
    double mean_cavity_energy;             // mean |E_c|^2 over the region
};

struct OverlapMap {
    std::vector<double> metric;            // NaN where masked or undefined
    std::vector<std::uint8_t> defined;
    std::vector<double> cavity_energy;     // |E_c|^2 per voxel
    std::vector<PortRegion> candidate_regions;
    std::string diagnostic;
};

// |E_c|^2 below this fraction of the grid maximum leaves the metric undefined.
inline constexpr double kFieldEpsilon = 1e-6;

// Throws DegenerateFieldError when every unmasked voxel is undefined.
OverlapMap overlap_metric(const FieldGrid& g);

struct RankOptions {
    enum class Mode { min, max };
    Mode mode = Mode::min;
    double metric_quantile = 0.05;   // q0
    double energy_quantile = 0.5;    // q1
};

// Gates voxels on the metric quantile and the |E_c|^2 quantile, labels
// 6-connected regions, drops those below min_volume and ranks the rest
// (min mode: ascending max metric, then larger mean |E_c|^2).
OverlapMap rank_port_regions(OverlapMap m, const FieldGrid& g, double min_volume,
                             const RankOptions& opt = {});

// Linear-interpolation quantile of the values (sorted copy), q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace purcellsim
