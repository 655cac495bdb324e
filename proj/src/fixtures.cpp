#include "purcellsim/fixtures.hpp"

#include <random>

#include "purcellsim/errors.hpp"

namespace purcellsim {

std::array<double, 3> ShadowBlock::centroid_index() const {
    return {0.5 * (lo[0] + hi[0] - 1.0), 0.5 * (lo[1] + hi[1] - 1.0), 0.5 * (lo[2] + hi[2] - 1.0)};
}

PlantedShadowSpec default_planted_shadow(std::size_t n, std::uint64_t seed) {
    PlantedShadowSpec s;
    s.n = n;
    s.seed = seed;
    const std::size_t side = (24 * n + 63) / 64;
    const std::size_t a = n / 5, b = (2 * n) / 5, c = n / 4;
    s.blocks.push_back({{a, b, c}, {a + side, b + side, c + side}, 3.0});
    return s;
}

FieldGrid planted_shadow_grid(const PlantedShadowSpec& spec) {
    if (spec.n < 2) throw ValidationError("fixture grid needs n >= 2");
    for (const auto& b : spec.blocks) {
        for (int a = 0; a < 3; ++a) {
            if (b.lo[a] >= b.hi[a] || b.hi[a] > spec.n) {
                throw ValidationError("shadow block outside the grid");
            }
        }
    }
    FieldGrid g;
    g.dims = {spec.n, spec.n, spec.n};
    g.spacing = {spec.spacing, spec.spacing, spec.spacing};
    g.origin = {0.0, 0.0, 0.0};
    const std::size_t count = g.voxel_count();
    g.e_qubit.resize(count);
    g.e_cavity.resize(count);
    g.mask.assign(count, 1);

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> amp(0.5, 1.5);
    std::uniform_real_distribution<double> comp(-1.0, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        g.e_cavity[i] = {std::complex<double>(amp(rng), 0.0), 0.0, 0.0};
        for (auto& c : g.e_qubit[i]) c = {comp(rng), comp(rng)};
        // Keep the background metric well away from zero.
        g.e_qubit[i][0] += std::complex<double>(0.5, 0.0);
    }
    for (const auto& b : spec.blocks) {
        for (std::size_t k = b.lo[2]; k < b.hi[2]; ++k) {
            for (std::size_t j = b.lo[1]; j < b.hi[1]; ++j) {
                for (std::size_t i = b.lo[0]; i < b.hi[0]; ++i) {
                    const std::size_t idx = g.index(i, j, k);
                    g.e_qubit[idx] = {};
                    g.e_cavity[idx] = {std::complex<double>(b.cavity_amplitude, 0.0), 0.0, 0.0};
                }
            }
        }
    }
    return g;
}

}  // namespace purcellsim
