#pragma once

// Synthetic field grids with known answers.

#include <array>
#include <cstdint>
#include <vector>

#include "purcellsim/field_overlap.hpp"

namespace purcellsim {

// Voxel box [lo, hi) where E_q = 0 and E_c = cavity_amplitude * x-hat.
struct ShadowBlock {
    std::array<std::size_t, 3> lo;
    std::array<std::size_t, 3> hi;
    double cavity_amplitude = 3.0;

    std::array<double, 3> centroid_index() const;
};

// Background: E_c = a x-hat with a uniform in [0.5, 1.5] and E_q a random
// complex vector of comparable size, both seeded. All voxels unmasked.
struct PlantedShadowSpec {
    std::size_t n = 64;
    double spacing = 1e-4;   // m
    std::vector<ShadowBlock> blocks;
    std::uint64_t seed = 1;
};

// One 24^3 block (5.3% of a 64^3 grid) off-center.
PlantedShadowSpec default_planted_shadow(std::size_t n = 64, std::uint64_t seed = 1);

FieldGrid planted_shadow_grid(const PlantedShadowSpec& spec);

}  // namespace purcellsim
