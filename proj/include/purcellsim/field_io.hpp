#pragma once

// Field-grid ingestion.
//
// CSV: header
//   x_m,y_m,z_m,eqx_re,eqx_im,eqy_re,eqy_im,eqz_re,eqz_im,
//   ecx_re,ecx_im,ecy_re,ecy_im,ecz_re,ecz_im,mask
// one row per lattice point, any order. The points must form a complete
// uniform rectilinear lattice with at least two samples per axis.
//
// Binary (little-endian, 64-byte header):
//   offset  0  char[4]  magic "PFG1"
//   offset  4  u32      nx
//   offset  8  u32      ny
//   offset 12  u32      nz
//   offset 16  f64[3]   origin x, y, z (m)
//   offset 40  f64[3]   spacing x, y, z (m)
//   offset 64  f64[nvox] x 12 columns in CSV order (eqx_re ... ecz_im),
//              then u8[nvox] mask; voxels x-fastest.

#include <iosfwd>
#include <string>

#include "purcellsim/field_overlap.hpp"

namespace purcellsim {

inline constexpr char kGridMagic[4] = {'P', 'F', 'G', '1'};
inline constexpr std::size_t kGridHeaderBytes = 64;

FieldGrid read_field_grid_csv(std::istream& in);
void write_field_grid_csv(std::ostream& out, const FieldGrid& g);

FieldGrid read_field_grid_binary(std::istream& in);
void write_field_grid_binary(std::ostream& out, const FieldGrid& g);

// Dispatches on the magic bytes. Throws IngestionError for unreadable files.
FieldGrid read_field_grid(const std::string& path);

}  // namespace purcellsim
