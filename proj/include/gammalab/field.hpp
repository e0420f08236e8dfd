#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gammalab/geometry.hpp"
#include "gammalab/shapes.hpp"

namespace gammalab {

/// {0,1}-valued function sampled at cell centers of a periodic grid.
/// Immutable in normal use; the annealer mutates its own working copy.
struct BinaryField {
  TorusGrid grid;
  std::vector<std::uint8_t> bits;  // row-major, size N^n
  std::int64_t ones = 0;

  double volume_fraction() const {
    return static_cast<double>(ones) / static_cast<double>(grid.cell_count());
  }

  std::uint8_t at(int i, int j) const { return bits[(std::size_t)i * grid.samples + j]; }
  std::uint8_t at(int i, int j, int k) const {
    return bits[((std::size_t)i * grid.samples + j) * grid.samples + k];
  }
};

/// Samples `shape` at cell centers: bits[x] = 1 iff the center lies in the
/// shape. Volume error is bounded by perimeter * sqrt(n) * h.
BinaryField rasterize(const ShapeSpec& shape, const TorusGrid& grid);

BinaryField field_complement(const BinaryField& f);

/// Circular shift by an integer number of cells per axis.
BinaryField field_shift(const BinaryField& f, const std::array<int, 3>& cells);

/// Anisotropic l1 interface measure: h^{n-1} times the number of axis-adjacent
/// cell pairs with differing values. Diagnostic only; overestimates Euclidean
/// perimeter of smooth shapes by up to 4/pi in 2D.
PerimeterEstimate l1_interface_perimeter(const BinaryField& f);

/// FNV-1a over the bit string; used for trajectory checksums.
std::uint64_t field_checksum(const BinaryField& f);

/// Writes a P2 portable graymap with values 0/1 (2D fields only).
void write_pgm(const BinaryField& f, const std::string& path);

}  // namespace gammalab
