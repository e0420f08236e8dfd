#include "gammalab/field.hpp"

#include <cmath>
#include <cstdio>

#include "gammalab/errors.hpp"

namespace gammalab {

BinaryField rasterize(const ShapeSpec& shape, const TorusGrid& grid) {
  require(shape.dim == grid.dim, ErrorCode::dimension_mismatch,
          "rasterize: shape and grid dimensions differ");
  BinaryField f;
  f.grid = grid;
  f.bits.assign(grid.cell_count(), 0);
  const int n = grid.samples;
  const double h = grid.cell();
  std::int64_t ones = 0;
  if (grid.dim == 2) {
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j, ++idx) {
        std::array<double, 3> p{(i + 0.5) * h, (j + 0.5) * h, 0.0};
        if (shape_contains(shape, p)) {
          f.bits[idx] = 1;
          ++ones;
        }
      }
  } else {
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k, ++idx) {
          std::array<double, 3> p{(i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h};
          if (shape_contains(shape, p)) {
            f.bits[idx] = 1;
            ++ones;
          }
        }
  }
  f.ones = ones;
  return f;
}

BinaryField field_complement(const BinaryField& f) {
  BinaryField g = f;
  for (auto& b : g.bits) b = b ? 0 : 1;
  g.ones = f.grid.cell_count() - f.ones;
  return g;
}

BinaryField field_shift(const BinaryField& f, const std::array<int, 3>& cells) {
  const int n = f.grid.samples;
  auto wrap = [n](int v) {
    int w = v % n;
    return w < 0 ? w + n : w;
  };
  BinaryField g;
  g.grid = f.grid;
  g.ones = f.ones;
  g.bits.assign(f.bits.size(), 0);
  if (f.grid.dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g.bits[(std::size_t)wrap(i + cells[0]) * n + wrap(j + cells[1])] =
            f.at(i, j);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          g.bits[((std::size_t)wrap(i + cells[0]) * n + wrap(j + cells[1])) * n +
                 wrap(k + cells[2])] = f.at(i, j, k);
  }
  return g;
}

PerimeterEstimate l1_interface_perimeter(const BinaryField& f) {
  const int n = f.grid.samples;
  std::int64_t flips = 0;
  if (f.grid.dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::uint8_t c = f.at(i, j);
        flips += (c != f.at((i + 1) % n, j));
        flips += (c != f.at(i, (j + 1) % n));
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          std::uint8_t c = f.at(i, j, k);
          flips += (c != f.at((i + 1) % n, j, k));
          flips += (c != f.at(i, (j + 1) % n, k));
          flips += (c != f.at(i, j, (k + 1) % n));
        }
  }
  double area = std::pow(f.grid.cell(), f.grid.dim - 1) * flips;
  return PerimeterEstimate{area, PerimeterMethod::l1_count, 0.0};
}

std::uint64_t field_checksum(const BinaryField& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint8_t b : f.bits) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

void write_pgm(const BinaryField& f, const std::string& path) {
  require(f.grid.dim == 2, ErrorCode::invalid_argument,
          "write_pgm: 2D fields only");
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  require(fp != nullptr, ErrorCode::io_error, "write_pgm: cannot open " + path);
  const int n = f.grid.samples;
  std::fprintf(fp, "P2\n%d %d\n1\n", n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      std::fprintf(fp, j + 1 < n ? "%d " : "%d", int(f.at(i, j)));
    std::fprintf(fp, "\n");
  }
  std::fclose(fp);
}

}  // namespace gammalab
