#pragma once

#include <cstdint>

#include "gammalab/errors.hpp"

namespace gammalab {

/// Uniform periodic grid on the unit flat torus, N cells per axis.
struct TorusGrid {
  int dim = 2;       // 2 or 3
  int samples = 16;  // N, power of two, 16..4096

  double cell() const { return 1.0 / samples; }
  std::int64_t cell_count() const {
    std::int64_t c = samples;
    for (int d = 1; d < dim; ++d) c *= samples;
    return c;
  }
  bool operator==(const TorusGrid&) const = default;
};

/// Validates n in {2,3} and N a power of two in [16, 4096] (keeps circular
/// convolution sizes uniform).
TorusGrid make_grid(int dim, int samples);

}  // namespace gammalab
