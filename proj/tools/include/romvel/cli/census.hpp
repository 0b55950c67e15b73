#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace romvel::cli {

struct LocalMinimum {
  int i = 0;  // representative cell: first of the plateau in row-major order
  int j = 0;
  double value = 0.0;
  bool interior = false;  // no plateau cell on the grid edge
  std::vector<std::pair<int, int>> cells;
};

struct Census {
  std::vector<LocalMinimum> minima;

  int count() const { return static_cast<int>(minima.size()); }
  int interior_count() const;
};

/// Local minima of a sampled surface. Cells joined through 8-neighbour links
/// with exactly equal values form one plateau; a plateau is a minimum when
/// every cell adjacent to it is strictly larger. NaN compares as +inf and
/// non-finite plateaus are never reported.
Census local_minima(const Eigen::MatrixXd& values);

}  // namespace romvel::cli
