#include "romvel/cli/census.hpp"

#include <cmath>
#include <limits>

namespace romvel::cli {

int Census::interior_count() const {
  int out = 0;
  for (const auto& m : minima) out += m.interior ? 1 : 0;
  return out;
}

Census local_minima(const Eigen::MatrixXd& raw) {
  const int rows = static_cast<int>(raw.rows());
  const int cols = static_cast<int>(raw.cols());
  Eigen::MatrixXd values = raw;
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (std::isnan(values.data()[k])) values.data()[k] = std::numeric_limits<double>::infinity();

  Census census;
  Eigen::MatrixXi label = Eigen::MatrixXi::Constant(rows, cols, -1);
  int next = 0;
  for (int i0 = 0; i0 < rows; ++i0) {
    for (int j0 = 0; j0 < cols; ++j0) {
      if (label(i0, j0) >= 0) continue;
      const double v = values(i0, j0);
      std::vector<std::pair<int, int>> plateau{{i0, j0}};
      label(i0, j0) = next;
      bool minimum = true;
      for (std::size_t head = 0; head < plateau.size(); ++head) {
        const auto [i, j] = plateau[head];
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const int a = i + di;
            const int b = j + dj;
            if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= rows || b >= cols) continue;
            if (values(a, b) == v) {
              if (label(a, b) < 0) {
                label(a, b) = next;
                plateau.emplace_back(a, b);
              }
            } else if (values(a, b) < v) {
              minimum = false;
            }
          }
        }
      }
      ++next;
      if (!minimum || !std::isfinite(v)) continue;
      LocalMinimum m;
      m.i = i0;
      m.j = j0;
      m.value = v;
      m.interior = true;
      for (const auto& [i, j] : plateau)
        if (i == 0 || j == 0 || i == rows - 1 || j == cols - 1) m.interior = false;
      m.cells = std::move(plateau);
      census.minima.push_back(std::move(m));
    }
  }
  return census;
}

}  // namespace romvel::cli
