#include "subnav/grid.hpp"

#include <cmath>

namespace subnav {

double SemanticGrid::diagonal() const {
  return std::hypot(static_cast<double>(width_), static_cast<double>(height_));
}

}  // namespace subnav
