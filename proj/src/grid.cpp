#include "tpmpm/grid.hpp"

#include <string>

#include "tpmpm/error.hpp"

namespace tpmpm {

double TwoPhaseNodeFields::porosity() const {
  return volume > 0.0 ? porosity_volume / volume : 0.0;
}

double TwoPhaseNodeFields::permeability() const {
  return volume > 0.0 ? permeability_volume / volume : 0.0;
}

BackgroundGrid::BackgroundGrid(Vec2 origin, double cell_size, int nx, int ny)
    : origin_(std::move(origin)), h_(cell_size), nx_(nx), ny_(ny) {
  if (!(cell_size > 0.0))
    throw ConfigError("grid.cell_size must be positive, got " +
                      std::to_string(cell_size));
  if (nx < 1 || ny < 1)
    throw ConfigError("grid.nx and grid.ny must be >= 1, got " +
                      std::to_string(nx) + " x " + std::to_string(ny));
  const auto n = static_cast<std::size_t>(nx + 1) *
                 static_cast<std::size_t>(ny + 1);
  nodes_.resize(n);
  constraints_.resize(n);
}

bool BackgroundGrid::contains(const Vec2& x) const noexcept {
  const Vec2 hi = upper_corner();
  return x.x() >= origin_.x() && x.y() >= origin_.y() && x.x() <= hi.x() &&
         x.y() <= hi.y();
}

void BackgroundGrid::reset() {
  for (auto& n : nodes_) n = GridNode{};
}

BackgroundGrid build_grid(Vec2 origin, double cell_size, int nx, int ny) {
  return BackgroundGrid(std::move(origin), cell_size, nx, ny);
}

}  // namespace tpmpm
