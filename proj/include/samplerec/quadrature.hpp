// Measure-space descriptor and composite-midpoint quadrature on [0,1].
#pragma once

#include <functional>
#include <stdexcept>

#include "samplerec/types.hpp"

namespace samplerec {

enum class DomainKind { unit_interval, torus };
enum class MeasureKind { lebesgue };

/// One-dimensional measure space: [0,1] or the unit torus with the Lebesgue
/// measure, integrated by the composite midpoint rule on a uniform grid.
struct MeasureSpaceDescriptor {
  DomainKind domain = DomainKind::unit_interval;
  MeasureKind measure = MeasureKind::lebesgue;
  Index quadrature_nodes = 4096;

  void validate() const {
    if (quadrature_nodes < 64)
      throw std::invalid_argument("MeasureSpaceDescriptor: quadrature_nodes must be >= 64");
  }

  double node(Index i) const {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(quadrature_nodes);
  }
  double node_weight() const { return 1.0 / static_cast<double>(quadrature_nodes); }
  double total_mass() const { return 1.0; }

  /// Maps a point into the canonical domain. Torus points wrap; interval
  /// points must already lie in [0,1].
  double canonical(double x) const {
    if (domain == DomainKind::torus) {
      double y = x - std::floor(x);
      return (y == 1.0) ? 0.0 : y;
    }
    if (x < 0.0 || x > 1.0)
      throw std::invalid_argument("point outside [0,1]");
    return x;
  }

  bool contains(double x) const {
    if (domain == DomainKind::torus) return std::isfinite(x);
    return x >= 0.0 && x <= 1.0;
  }
};

/// Composite-midpoint integral of f over the domain.
template <typename F>
double integrate(const MeasureSpaceDescriptor& space, F&& f) {
  double acc = 0.0;
  const double w = space.node_weight();
  for (Index i = 0; i < space.quadrature_nodes; ++i) acc += f(space.node(i));
  return acc * w;
}

}  // namespace samplerec
