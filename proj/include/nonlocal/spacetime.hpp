#pragma once

#include <cmath>
#include <string>

namespace nonlocal {

/// A point in 1+1D Minkowski space, units with c = 1.
struct SpacetimeEvent {
  double t;
  double x;

  bool operator==(const SpacetimeEvent&) const = default;
};

enum class IntervalClass { Timelike, Lightlike, Spacelike };

std::string to_string(IntervalClass c);

/// Sign of the squared interval (dt)^2 - (dx)^2.
inline IntervalClass interval_class(const SpacetimeEvent& e1,
                                    const SpacetimeEvent& e2) {
  const double dt = e2.t - e1.t;
  const double dx = e2.x - e1.x;
  const double s2 = dt * dt - dx * dx;
  if (s2 > 0.0) return IntervalClass::Timelike;
  if (s2 < 0.0) return IntervalClass::Spacelike;
  return IntervalClass::Lightlike;
}

/// Closed forward cone: the boundary counts as inside.
inline bool in_forward_cone(const SpacetimeEvent& p,
                            const SpacetimeEvent& apex) {
  return p.t - apex.t >= std::abs(p.x - apex.x);
}

/// In 1+1D the intersection of two forward cones is itself a forward cone;
/// this returns its apex (the earliest point lying in both cones).
SpacetimeEvent forward_cone_intersection_apex(const SpacetimeEvent& a,
                                              const SpacetimeEvent& b);

/// True iff the overlap of the forward cones of a and b lies entirely within
/// the forward cone of j. In 1+1D this reduces to apex containment.
inline bool binary_condition(const SpacetimeEvent& a, const SpacetimeEvent& b,
                             const SpacetimeEvent& j) {
  return in_forward_cone(forward_cone_intersection_apex(a, b), j);
}

}  // namespace nonlocal
