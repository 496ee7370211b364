#pragma once

#include <array>
#include <numbers>
#include <string>

#include "nonlocal/box.hpp"
#include "nonlocal/correlations.hpp"

namespace nonlocal {

/// The bound hierarchy on the CHSH sum of correlators.
inline constexpr double kLocalBound = 2.0;
inline constexpr double kQuantumBound = 2.0 * std::numbers::sqrt2;
inline constexpr double kNoSignalingBound = 4.0;

enum class BoundClass { Local, QuantumOnly, SuperquantumOnly, Impossible };

std::string to_string(BoundClass c);

/// E(A,B) + E(A,B') + E(A',B) - E(A',B'). Each input must lie in [-1, 1];
/// the result then lies in [-4, 4].
double chsh_value(double e_ab, double e_abp, double e_apb, double e_apbp);

/// chsh_value over the box's four correlators with x = 0 -> A, x = 1 -> A',
/// y = 0 -> B, y = 1 -> B'.
double chsh_of_box(const ConditionalBox& box);

/// Equivalent to chsh_of_box(box_at_angles(model, axes)).
double chsh_from_model(const CorrelationModel& model,
                       const AxisConfiguration& axes);

/// Classifies |s| against the hierarchy, boundaries inclusive downward:
/// |s| = 2 is Local, |s| = 2 sqrt 2 is QuantumOnly, |s| = 4 is
/// SuperquantumOnly.
BoundClass classify(double s);

/// The 16 local deterministic boxes p(a,b|x,y) = [a = f(x)][b = g(y)],
/// ordered by the bit pattern (f(0), f(1), g(0), g(1)) with 0 -> +1, 1 -> -1.
const std::array<ConditionalBox, 16>& deterministic_vertices();

/// One of the eight sign orientations of the CHSH expression. Exactly the
/// orientations with an odd number of minus signs are facets of the local
/// polytope.
struct ChshVariant {
  std::array<int, 4> signs;  // applied to (E00, E01, E10, E11)
  double value;
};

const std::array<std::array<int, 4>, 8>& chsh_sign_variants();

/// Evaluates every sign variant on the box and returns the one with the
/// largest value.
ChshVariant max_chsh_variant(const ConditionalBox& box);

struct LocalityCertificate {
  bool is_local;
  /// Weights over deterministic_vertices(), meaningful iff is_local.
  std::array<double, 16> weights;
  /// Max entrywise gap between the box and the recombined weighted sum,
  /// meaningful iff is_local.
  double recombination_error;
  /// The maximally violated orientation, meaningful iff !is_local.
  ChshVariant violated;
};

/// Decides membership of the box in the convex hull of the deterministic
/// vertices by a nonnegative least-squares feasibility solve. On success the
/// returned weights recombine to the box within tol; on failure the most
/// violated CHSH orientation is reported. Throws std::invalid_argument on an
/// invalid box.
LocalityCertificate is_local(const ConditionalBox& box,
                             double tol = kDefaultTol);

struct AxisSearchResult {
  AxisConfiguration axes;
  double value;
};

/// Deterministic maximization of the CHSH value over planar axis
/// configurations: coarse grid (step pi/180) over the three successive
/// relative angles, then pattern-search refinement down to step 1e-6. Ties
/// break toward the lexicographically smallest angle triple.
AxisSearchResult max_chsh_over_axes(const CorrelationModel& model);

}  // namespace nonlocal
