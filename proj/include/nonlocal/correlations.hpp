#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nonlocal/box.hpp"

namespace nonlocal {

enum class ModelKind { ClassicalLinear, QuantumCosine, Superquantum, Tabulated };

/// Reduces an arbitrary finite angle to the relative angle between two axes,
/// i.e. to [0, pi]: first |theta| mod 2pi, then min(theta, 2pi - theta).
double reduce_angle(double theta);

/// An angle-parameterized correlation function theta -> E(theta) in [-1, 1].
///
/// Three fixed families:
///   classical     E(theta) = 1 - 2 theta / pi
///   quantum       E(theta) = cos theta
///   superquantum  E(theta) = 1 on [0, pi/4], sin 2theta on [pi/4, 3pi/4],
///                 -1 on [3pi/4, pi]
///
/// All three satisfy E(0) = 1, E(pi) = -1 and the antisymmetry
/// E(pi - theta) = -E(theta).
class CorrelationModel {
 public:
  static CorrelationModel classical();
  static CorrelationModel quantum();
  static CorrelationModel superquantum();

  /// Experimental: piecewise-linear interpolation through (theta, E) knots on
  /// [0, pi]. No antisymmetry or range guarantees beyond what the table
  /// provides; exposed as a hook for user-supplied curves.
  static CorrelationModel tabulated(std::vector<std::pair<double, double>> knots);

  /// Accepts "classical", "quantum", "superquantum".
  static CorrelationModel from_name(std::string_view name);

  ModelKind kind() const { return kind_; }
  std::string name() const;

  /// E at the reduced relative angle. Throws std::invalid_argument on a
  /// non-finite theta.
  double eval(double theta) const;

 private:
  explicit CorrelationModel(ModelKind kind) : kind_(kind) {}

  ModelKind kind_;
  std::vector<std::pair<double, double>> knots_;
};

/// Max over a uniform grid on [0, pi] of |E(pi - theta) + E(theta)|.
double antisymmetry_residual(const CorrelationModel& model, int grid_size);

/// Measurement axes in a plane, stored in the paper's listing order. Only
/// relative angles matter to any correlator.
struct AxisConfiguration {
  double a_prime;
  double b;
  double a;
  double b_prime;

  /// Successive spacing by `step` in listing order: a' = 0, b = step,
  /// a = 2 step, b' = 3 step. step = pi/4 is the layout behind the bound
  /// hierarchy.
  static AxisConfiguration spaced(double step);
};

/// The box whose four correlators are E at the relative angles between
/// Alice's axes {a, a'} and Bob's axes {b, b'}, with x = 0 -> a, x = 1 -> a',
/// y = 0 -> b, y = 1 -> b'.
ConditionalBox box_at_angles(const CorrelationModel& model,
                             const AxisConfiguration& axes);

}  // namespace nonlocal
