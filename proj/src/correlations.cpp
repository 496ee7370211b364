#include "nonlocal/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nonlocal {

namespace {
constexpr double kPi = std::numbers::pi;
}

double reduce_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("reduce_angle: theta must be finite");
  }
  double t = std::fmod(std::abs(theta), 2.0 * kPi);
  return std::min(t, 2.0 * kPi - t);
}

CorrelationModel CorrelationModel::classical() {
  return CorrelationModel(ModelKind::ClassicalLinear);
}

CorrelationModel CorrelationModel::quantum() {
  return CorrelationModel(ModelKind::QuantumCosine);
}

CorrelationModel CorrelationModel::superquantum() {
  return CorrelationModel(ModelKind::Superquantum);
}

CorrelationModel CorrelationModel::tabulated(
    std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) {
    throw std::invalid_argument("tabulated model needs at least two knots");
  }
  std::sort(knots.begin(), knots.end());
  CorrelationModel model(ModelKind::Tabulated);
  model.knots_ = std::move(knots);
  return model;
}

CorrelationModel CorrelationModel::from_name(std::string_view name) {
  if (name == "classical") return classical();
  if (name == "quantum") return quantum();
  if (name == "superquantum") return superquantum();
  throw std::invalid_argument("unknown correlation model: " +
                              std::string(name));
}

std::string CorrelationModel::name() const {
  switch (kind_) {
    case ModelKind::ClassicalLinear:
      return "classical";
    case ModelKind::QuantumCosine:
      return "quantum";
    case ModelKind::Superquantum:
      return "superquantum";
    case ModelKind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

double CorrelationModel::eval(double theta) const {
  const double t = reduce_angle(theta);
  switch (kind_) {
    case ModelKind::ClassicalLinear:
      return 1.0 - 2.0 * t / kPi;
    case ModelKind::QuantumCosine:
      return std::cos(t);
    case ModelKind::Superquantum:
      if (t <= kPi / 4.0) return 1.0;
      if (t >= 3.0 * kPi / 4.0) return -1.0;
      return std::sin(2.0 * t);
    case ModelKind::Tabulated: {
      if (t <= knots_.front().first) return knots_.front().second;
      if (t >= knots_.back().first) return knots_.back().second;
      auto hi = std::upper_bound(
          knots_.begin(), knots_.end(), std::make_pair(t, 2.0));
      auto lo = hi - 1;
      const double span = hi->first - lo->first;
      if (span <= 0.0) return lo->second;
      const double w = (t - lo->first) / span;
      return (1.0 - w) * lo->second + w * hi->second;
    }
  }
  throw std::logic_error("unreachable");
}

double antisymmetry_residual(const CorrelationModel& model, int grid_size) {
  if (grid_size < 2) {
    throw std::invalid_argument("antisymmetry_residual: grid_size >= 2");
  }
  double worst = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double theta = kPi * i / (grid_size - 1);
    worst = std::max(worst,
                     std::abs(model.eval(kPi - theta) + model.eval(theta)));
  }
  return worst;
}

AxisConfiguration AxisConfiguration::spaced(double step) {
  return {0.0, step, 2.0 * step, 3.0 * step};
}

ConditionalBox box_at_angles(const CorrelationModel& model,
                             const AxisConfiguration& axes) {
  const double e00 = model.eval(reduce_angle(axes.a - axes.b));
  const double e01 = model.eval(reduce_angle(axes.a - axes.b_prime));
  const double e10 = model.eval(reduce_angle(axes.a_prime - axes.b));
  const double e11 = model.eval(reduce_angle(axes.a_prime - axes.b_prime));
  return box_from_correlations(e00, e01, e10, e11);
}

}  // namespace nonlocal
