#include "nonlocal/bell.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nonlocal {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(BoundClass c) {
  switch (c) {
    case BoundClass::Local:
      return "local";
    case BoundClass::QuantumOnly:
      return "quantum-only";
    case BoundClass::SuperquantumOnly:
      return "superquantum-only";
    case BoundClass::Impossible:
      return "impossible";
  }
  return "unknown";
}

double chsh_value(double e_ab, double e_abp, double e_apb, double e_apbp) {
  for (double e : {e_ab, e_abp, e_apb, e_apbp}) {
    if (!std::isfinite(e) || std::abs(e) > 1.0) {
      throw std::invalid_argument("chsh_value: correlator outside [-1, 1]");
    }
  }
  return e_ab + e_abp + e_apb - e_apbp;
}

double chsh_of_box(const ConditionalBox& box) {
  return chsh_value(correlator(box, 0, 0), correlator(box, 0, 1),
                    correlator(box, 1, 0), correlator(box, 1, 1));
}

double chsh_from_model(const CorrelationModel& model,
                       const AxisConfiguration& axes) {
  return chsh_of_box(box_at_angles(model, axes));
}

BoundClass classify(double s) {
  if (!std::isfinite(s)) throw std::invalid_argument("classify: s not finite");
  const double v = std::abs(s);
  if (v <= kLocalBound) return BoundClass::Local;
  if (v <= kQuantumBound) return BoundClass::QuantumOnly;
  if (v <= kNoSignalingBound) return BoundClass::SuperquantumOnly;
  return BoundClass::Impossible;
}

const std::array<ConditionalBox, 16>& deterministic_vertices() {
  static const std::array<ConditionalBox, 16> vertices = [] {
    std::array<ConditionalBox, 16> v;
    for (int code = 0; code < 16; ++code) {
      // bit order (f(0), f(1), g(0), g(1)), bit set means outcome -1
      const int a0 = (code & 8) ? -1 : +1;
      const int a1 = (code & 4) ? -1 : +1;
      const int b0 = (code & 2) ? -1 : +1;
      const int b1 = (code & 1) ? -1 : +1;
      v[code] = ConditionalBox::deterministic(a0, a1, b0, b1);
    }
    return v;
  }();
  return vertices;
}

const std::array<std::array<int, 4>, 8>& chsh_sign_variants() {
  // all sign patterns with an odd number of minus signs
  static const std::array<std::array<int, 4>, 8> variants = {{
      {+1, +1, +1, -1},
      {+1, +1, -1, +1},
      {+1, -1, +1, +1},
      {-1, +1, +1, +1},
      {-1, -1, -1, +1},
      {-1, -1, +1, -1},
      {-1, +1, -1, -1},
      {+1, -1, -1, -1},
  }};
  return variants;
}

ChshVariant max_chsh_variant(const ConditionalBox& box) {
  const double e[4] = {correlator(box, 0, 0), correlator(box, 0, 1),
                       correlator(box, 1, 0), correlator(box, 1, 1)};
  ChshVariant best{{+1, +1, +1, -1},
                   -std::numeric_limits<double>::infinity()};
  for (const auto& signs : chsh_sign_variants()) {
    double value = 0.0;
    for (int i = 0; i < 4; ++i) value += signs[i] * e[i];
    if (value > best.value) best = {signs, value};
  }
  return best;
}

namespace {

// Lawson-Hanson nonnegative least squares on the 17x16 system whose columns
// are the vertex probability tables plus a unit row enforcing total weight 1.
Eigen::VectorXd solve_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.cols());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  Eigen::VectorXd residual = b;
  const double grad_tol = 1e-12;

  for (int outer = 0; outer < 10 * n; ++outer) {
    const Eigen::VectorXd grad = a.transpose() * residual;
    int best = -1;
    double best_grad = grad_tol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && grad[j] > best_grad) {
        best_grad = grad[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner < 10 * n; ++inner) {
      std::vector<int> idx;
      for (int j = 0; j < n; ++j) {
        if (passive[j]) idx.push_back(j);
      }
      Eigen::MatrixXd ap(a.rows(), idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) ap.col(k) = a.col(idx[k]);
      const Eigen::VectorXd z = ap.colPivHouseholderQr().solve(b);

      if ((z.array() > 0.0).all()) {
        w.setZero();
        for (std::size_t k = 0; k < idx.size(); ++k) w[idx[k]] = z[k];
        break;
      }
      double alpha = 1.0;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (z[k] <= 0.0) {
          const double wj = w[idx[k]];
          alpha = std::min(alpha, wj / (wj - z[k]));
        }
      }
      for (std::size_t k = 0; k < idx.size(); ++k) {
        w[idx[k]] += alpha * (z[k] - w[idx[k]]);
        if (w[idx[k]] <= 1e-14) {
          w[idx[k]] = 0.0;
          passive[idx[k]] = false;
        }
      }
    }
    residual = b - a * w;
  }
  return w;
}

}  // namespace

LocalityCertificate is_local(const ConditionalBox& box, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("is_local: tol must be positive");
  if (!validate_box(box, tol).valid) {
    throw std::invalid_argument("is_local: invalid box");
  }

  const auto& vertices = deterministic_vertices();
  Eigen::MatrixXd a(17, 16);
  Eigen::VectorXd b(17);
  for (int row = 0; row < 16; ++row) {
    b[row] = box.raw()[row];
    for (int col = 0; col < 16; ++col) {
      a(row, col) = vertices[col].raw()[row];
    }
  }
  b[16] = 1.0;
  a.row(16).setOnes();

  const Eigen::VectorXd w = solve_nnls(a, b);

  LocalityCertificate cert{};
  for (int j = 0; j < 16; ++j) cert.weights[j] = w[j];

  double gap = std::abs(w.sum() - 1.0);
  for (int row = 0; row < 16; ++row) {
    double recombined = 0.0;
    for (int col = 0; col < 16; ++col) {
      recombined += w[col] * vertices[col].raw()[row];
    }
    gap = std::max(gap, std::abs(recombined - box.raw()[row]));
  }
  cert.recombination_error = gap;
  cert.is_local = gap <= tol;
  if (!cert.is_local) {
    cert.violated = max_chsh_variant(box);
  }
  return cert;
}

namespace {

// CHSH as a function of the three successive relative angles
// (theta(a',b), theta(b,a), theta(a,b')) with coplanar axes.
double chsh_of_triple(const CorrelationModel& model, double t1, double t2,
                      double t3) {
  return model.eval(t1) + model.eval(t2) + model.eval(t3) -
         model.eval(reduce_angle(t1 + t2 + t3));
}

}  // namespace

AxisSearchResult max_chsh_over_axes(const CorrelationModel& model) {
  const double coarse_step = kPi / 180.0;
  const int steps = 180;

  double best_value = -std::numeric_limits<double>::infinity();
  std::array<double, 3> best{0.0, 0.0, 0.0};
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      for (int k = 0; k <= steps; ++k) {
        const double value = chsh_of_triple(model, i * coarse_step,
                                            j * coarse_step, k * coarse_step);
        if (value > best_value) {
          best_value = value;
          best = {i * coarse_step, j * coarse_step, k * coarse_step};
        }
      }
    }
  }

  // coordinate pattern search, shrinking the step to below 1e-6
  for (double step = coarse_step; step > 0.5e-6;) {
    bool improved = false;
    for (int axis = 0; axis < 3; ++axis) {
      for (double delta : {-step, step}) {
        std::array<double, 3> probe = best;
        probe[axis] = std::clamp(probe[axis] + delta, 0.0, kPi);
        const double value = chsh_of_triple(model, probe[0], probe[1],
                                            probe[2]);
        // improvements below rounding noise are not worth chasing
        if (value > best_value + 1e-12) {
          best_value = value;
          best = probe;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  AxisSearchResult result;
  result.axes = {0.0, best[0], best[0] + best[1], best[0] + best[1] + best[2]};
  result.value = best_value;
  return result;
}

}  // namespace nonlocal
