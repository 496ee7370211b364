#include "nonlocal/box.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nonlocal {

std::string to_string(Party p) { return p == Party::Alice ? "alice" : "bob"; }

int outcome_slot(int outcome) {
  if (outcome == +1) return 0;
  if (outcome == -1) return 1;
  throw std::invalid_argument("outcome must be +1 or -1");
}

int slot_outcome(int slot) { return slot == 0 ? +1 : -1; }

namespace {

int check_bit(int v, const char* name) {
  if (v != 0 && v != 1) {
    throw std::invalid_argument(std::string(name) + " must be 0 or 1");
  }
  return v;
}

}  // namespace

ConditionalBox::ConditionalBox() { p_.fill(0.25); }

ConditionalBox ConditionalBox::from_probabilities(
    const std::array<double, 16>& p) {
  ConditionalBox box;
  box.p_ = p;
  return box;
}

ConditionalBox ConditionalBox::uniform() { return ConditionalBox(); }

ConditionalBox ConditionalBox::pr() {
  return box_from_correlations(1.0, 1.0, 1.0, -1.0);
}

ConditionalBox ConditionalBox::deterministic(int a0, int a1, int b0, int b1) {
  outcome_slot(a0);
  outcome_slot(a1);
  outcome_slot(b0);
  outcome_slot(b1);
  std::array<double, 16> p{};
  const int fa[2] = {a0, a1};
  const int gb[2] = {b0, b1};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      p[index(x, y, fa[x], gb[y])] = 1.0;
    }
  }
  return from_probabilities(p);
}

std::size_t ConditionalBox::index(int x, int y, int a, int b) {
  check_bit(x, "x");
  check_bit(y, "y");
  return static_cast<std::size_t>(
      ((x * 2 + y) * 2 + outcome_slot(a)) * 2 + outcome_slot(b));
}

double ConditionalBox::prob(int x, int y, int a, int b) const {
  return p_[index(x, y, a, b)];
}

ValidationReport validate_box(const ConditionalBox& box, double tol) {
  ValidationReport report{true, {}};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double sum = 0.0;
      for (int as = 0; as < 2; ++as) {
        for (int bs = 0; bs < 2; ++bs) {
          const int a = slot_outcome(as);
          const int b = slot_outcome(bs);
          const double p = box.prob(x, y, a, b);
          if (!std::isfinite(p) || p < -tol) {
            std::ostringstream msg;
            msg << "p(" << a << "," << b << "|" << x << "," << y
                << ") nonnegative";
            report.violations.push_back(
                {msg.str(), std::isfinite(p) ? -p : std::nan("")});
          }
          sum += p;
        }
      }
      if (!std::isfinite(sum) || std::abs(sum - 1.0) > tol) {
        std::ostringstream msg;
        msg << "sum_{a,b} p(a,b|" << x << "," << y << ") = 1";
        report.violations.push_back({msg.str(), std::abs(sum - 1.0)});
      }
    }
  }
  report.valid = report.violations.empty();
  return report;
}

MarginalDistribution marginal(const ConditionalBox& box, Party party,
                              int local_input, int remote_input) {
  check_bit(local_input, "local_input");
  check_bit(remote_input, "remote_input");
  double p_plus = 0.0;
  for (int rs = 0; rs < 2; ++rs) {
    const int remote_outcome = slot_outcome(rs);
    if (party == Party::Alice) {
      p_plus += box.prob(local_input, remote_input, +1, remote_outcome);
    } else {
      p_plus += box.prob(remote_input, local_input, remote_outcome, +1);
    }
  }
  double p_minus = 0.0;
  for (int rs = 0; rs < 2; ++rs) {
    const int remote_outcome = slot_outcome(rs);
    if (party == Party::Alice) {
      p_minus += box.prob(local_input, remote_input, -1, remote_outcome);
    } else {
      p_minus += box.prob(remote_input, local_input, remote_outcome, -1);
    }
  }
  return {p_plus, p_minus};
}

NoSignalingReport check_no_signaling(const ConditionalBox& box, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
  const ValidationReport validation = validate_box(box, tol);
  if (!validation.valid) {
    throw std::invalid_argument("check_no_signaling: box is not a valid "
                                "conditional distribution");
  }
  NoSignalingReport report{true, 0.0, {Party::Alice, 0}};
  for (Party party : {Party::Alice, Party::Bob}) {
    for (int local = 0; local < 2; ++local) {
      const MarginalDistribution m0 = marginal(box, party, local, 0);
      const MarginalDistribution m1 = marginal(box, party, local, 1);
      const double gap = std::max(std::abs(m0.p_plus - m1.p_plus),
                                  std::abs(m0.p_minus - m1.p_minus));
      if (gap > report.worst_violation) {
        report.worst_violation = gap;
        report.witness = {party, local};
      }
    }
  }
  report.holds = report.worst_violation <= tol;
  return report;
}

double correlator(const ConditionalBox& box, int x, int y) {
  double e = 0.0;
  for (int as = 0; as < 2; ++as) {
    for (int bs = 0; bs < 2; ++bs) {
      const int a = slot_outcome(as);
      const int b = slot_outcome(bs);
      e += a * b * box.prob(x, y, a, b);
    }
  }
  return e;
}

ConditionalBox box_from_correlations(double e00, double e01, double e10,
                                     double e11) {
  const double es[2][2] = {{e00, e01}, {e10, e11}};
  std::array<double, 16> p{};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double e = es[x][y];
      if (!std::isfinite(e) || std::abs(e) > 1.0) {
        throw std::invalid_argument(
            "box_from_correlations: correlator outside [-1, 1]");
      }
      const double same = (1.0 + e) / 4.0;
      const double diff = (1.0 - e) / 4.0;
      p[ConditionalBox::index(x, y, +1, +1)] = same;
      p[ConditionalBox::index(x, y, -1, -1)] = same;
      p[ConditionalBox::index(x, y, +1, -1)] = diff;
      p[ConditionalBox::index(x, y, -1, +1)] = diff;
    }
  }
  return ConditionalBox::from_probabilities(p);
}

ConditionalBox mix(const ConditionalBox& box_a, const ConditionalBox& box_b,
                   double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument("mix: weight outside [0, 1]");
  }
  std::array<double, 16> p;
  for (std::size_t i = 0; i < 16; ++i) {
    p[i] = w * box_a.raw()[i] + (1.0 - w) * box_b.raw()[i];
  }
  return ConditionalBox::from_probabilities(p);
}

}  // namespace nonlocal
