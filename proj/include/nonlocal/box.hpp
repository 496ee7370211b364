#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace nonlocal {

/// Tolerance for quantities constructed exactly in closed form.
inline constexpr double kExactTol = 1e-12;
/// Default tolerance for data that has been through files or estimation.
inline constexpr double kDefaultTol = 1e-9;

enum class Party { Alice, Bob };

std::string to_string(Party p);

/// Maps an outcome in {+1, -1} to a storage slot {0, 1}. Throws on anything else.
int outcome_slot(int outcome);
/// Inverse of outcome_slot.
int slot_outcome(int slot);

/// Joint conditional distribution p(a, b | x, y) for the 2-party, 2-input,
/// 2-output scenario. Inputs x, y are bits; outcomes a, b are +1 or -1.
/// Immutable after construction.
class ConditionalBox {
 public:
  /// Uniform box (all entries 1/4).
  ConditionalBox();

  /// Entries in index order (x, y, a-slot, b-slot); no validation applied,
  /// use validate_box to check.
  static ConditionalBox from_probabilities(const std::array<double, 16>& p);

  static ConditionalBox uniform();
  /// The extremal no-signaling box with correlators (1, 1, 1, -1).
  static ConditionalBox pr();
  /// Local deterministic box: a0, a1 are Alice's outcomes for x = 0, 1 and
  /// b0, b1 Bob's for y = 0, 1, each in {+1, -1}.
  static ConditionalBox deterministic(int a0, int a1, int b0, int b1);

  double prob(int x, int y, int a, int b) const;

  static std::size_t index(int x, int y, int a, int b);

  const std::array<double, 16>& raw() const { return p_; }

  bool operator==(const ConditionalBox&) const = default;

 private:
  std::array<double, 16> p_;
};

struct MarginalDistribution {
  double p_plus;
  double p_minus;
};

struct ConstraintViolation {
  std::string constraint;
  double magnitude;
};

struct ValidationReport {
  bool valid;
  std::vector<ConstraintViolation> violations;
};

struct NoSignalingWitness {
  Party party;
  int local_input;
};

struct NoSignalingReport {
  bool holds;
  double worst_violation;
  NoSignalingWitness witness;
};

/// Checks nonnegativity of every entry and per-setting normalization.
/// Never throws; every failure is listed in the report.
ValidationReport validate_box(const ConditionalBox& box, double tol = kExactTol);

/// Distribution of one party's outcome at the given setting pair, obtained by
/// summing the joint over the remote outcome.
MarginalDistribution marginal(const ConditionalBox& box, Party party,
                              int local_input, int remote_input);

/// Holds iff each party's marginals are independent of the remote input.
/// Throws std::invalid_argument if the box itself is invalid.
NoSignalingReport check_no_signaling(const ConditionalBox& box,
                                     double tol = kDefaultTol);

/// Expectation of the product a*b at setting (x, y); always in [-1, 1] for a
/// valid box.
double correlator(const ConditionalBox& box, int x, int y);

/// The symmetric box with p(++) = p(--) = (1+E)/4 and p(+-) = p(-+) = (1-E)/4
/// per setting. All marginals are (1/2, 1/2) and the box is no-signaling by
/// construction. Throws std::invalid_argument if any |E| > 1.
ConditionalBox box_from_correlations(double e00, double e01, double e10,
                                     double e11);

/// Entrywise convex combination w*a + (1-w)*b. Throws on w outside [0, 1].
ConditionalBox mix(const ConditionalBox& box_a, const ConditionalBox& box_b,
                   double w);

}  // namespace nonlocal
