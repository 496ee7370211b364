#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nonlocal/box.hpp"
#include "nonlocal/sampler.hpp"
#include "nonlocal/spacetime.hpp"

namespace nonlocal {

/// Measurement events A and B, the jammer event J, and the box pair the
/// jammer toggles between.
struct JammingScenario {
  SpacetimeEvent event_a;
  SpacetimeEvent event_b;
  SpacetimeEvent event_j;
  ConditionalBox box_off;  // correlations when the button is not pressed
  ConditionalBox box_on;   // correlations when it is
};

struct ConditionReport {
  bool spacelike_ok;
  bool unary_ok;
  bool binary_ok;
  bool admissible;  // conjunction of the three
  std::vector<std::string> warnings;
  /// Name of the first failed condition ("spacelike", "unary", "binary"),
  /// empty when admissible.
  std::string failed;
};

/// True iff every single-party marginal agrees between the two boxes within
/// tol, i.e. neither party can tell from local data which box is active.
bool unary_condition(const ConditionalBox& box_on,
                     const ConditionalBox& box_off, double tol = kDefaultTol);

/// Checks pairwise spacelike separation of A, B, J, the unary condition on
/// the box pair, and the binary (cone containment) condition. A lightlike
/// A-J or B-J pair is surfaced as a warning rather than a failure.
ConditionReport check_scenario(const JammingScenario& s,
                               double tol = kDefaultTol);

enum class ButtonKind { All, None, Alternate, Bernoulli };

struct ButtonSchedule {
  ButtonKind kind = ButtonKind::None;
  double p = 0.0;  // used by Bernoulli

  /// Accepts "all", "none", "alternate", "bernoulli:p".
  static ButtonSchedule parse(std::string_view text);
  std::string name() const;
  bool pressed(std::uint64_t seed, std::uint64_t round) const;
  std::vector<bool> expand(std::uint64_t seed, std::uint64_t rounds) const;
};

struct JammingRound {
  int x;
  int y;
  int a;
  int b;
  bool pressed;
};

struct JammingTranscript {
  std::vector<JammingRound> rounds;

  /// Tally over all rounds, or restricted to rounds with the given button
  /// state.
  Tally tally(std::optional<bool> pressed_filter = std::nullopt) const;
};

/// Thrown when a simulation is requested for a scenario failing one of the
/// admissibility conditions; names the failed condition.
struct InadmissibleScenario : std::runtime_error {
  explicit InadmissibleScenario(const std::string& condition)
      : std::runtime_error("inadmissible jamming scenario: " + condition +
                           " condition failed"),
        condition(condition) {}
  std::string condition;
};

/// Per round, draws from box_on when the button schedule says pressed, else
/// box_off. Deterministic in (scenario, plan, button_schedule). Throws
/// InadmissibleScenario unless check_scenario passes.
JammingTranscript simulate_jamming(const JammingScenario& s,
                                   const ExperimentPlan& plan,
                                   const std::vector<bool>& button_schedule,
                                   double tol = kDefaultTol);

JammingTranscript simulate_jamming(const JammingScenario& s,
                                   const ExperimentPlan& plan,
                                   const ButtonSchedule& schedule,
                                   double tol = kDefaultTol);

}  // namespace nonlocal
