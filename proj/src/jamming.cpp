#include "nonlocal/jamming.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nonlocal {

std::string to_string(IntervalClass c) {
  switch (c) {
    case IntervalClass::Timelike:
      return "timelike";
    case IntervalClass::Lightlike:
      return "lightlike";
    case IntervalClass::Spacelike:
      return "spacelike";
  }
  return "unknown";
}

SpacetimeEvent forward_cone_intersection_apex(const SpacetimeEvent& a,
                                              const SpacetimeEvent& b) {
  // In null coordinates u = t - x, v = t + x a forward cone is a coordinate
  // quadrant, so the intersection apex is the componentwise maximum.
  const double u = std::max(a.t - a.x, b.t - b.x);
  const double v = std::max(a.t + a.x, b.t + b.x);
  return {(u + v) / 2.0, (v - u) / 2.0};
}

bool unary_condition(const ConditionalBox& box_on,
                     const ConditionalBox& box_off, double tol) {
  for (const ConditionalBox* box : {&box_on, &box_off}) {
    if (!validate_box(*box, tol).valid) {
      throw std::invalid_argument("unary_condition: invalid box");
    }
  }
  for (Party party : {Party::Alice, Party::Bob}) {
    for (int local = 0; local < 2; ++local) {
      for (int remote = 0; remote < 2; ++remote) {
        const MarginalDistribution on = marginal(box_on, party, local, remote);
        const MarginalDistribution off =
            marginal(box_off, party, local, remote);
        if (std::abs(on.p_plus - off.p_plus) > tol) return false;
      }
    }
  }
  return true;
}

ConditionReport check_scenario(const JammingScenario& s, double tol) {
  ConditionReport report{};
  report.spacelike_ok = true;

  struct Pair {
    const char* name;
    const SpacetimeEvent* e1;
    const SpacetimeEvent* e2;
    bool lightlike_warns;
  };
  const Pair pairs[] = {
      {"A-B", &s.event_a, &s.event_b, false},
      {"A-J", &s.event_a, &s.event_j, true},
      {"B-J", &s.event_b, &s.event_j, true},
  };
  for (const Pair& pair : pairs) {
    const IntervalClass c = interval_class(*pair.e1, *pair.e2);
    if (c == IntervalClass::Spacelike) continue;
    if (c == IntervalClass::Lightlike && pair.lightlike_warns) {
      report.warnings.push_back(std::string(pair.name) +
                                " separation is lightlike, not spacelike");
      continue;
    }
    report.spacelike_ok = false;
  }

  report.unary_ok = unary_condition(s.box_on, s.box_off, tol);
  report.binary_ok = binary_condition(s.event_a, s.event_b, s.event_j);
  report.admissible = report.spacelike_ok && report.unary_ok &&
                      report.binary_ok;
  if (!report.spacelike_ok) {
    report.failed = "spacelike";
  } else if (!report.unary_ok) {
    report.failed = "unary";
  } else if (!report.binary_ok) {
    report.failed = "binary";
  }
  return report;
}

ButtonSchedule ButtonSchedule::parse(std::string_view text) {
  if (text == "all") return {ButtonKind::All, 0.0};
  if (text == "none") return {ButtonKind::None, 0.0};
  if (text == "alternate") return {ButtonKind::Alternate, 0.0};
  if (text.rfind("bernoulli:", 0) == 0) {
    const double p = std::stod(std::string(text.substr(10)));
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("bernoulli probability outside [0, 1]");
    }
    return {ButtonKind::Bernoulli, p};
  }
  throw std::invalid_argument("unknown button schedule: " + std::string(text));
}

std::string ButtonSchedule::name() const {
  switch (kind) {
    case ButtonKind::All:
      return "all";
    case ButtonKind::None:
      return "none";
    case ButtonKind::Alternate:
      return "alternate";
    case ButtonKind::Bernoulli: {
      std::ostringstream s;
      s << "bernoulli:" << p;
      return s.str();
    }
  }
  return "unknown";
}

bool ButtonSchedule::pressed(std::uint64_t seed, std::uint64_t round) const {
  switch (kind) {
    case ButtonKind::All:
      return true;
    case ButtonKind::None:
      return false;
    case ButtonKind::Alternate:
      return (round & 1) == 1;
    case ButtonKind::Bernoulli:
      return rng::keyed_uniform(seed, rng::kButtonStream, round) < p;
  }
  throw std::logic_error("unreachable");
}

std::vector<bool> ButtonSchedule::expand(std::uint64_t seed,
                                         std::uint64_t rounds) const {
  std::vector<bool> out(rounds);
  for (std::uint64_t i = 0; i < rounds; ++i) out[i] = pressed(seed, i);
  return out;
}

Tally JammingTranscript::tally(std::optional<bool> pressed_filter) const {
  Tally t;
  for (const JammingRound& round : rounds) {
    if (pressed_filter && round.pressed != *pressed_filter) continue;
    t.add(round.x, round.y, round.a, round.b);
  }
  return t;
}

JammingTranscript simulate_jamming(const JammingScenario& s,
                                   const ExperimentPlan& plan,
                                   const std::vector<bool>& button_schedule,
                                   double tol) {
  const ConditionReport report = check_scenario(s, tol);
  if (!report.admissible) throw InadmissibleScenario(report.failed);
  if (button_schedule.size() < plan.rounds) {
    throw std::invalid_argument(
        "simulate_jamming: button schedule shorter than the plan");
  }
  JammingTranscript transcript;
  transcript.rounds.reserve(plan.rounds);
  for (std::uint64_t round = 0; round < plan.rounds; ++round) {
    const bool pressed = button_schedule[round];
    const ConditionalBox& box = pressed ? s.box_on : s.box_off;
    const auto [x, y] = plan.schedule.setting(plan.seed, round);
    const auto [a, b] = sample_round(box, x, y, plan.seed, round);
    transcript.rounds.push_back({x, y, a, b, pressed});
  }
  return transcript;
}

JammingTranscript simulate_jamming(const JammingScenario& s,
                                   const ExperimentPlan& plan,
                                   const ButtonSchedule& schedule,
                                   double tol) {
  return simulate_jamming(s, plan, schedule.expand(plan.seed, plan.rounds),
                          tol);
}

}  // namespace nonlocal
