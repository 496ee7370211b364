#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nonlocal/box.hpp"
#include "nonlocal/jamming.hpp"

namespace nonlocal {

/// Any failure to turn bytes into a domain object.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat text format: 16 records "x y a b p", whitespace-separated, '#'
/// comments. Probabilities are written with enough digits to round-trip
/// exactly.
ConditionalBox read_box_flat(std::istream& in);
std::string write_box_flat(const ConditionalBox& box);

/// Structured format: JSON nested maps keyed by setting ("x0y0" ... "x1y1")
/// then outcome pair ("++", "+-", "-+", "--").
ConditionalBox read_box_json(std::istream& in);
std::string write_box_json(const ConditionalBox& box);

/// Built-in boxes: "pr", "uniform", "quantum-2sqrt2", and the 16 local
/// deterministic vertices as "det-XXXX" where the bits are
/// (f(0), f(1), g(0), g(1)) with 0 -> outcome +1 and 1 -> outcome -1.
bool is_builtin_box(std::string_view name);
ConditionalBox builtin_box(std::string_view name);

/// Resolves a builtin name or a path (format detected from the content:
/// leading '{' means JSON, otherwise flat). Boxes from files are validated
/// at kDefaultTol; throws ParseError on malformed input and
/// std::invalid_argument on constraint violations.
ConditionalBox load_box(const std::string& name_or_path,
                        double tol = kDefaultTol, bool validate = true);

/// Scenario file (JSON): events "a", "b", "j" as {"t": .., "x": ..},
/// "box_off" / "box_on" as builtin names or {"path": ..}, optional
/// "schedule" ("all" | "none" | "alternate" | "bernoulli:p").
struct ScenarioFile {
  JammingScenario scenario;
  ButtonSchedule schedule;
};

ScenarioFile read_scenario(std::istream& in, double tol = kDefaultTol);
ScenarioFile load_scenario(const std::string& path, double tol = kDefaultTol);

}  // namespace nonlocal
