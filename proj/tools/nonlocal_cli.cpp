// nonlocal: command-line surface for box inspection, CHSH evaluation,
// locality certificates, sampling experiments, and jamming scenarios.
//
// Exit codes: 0 success/holds, 1 constraint violation, 2 parse error,
// 3 nonlocal, 4 inadmissible scenario.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>
#include <string>

#include "nonlocal/bell.hpp"
#include "nonlocal/box.hpp"
#include "nonlocal/correlations.hpp"
#include "nonlocal/io.hpp"
#include "nonlocal/jamming.hpp"
#include "nonlocal/sampler.hpp"

namespace {

using nlohmann::json;
using namespace nonlocal;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConstraint = 1;
constexpr int kExitParse = 2;
constexpr int kExitNonlocal = 3;
constexpr int kExitInadmissible = 4;

// Angles are accepted either as exact rational multiples of pi ("pi/4",
// "3pi/4", "-pi/2", "2pi") or as decimal radians ("0.785398").
double parse_angle(const std::string& text) {
  static const std::regex pi_form(
      R"(^\s*(-?)(\d*(?:\.\d+)?)\s*pi\s*(?:/\s*(\d+(?:\.\d+)?))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double value = std::numbers::pi;
    if (m[2].matched && m[2].length() > 0) value *= std::stod(m[2]);
    if (m[3].matched) value /= std::stod(m[3]);
    return m[1].length() > 0 ? -value : value;
  }
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  if (used != text.size()) {
    throw ParseError("cannot parse angle: '" + text + "'");
  }
  return value;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NONLOCAL_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

json envelope(const std::string& command, json inputs, json results,
              json provenance = json::object()) {
  provenance["version"] = kVersion;
  return json{{"command", command},
              {"inputs", std::move(inputs)},
              {"results", std::move(results)},
              {"provenance", std::move(provenance)}};
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    out << doc.dump(2) << '\n';
  }
}

json correlators_json(const ConditionalBox& box) {
  return json{{"E00", correlator(box, 0, 0)},
              {"E01", correlator(box, 0, 1)},
              {"E10", correlator(box, 1, 0)},
              {"E11", correlator(box, 1, 1)}};
}

int cmd_box_check(const std::string& box_spec, double tol) {
  const ConditionalBox box = load_box(box_spec, tol, /*validate=*/false);
  const ValidationReport validation = validate_box(box, tol);
  json results{{"valid", validation.valid}};
  for (const ConstraintViolation& v : validation.violations) {
    results["violations"].push_back(
        {{"constraint", v.constraint}, {"magnitude", v.magnitude}});
  }
  int exit_code = kExitOk;
  if (validation.valid) {
    const NoSignalingReport ns = check_no_signaling(box, tol);
    results["no_signaling"] = {
        {"holds", ns.holds},
        {"worst_violation", ns.worst_violation},
        {"witness",
         {{"party", to_string(ns.witness.party)},
          {"local_input", ns.witness.local_input}}}};
    if (!ns.holds) exit_code = kExitConstraint;
  } else {
    exit_code = kExitConstraint;
  }
  emit(envelope("box-check", {{"box", box_spec}, {"tol", tol}}, results),
       "");
  return exit_code;
}

int cmd_chsh(const std::optional<std::string>& box_spec,
             const std::optional<std::string>& model_name,
             const std::string& spacing, bool maximize, double tol) {
  ConditionalBox box;
  json inputs{{"tol", tol}};
  if (box_spec) {
    box = load_box(*box_spec, tol);
    inputs["box"] = *box_spec;
  } else if (model_name) {
    const CorrelationModel model = CorrelationModel::from_name(*model_name);
    inputs["model"] = *model_name;
    if (maximize) {
      const AxisSearchResult best = max_chsh_over_axes(model);
      json results{
          {"chsh", best.value},
          {"class", to_string(classify(best.value))},
          {"axes",
           {{"a_prime", best.axes.a_prime},
            {"b", best.axes.b},
            {"a", best.axes.a},
            {"b_prime", best.axes.b_prime}}}};
      emit(envelope("chsh", inputs, results), "");
      return kExitOk;
    }
    inputs["spacing"] = spacing;
    box = box_at_angles(model, AxisConfiguration::spaced(parse_angle(spacing)));
  } else {
    throw ParseError("chsh needs either --box or --model");
  }
  const double s = chsh_of_box(box);
  json results{{"chsh", s},
               {"class", to_string(classify(s))},
               {"correlators", correlators_json(box)}};
  emit(envelope("chsh", inputs, results), "");
  return kExitOk;
}

int cmd_local(const std::string& box_spec, double tol) {
  const ConditionalBox box = load_box(box_spec, tol);
  const LocalityCertificate cert = is_local(box, tol);
  json results{{"is_local", cert.is_local}};
  if (cert.is_local) {
    json weights = json::object();
    for (int code = 0; code < 16; ++code) {
      if (cert.weights[code] == 0.0) continue;
      char name[9] = "det-0000";
      for (int bit = 0; bit < 4; ++bit) {
        name[4 + bit] = (code >> (3 - bit)) & 1 ? '1' : '0';
      }
      weights[name] = cert.weights[code];
    }
    results["weights"] = weights;
    results["recombination_error"] = cert.recombination_error;
  } else {
    results["violated"] = {{"signs", cert.violated.signs},
                           {"value", cert.violated.value}};
  }
  emit(envelope("local", {{"box", box_spec}, {"tol", tol}}, results), "");
  return cert.is_local ? kExitOk : kExitNonlocal;
}

json estimates_json(const std::array<CorrelatorEstimate, 4>& estimates) {
  json out = json::object();
  const char* keys[4] = {"E00", "E01", "E10", "E11"};
  for (int i = 0; i < 4; ++i) {
    const CorrelatorEstimate& e = estimates[i];
    if (!e.present) {
      out[keys[i]] = {{"missing", true}, {"rounds", e.rounds}};
    } else {
      out[keys[i]] = {{"estimate", e.estimate},
                      {"standard_error", e.standard_error},
                      {"rounds", e.rounds}};
    }
  }
  return out;
}

int cmd_sample(const std::string& box_spec, std::uint64_t rounds,
               std::uint64_t seed, const std::string& schedule_text,
               const std::string& format, const std::string& out_path,
               double tol) {
  const ConditionalBox box = load_box(box_spec, tol);
  ExperimentPlan plan{rounds, SettingSchedule::parse(schedule_text), seed};
  const Tally tally = run_experiment(box, plan);

  if (format == "csv") {
    const std::string csv = tally_to_csv(tally);
    if (out_path.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(out_path);
      out << csv;
    }
    return kExitOk;
  }

  const auto estimates = estimate_correlators(tally);
  json results{{"estimates", estimates_json(estimates)}};
  bool all_present = true;
  for (const auto& e : estimates) all_present = all_present && e.present;
  if (all_present) {
    double s = 0.0;
    double var = 0.0;
    const double signs[4] = {1.0, 1.0, 1.0, -1.0};
    for (int i = 0; i < 4; ++i) {
      s += signs[i] * estimates[i].estimate;
      var += estimates[i].standard_error * estimates[i].standard_error;
    }
    results["chsh"] = {{"estimate", s},
                       {"standard_error", std::sqrt(var)},
                       {"class", to_string(classify(std::clamp(s, -4.0, 4.0)))}};
    const EmpiricalNoSignalingReport ns = empirical_no_signaling(tally);
    results["empirical_no_signaling"] = {{"max_abs_z", ns.max_abs_z},
                                         {"sufficient", ns.sufficient}};
  } else {
    results["missing_settings"] = true;
  }
  emit(envelope("sample",
                {{"box", box_spec},
                 {"rounds", rounds},
                 {"schedule", plan.schedule.name()}},
                results, {{"seed", seed}, {"tol", tol}}),
       out_path);
  return kExitOk;
}

int cmd_jam(const std::string& scenario_path, std::uint64_t rounds,
            std::uint64_t seed, const std::optional<std::string>& schedule_text,
            double tol) {
  ScenarioFile file = load_scenario(scenario_path, tol);
  if (schedule_text) file.schedule = ButtonSchedule::parse(*schedule_text);
  const ConditionReport report = check_scenario(file.scenario, tol);

  json results{{"conditions",
                {{"spacelike", report.spacelike_ok},
                 {"unary", report.unary_ok},
                 {"binary", report.binary_ok},
                 {"admissible", report.admissible}}},
               {"warnings", report.warnings}};
  json inputs{{"scenario", scenario_path},
              {"rounds", rounds},
              {"button_schedule", file.schedule.name()}};
  if (!report.admissible) {
    results["failed_condition"] = report.failed;
    emit(envelope("jam", inputs, results, {{"seed", seed}, {"tol", tol}}), "");
    return kExitInadmissible;
  }

  ExperimentPlan plan{rounds, SettingSchedule::uniform_random(), seed};
  const JammingTranscript transcript =
      simulate_jamming(file.scenario, plan, file.schedule, tol);

  json subsets = json::object();
  for (auto [label, filter] :
       {std::pair<const char*, std::optional<bool>>{"all", std::nullopt},
        {"pressed", true},
        {"unpressed", false}}) {
    const Tally tally = transcript.tally(filter);
    if (tally.total() == 0) {
      subsets[label] = {{"rounds", 0}};
      continue;
    }
    json entry{{"rounds", tally.total()},
               {"estimates", estimates_json(estimate_correlators(tally))}};
    bool all_settings = true;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        all_settings = all_settings && tally.rounds_per_setting(x, y) > 0;
      }
    }
    if (all_settings) {
      entry["empirical_no_signaling"] = {
          {"max_abs_z", empirical_no_signaling(tally).max_abs_z}};
    }
    subsets[label] = entry;
  }
  results["subsets"] = subsets;

  // pressed-vs-unpressed marginal comparison per party: the observable a
  // local observer could use to detect jamming
  const Tally pressed = transcript.tally(true);
  const Tally unpressed = transcript.tally(false);
  if (pressed.total() > 0 && unpressed.total() > 0) {
    json z_scores = json::object();
    for (Party party : {Party::Alice, Party::Bob}) {
      double worst = 0.0;
      for (int local = 0; local < 2; ++local) {
        for (int remote = 0; remote < 2; ++remote) {
          const int x = party == Party::Alice ? local : remote;
          const int y = party == Party::Alice ? remote : local;
          std::uint64_t plus[2], n[2];
          int side = 0;
          for (const Tally* tally : {&pressed, &unpressed}) {
            n[side] = tally->rounds_per_setting(x, y);
            plus[side] = party == Party::Alice
                             ? tally->count(x, y, +1, +1) +
                                   tally->count(x, y, +1, -1)
                             : tally->count(x, y, +1, +1) +
                                   tally->count(x, y, -1, +1);
            ++side;
          }
          if (n[0] == 0 || n[1] == 0) continue;
          const double p1 = double(plus[0]) / double(n[0]);
          const double p2 = double(plus[1]) / double(n[1]);
          const double pooled =
              double(plus[0] + plus[1]) / double(n[0] + n[1]);
          const double var =
              pooled * (1.0 - pooled) * (1.0 / double(n[0]) + 1.0 / double(n[1]));
          const double z = var > 0.0 ? (p1 - p2) / std::sqrt(var) : 0.0;
          worst = std::max(worst, std::abs(z));
        }
      }
      z_scores[to_string(party)] = worst;
    }
    results["pressed_vs_unpressed_max_abs_z"] = z_scores;
  }

  emit(envelope("jam", inputs, results, {{"seed", seed}, {"tol", tol}}), "");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bipartite nonlocal boxes, CHSH bounds, and jamming scenarios"};
  app.require_subcommand(1);

  double tol = kDefaultTol;
  app.add_option("--tol", tol, "tolerance for validation and certificates")
      ->capture_default_str();

  auto* box_check = app.add_subcommand(
      "box-check", "validate a box and check no-signaling");
  std::string bc_box;
  box_check->add_option("--box", bc_box, "builtin name or file path")
      ->required();

  auto* chsh = app.add_subcommand("chsh", "evaluate and classify CHSH");
  std::optional<std::string> chsh_box, chsh_model;
  std::string chsh_spacing = "pi/4";
  bool chsh_max = false;
  chsh->add_option("--box", chsh_box, "builtin name or file path");
  chsh->add_option("--model", chsh_model,
                   "classical | quantum | superquantum");
  chsh->add_option("--spacing", chsh_spacing,
                   "successive axis spacing, e.g. pi/4")
      ->capture_default_str();
  chsh->add_flag("--maximize", chsh_max,
                 "search axis configurations for the model's maximum");

  auto* local = app.add_subcommand(
      "local", "local-hidden-variable membership certificate");
  std::string local_box;
  local->add_option("--box", local_box, "builtin name or file path")
      ->required();

  auto* sample = app.add_subcommand("sample", "seeded sampling experiment");
  std::string sample_box, sample_schedule = "uniform", sample_format = "structured";
  std::string sample_out;
  std::uint64_t sample_rounds = 100000;
  std::uint64_t sample_seed = default_seed();
  sample->add_option("--box", sample_box, "builtin name or file path")
      ->required();
  sample->add_option("--rounds", sample_rounds, "number of rounds")
      ->capture_default_str();
  sample->add_option("--seed", sample_seed, "rng seed")->capture_default_str();
  sample->add_option("--schedule", sample_schedule,
                     "uniform | round-robin | fixed:x,y")
      ->capture_default_str();
  sample->add_option("--format", sample_format, "csv | structured")
      ->capture_default_str();
  sample->add_option("--out", sample_out, "output file (default stdout)");

  auto* jam = app.add_subcommand("jam", "check and simulate a jamming scenario");
  std::string jam_scenario;
  std::optional<std::string> jam_schedule;
  std::uint64_t jam_rounds = 100000;
  std::uint64_t jam_seed = default_seed();
  jam->add_option("--scenario", jam_scenario, "scenario JSON file")->required();
  jam->add_option("--rounds", jam_rounds, "number of rounds")
      ->capture_default_str();
  jam->add_option("--seed", jam_seed, "rng seed")->capture_default_str();
  jam->add_option("--schedule", jam_schedule,
                  "all | none | alternate | bernoulli:p (overrides the file)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (box_check->parsed()) return cmd_box_check(bc_box, tol);
    if (chsh->parsed()) {
      return cmd_chsh(chsh_box, chsh_model, chsh_spacing, chsh_max, tol);
    }
    if (local->parsed()) return cmd_local(local_box, tol);
    if (sample->parsed()) {
      return cmd_sample(sample_box, sample_rounds, sample_seed,
                        sample_schedule, sample_format, sample_out, tol);
    }
    if (jam->parsed()) {
      return cmd_jam(jam_scenario, jam_rounds, jam_seed, jam_schedule, tol);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InadmissibleScenario& e) {
    std::cerr << e.what() << '\n';
    return kExitInadmissible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "constraint violation: " << e.what() << '\n';
    return kExitConstraint;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConstraint;
  }
  return kExitOk;
}
