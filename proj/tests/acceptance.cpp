// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured values.

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>
#include <string>

#include "nonlocal/bell.hpp"
#include "nonlocal/io.hpp"
#include "nonlocal/jamming.hpp"
#include "nonlocal/sampler.hpp"

using namespace nonlocal;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct CommandResult {
  int exit_code;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string command = std::string(NONLOCAL_CLI_PATH) + " " + args;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buffer[4096];
  while (std::size_t n = fread(buffer, 1, sizeof(buffer), pipe)) {
    output.append(buffer, n);
  }
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int criterion, bool ok, const std::string& detail) {
  std::cout << "[criterion " << criterion << "] " << (ok ? "PASS" : "FAIL")
            << " — " << detail << '\n';
  CHECK(ok);
}

double sampled_chsh(const std::array<CorrelatorEstimate, 4>& e) {
  return e[0].estimate + e[1].estimate + e[2].estimate - e[3].estimate;
}

double combined_se(const std::array<CorrelatorEstimate, 4>& e) {
  double var = 0.0;
  for (const auto& est : e) var += est.standard_error * est.standard_error;
  return std::sqrt(var);
}

}  // namespace

TEST_CASE("criterion 1: superquantum model reproduces the maximal value 4") {
  const CommandResult cli =
      run_cli("chsh --model superquantum --spacing pi/4");
  const double cli_value = json::parse(cli.output)["results"]["chsh"];

  Stopwatch timer;
  const double value = chsh_from_model(CorrelationModel::superquantum(),
                                       AxisConfiguration::spaced(kPi / 4));
  const double elapsed = timer.seconds();

  const bool ok = cli.exit_code == 0 && std::abs(cli_value - 4.0) <= 1e-12 &&
                  std::abs(value - 4.0) <= 1e-12 && elapsed < 1e-3;
  report(1, ok,
         "cli chsh = " + std::to_string(cli_value) + ", library chsh = " +
             std::to_string(value) + ", " + std::to_string(elapsed * 1e6) +
             " us");
}

TEST_CASE("criterion 2: quantum model sits at 2 sqrt 2") {
  const double at_axes = chsh_from_model(CorrelationModel::quantum(),
                                         AxisConfiguration::spaced(kPi / 4));
  Stopwatch timer;
  const AxisSearchResult best = max_chsh_over_axes(CorrelationModel::quantum());
  const double elapsed = timer.seconds();

  const bool ok = std::abs(at_axes - kQuantumBound) <= 1e-12 &&
                  best.value >= kQuantumBound - 1e-6 &&
                  best.value <= kQuantumBound + 1e-6 && elapsed < 10.0;
  report(2, ok,
         "at pi/4 axes = " + std::to_string(at_axes) + ", search max = " +
             std::to_string(best.value) + " in " + std::to_string(elapsed) +
             " s");
}

TEST_CASE("criterion 3: classical model is capped at 2") {
  const double at_axes = chsh_from_model(CorrelationModel::classical(),
                                         AxisConfiguration::spaced(kPi / 4));
  Stopwatch timer;
  const AxisSearchResult best =
      max_chsh_over_axes(CorrelationModel::classical());
  const double elapsed = timer.seconds();

  const bool ok = std::abs(at_axes - 2.0) <= 1e-12 &&
                  best.value <= 2.0 + 1e-6 && elapsed < 10.0;
  report(3, ok,
         "at pi/4 axes = " + std::to_string(at_axes) + ", search max = " +
             std::to_string(best.value) + " in " + std::to_string(elapsed) +
             " s");
}

TEST_CASE("criterion 4: the PR box is no-signaling") {
  Stopwatch timer;
  const NoSignalingReport report_ns = check_no_signaling(ConditionalBox::pr());
  const double elapsed = timer.seconds();

  const bool ok = report_ns.holds && report_ns.worst_violation < 1e-12 &&
                  elapsed < 1e-3;
  report(4, ok,
         "worst_violation = " + std::to_string(report_ns.worst_violation) +
             ", " + std::to_string(elapsed * 1e6) + " us");
}

TEST_CASE("criterion 5: the local polytope respects the classical bound") {
  Stopwatch timer;
  bool vertices_ok = true;
  for (const ConditionalBox& vertex : deterministic_vertices()) {
    vertices_ok = vertices_ok && std::abs(chsh_of_box(vertex)) == 2.0;
  }

  std::mt19937_64 gen(20260826);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool hull_ok = true;
  double worst_recombination = 0.0;
  for (int trial = 0; trial < 1000 && hull_ok; ++trial) {
    std::array<double, 16> w;
    double sum = 0.0;
    for (double& wi : w) {
      wi = unit(gen);
      sum += wi;
    }
    std::array<double, 16> p{};
    for (int code = 0; code < 16; ++code) {
      for (int i = 0; i < 16; ++i) {
        p[i] += (w[code] / sum) * deterministic_vertices()[code].raw()[i];
      }
    }
    const ConditionalBox box = ConditionalBox::from_probabilities(p);
    hull_ok = hull_ok && std::abs(chsh_of_box(box)) <= 2.0 + 1e-9;
    const LocalityCertificate cert = is_local(box, 1e-9);
    hull_ok = hull_ok && cert.is_local && cert.recombination_error < 1e-9;
    worst_recombination =
        std::max(worst_recombination, cert.recombination_error);
  }
  const double elapsed = timer.seconds();

  const bool ok = vertices_ok && hull_ok && elapsed < 5.0;
  report(5, ok,
         "16 vertices at |CHSH| = 2, 1000 hull samples local, worst "
         "recombination " +
             std::to_string(worst_recombination) + ", " +
             std::to_string(elapsed) + " s");
}

TEST_CASE("criterion 6: nonlocality of the PR and quantum boxes is detected") {
  Stopwatch timer;
  const LocalityCertificate pr_cert = is_local(ConditionalBox::pr());
  const LocalityCertificate quantum_cert =
      is_local(builtin_box("quantum-2sqrt2"));
  const double elapsed = timer.seconds();

  const bool ok = !pr_cert.is_local &&
                  std::abs(pr_cert.violated.value - 4.0) <= 1e-12 &&
                  !quantum_cert.is_local && elapsed < 1.0;
  report(6, ok,
         "PR violated value = " + std::to_string(pr_cert.violated.value) +
             ", quantum box local = " +
             (quantum_cert.is_local ? "true" : "false") + ", " +
             std::to_string(elapsed) + " s");
}

TEST_CASE("criterion 7: seeded sampling reproduces the PR statistics") {
  Stopwatch timer;
  const ExperimentPlan plan{1000000, SettingSchedule::uniform_random(),
                            20260826};
  const Tally tally = run_experiment(ConditionalBox::pr(), plan);
  const auto estimates = estimate_correlators(tally);
  const double s = sampled_chsh(estimates);
  const double se = combined_se(estimates);
  const EmpiricalNoSignalingReport ns = empirical_no_signaling(tally);

  // rerun and a partitioned run must be bit-identical
  const Tally rerun = run_experiment(ConditionalBox::pr(), plan);
  Tally parts[2];
  for (std::uint64_t round = 0; round < plan.rounds; ++round) {
    const auto [x, y] = plan.schedule.setting(plan.seed, round);
    const auto [a, b] = sample_round(ConditionalBox::pr(), x, y, plan.seed,
                                     round);
    parts[round % 2].add(x, y, a, b);
  }
  parts[0].merge(parts[1]);
  const double elapsed = timer.seconds();

  const bool ok = std::abs(s - 4.0) <= 4.0 * se + 1e-15 && ns.max_abs_z < 5.0 &&
                  rerun == tally && parts[0] == tally && elapsed < 30.0;
  report(7, ok,
         "CHSH estimate = " + std::to_string(s) + " (se " +
             std::to_string(se) + "), max |z| = " +
             std::to_string(ns.max_abs_z) + ", reruns identical, " +
             std::to_string(elapsed) + " s");
}

TEST_CASE("criterion 8: antisymmetry holds for all three models") {
  Stopwatch timer;
  double worst = 0.0;
  for (const char* name : {"classical", "quantum", "superquantum"}) {
    worst = std::max(
        worst, antisymmetry_residual(CorrelationModel::from_name(name), 10000));
  }
  const double elapsed = timer.seconds();

  const bool ok = worst < 1e-12 && elapsed < 1.0;
  report(8, ok,
         "max residual = " + std::to_string(worst) + " over 10^4 grid "
         "points, " + std::to_string(elapsed) + " s");
}

TEST_CASE("criterion 9: light-cone geometry of the binary condition") {
  Stopwatch timer;
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  bool agreement = true;
  for (int pair = 0; pair < 10000 && agreement; ++pair) {
    const SpacetimeEvent a{coord(gen), coord(gen)};
    const SpacetimeEvent b{coord(gen), coord(gen)};
    const SpacetimeEvent apex = forward_cone_intersection_apex(a, b);
    for (int probe = 0; probe < 1000; ++probe) {
      const SpacetimeEvent p{coord(gen) * 3, coord(gen) * 3};
      const bool in_both = in_forward_cone(p, a) && in_forward_cone(p, b);
      if (in_both != in_forward_cone(p, apex)) {
        agreement = false;
        break;
      }
    }
  }
  const SpacetimeEvent a{0, -1}, b{0, 1};
  const bool worked = binary_condition(a, b, {-0.5, 0}) &&
                      !binary_condition(a, b, {2, 0});
  const double elapsed = timer.seconds();

  const bool ok = agreement && worked && elapsed < 10.0;
  report(9, ok,
         std::string("10^4 x 10^3 cone-apex probes ") +
             (agreement ? "agree" : "disagree") +
             ", worked J placements correct, " + std::to_string(elapsed) +
             " s");
}

TEST_CASE("criterion 10: jamming is invisible locally but real jointly") {
  Stopwatch timer;
  const JammingScenario scenario{{0.0, -1.0}, {0.0, 1.0}, {-0.5, 0.0},
                                 ConditionalBox::pr(),
                                 ConditionalBox::uniform()};
  const ExperimentPlan plan{1000000, SettingSchedule::uniform_random(),
                            20260826};
  const JammingTranscript transcript =
      simulate_jamming(scenario, plan, ButtonSchedule::parse("bernoulli:0.5"));
  const Tally pressed = transcript.tally(true);
  const Tally unpressed = transcript.tally(false);

  double worst_z = 0.0;
  for (Party party : {Party::Alice, Party::Bob}) {
    for (int local = 0; local < 2; ++local) {
      for (int remote = 0; remote < 2; ++remote) {
        const int x = party == Party::Alice ? local : remote;
        const int y = party == Party::Alice ? remote : local;
        double plus[2], n[2];
        int side = 0;
        for (const Tally* t : {&pressed, &unpressed}) {
          n[side] = static_cast<double>(t->rounds_per_setting(x, y));
          plus[side] = static_cast<double>(
              party == Party::Alice
                  ? t->count(x, y, +1, +1) + t->count(x, y, +1, -1)
                  : t->count(x, y, +1, +1) + t->count(x, y, -1, +1));
          ++side;
        }
        const double pooled = (plus[0] + plus[1]) / (n[0] + n[1]);
        const double var =
            pooled * (1.0 - pooled) * (1.0 / n[0] + 1.0 / n[1]);
        const double z =
            var > 0.0 ? (plus[0] / n[0] - plus[1] / n[1]) / std::sqrt(var)
                      : 0.0;
        worst_z = std::max(worst_z, std::abs(z));
      }
    }
  }

  const auto on_est = estimate_correlators(pressed);
  const auto off_est = estimate_correlators(unpressed);
  const double gap = std::abs(sampled_chsh(on_est) - sampled_chsh(off_est));
  const double gap_se = std::sqrt(combined_se(on_est) * combined_se(on_est) +
                                  combined_se(off_est) * combined_se(off_est));
  const double elapsed = timer.seconds();

  const bool ok = worst_z < 5.0 && gap > 10.0 * gap_se && elapsed < 60.0;
  report(10, ok,
         "pressed-vs-unpressed max |z| = " + std::to_string(worst_z) +
             ", CHSH gap = " + std::to_string(gap) + " at " +
             std::to_string(gap_se) + " combined se, " +
             std::to_string(elapsed) + " s");
}

TEST_CASE("criterion 11: the unary condition forbids deterministic jamming") {
  Stopwatch timer;
  JammingScenario scenario{{0.0, -1.0}, {0.0, 1.0}, {-0.5, 0.0},
                           ConditionalBox::pr(), ConditionalBox::uniform()};
  int admissible = 0;
  for (const ConditionalBox& vertex : deterministic_vertices()) {
    scenario.box_on = vertex;
    if (check_scenario(scenario).admissible) ++admissible;
  }
  const double elapsed = timer.seconds();

  const bool ok = admissible == 0 && elapsed < 1.0;
  report(11, ok,
         std::to_string(admissible) +
             " of 16 deterministic jamming targets admissible, " +
             std::to_string(elapsed) + " s");
}
