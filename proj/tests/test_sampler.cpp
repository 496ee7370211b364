#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "nonlocal/bell.hpp"
#include "nonlocal/sampler.hpp"

using namespace nonlocal;

TEST_CASE("keyed rng is a pure function of (seed, stream, counter)") {
  CHECK(rng::keyed(42, 1, 7) == rng::keyed(42, 1, 7));
  CHECK(rng::keyed(42, 1, 7) != rng::keyed(42, 2, 7));
  CHECK(rng::keyed(42, 1, 7) != rng::keyed(43, 1, 7));
  const double u = rng::keyed_uniform(5, 1, 0);
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
}

TEST_CASE("schedule parsing round-trips") {
  CHECK(SettingSchedule::parse("uniform").kind == ScheduleKind::UniformRandom);
  CHECK(SettingSchedule::parse("round-robin").kind == ScheduleKind::RoundRobin);
  const auto fixed = SettingSchedule::parse("fixed:1,0");
  CHECK(fixed.kind == ScheduleKind::Fixed);
  CHECK(fixed.x == 1);
  CHECK(fixed.y == 0);
  CHECK(fixed.name() == "fixed:1,0");
  CHECK_THROWS_AS(SettingSchedule::parse("fixed:2,0"), std::invalid_argument);
  CHECK_THROWS_AS(SettingSchedule::parse("sometimes"), std::invalid_argument);
}

TEST_CASE("sample_round on a point-mass box always returns the mass point") {
  const ConditionalBox det = ConditionalBox::deterministic(+1, +1, +1, +1);
  for (std::uint64_t round = 0; round < 100; ++round) {
    const auto [a, b] = sample_round(det, 0, 1, 99, round);
    CHECK(a == +1);
    CHECK(b == +1);
  }
}

TEST_CASE("sample_round on the PR box at (1,1) always disagrees") {
  const ConditionalBox pr = ConditionalBox::pr();
  for (std::uint64_t round = 0; round < 1000; ++round) {
    const auto [a, b] = sample_round(pr, 1, 1, 7, round);
    CHECK(a == -b);
  }
}

TEST_CASE("sample_round on the uniform box passes a chi-square test") {
  const ConditionalBox uniform = ConditionalBox::uniform();
  std::uint64_t counts[4] = {0, 0, 0, 0};
  const std::uint64_t n = 100000;
  for (std::uint64_t round = 0; round < n; ++round) {
    const auto [a, b] = sample_round(uniform, 0, 0, 1234, round);
    counts[2 * outcome_slot(a) + outcome_slot(b)] += 1;
  }
  double chi2 = 0.0;
  const double expected = n / 4.0;
  for (std::uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  // 3 degrees of freedom, significance 0.001
  CHECK(chi2 < 16.27);
}

TEST_CASE("run_experiment honors a fixed schedule") {
  ExperimentPlan plan{100, SettingSchedule::fixed(0, 0), 5};
  const Tally tally = run_experiment(ConditionalBox::pr(), plan);
  CHECK(tally.rounds_per_setting(0, 0) == 100);
  CHECK(tally.total() == 100);
}

TEST_CASE("run_experiment is deterministic in the seed") {
  ExperimentPlan plan{20000, SettingSchedule::uniform_random(), 77};
  const Tally first = run_experiment(ConditionalBox::pr(), plan);
  const Tally second = run_experiment(ConditionalBox::pr(), plan);
  CHECK(first == second);
  plan.seed = 78;
  CHECK_FALSE(run_experiment(ConditionalBox::pr(), plan) == first);
}

TEST_CASE("partitioned tallies merge to the sequential result") {
  // the keyed rng makes rounds order-independent, so any partition of the
  // round range reproduces the full run
  const ConditionalBox box =
      mix(ConditionalBox::pr(), ConditionalBox::uniform(), 0.6);
  ExperimentPlan plan{50000, SettingSchedule::uniform_random(), 31};
  const Tally sequential = run_experiment(box, plan);

  Tally low, high;
  for (std::uint64_t round = 0; round < plan.rounds; ++round) {
    const auto [x, y] = plan.schedule.setting(plan.seed, round);
    const auto [a, b] = sample_round(box, x, y, plan.seed, round);
    (round < plan.rounds / 2 ? low : high).add(x, y, a, b);
  }
  high.merge(low);
  CHECK(high == sequential);
}

TEST_CASE("uniform schedule spreads rounds evenly") {
  ExperimentPlan plan{1000000, SettingSchedule::uniform_random(), 42};
  const Tally tally = run_experiment(ConditionalBox::uniform(), plan);
  const double expected = 250000.0;
  const double sigma = std::sqrt(1000000.0 * 0.25 * 0.75);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double n = static_cast<double>(tally.rounds_per_setting(x, y));
      CHECK(std::abs(n - expected) < 4.0 * sigma);
    }
  }
}

TEST_CASE("estimate_correlators on the PR box converges to (1,1,1,-1)") {
  ExperimentPlan plan{1000000, SettingSchedule::uniform_random(), 42};
  const Tally tally = run_experiment(ConditionalBox::pr(), plan);
  const auto estimates = estimate_correlators(tally);
  const double exact[4] = {1.0, 1.0, 1.0, -1.0};
  for (int i = 0; i < 4; ++i) {
    REQUIRE(estimates[i].present);
    CHECK(std::abs(estimates[i].estimate - exact[i]) <=
          4.0 * estimates[i].standard_error + 1e-15);
  }
}

TEST_CASE("estimate_correlators on a deterministic box has zero error") {
  ExperimentPlan plan{1000, SettingSchedule::round_robin(), 3};
  const Tally tally =
      run_experiment(ConditionalBox::deterministic(+1, +1, +1, +1), plan);
  const auto estimates = estimate_correlators(tally);
  for (const auto& e : estimates) {
    REQUIRE(e.present);
    CHECK(e.estimate == 1.0);
    CHECK(e.standard_error == 0.0);
  }
}

TEST_CASE("estimate_correlators on the uniform box stays near zero") {
  ExperimentPlan plan{1000000, SettingSchedule::uniform_random(), 9};
  const auto estimates =
      estimate_correlators(run_experiment(ConditionalBox::uniform(), plan));
  for (const auto& e : estimates) {
    REQUIRE(e.present);
    CHECK(std::abs(e.estimate) <= 4.0 * e.standard_error);
  }
}

TEST_CASE("estimate_correlators reports unsampled settings as missing") {
  ExperimentPlan plan{100, SettingSchedule::fixed(0, 0), 1};
  const auto estimates =
      estimate_correlators(run_experiment(ConditionalBox::uniform(), plan));
  CHECK(estimates[0].present);
  CHECK_FALSE(estimates[1].present);
  CHECK_FALSE(estimates[2].present);
  CHECK_FALSE(estimates[3].present);
}

TEST_CASE("estimator error shrinks from 1e4 to 1e6 rounds") {
  const ConditionalBox box =
      mix(ConditionalBox::pr(), ConditionalBox::uniform(), 0.5);
  const double exact[4] = {0.5, 0.5, 0.5, -0.5};
  for (std::uint64_t seed : {101, 202, 303}) {
    double errs[2];
    int slot = 0;
    for (std::uint64_t rounds : {std::uint64_t{10000}, std::uint64_t{1000000}}) {
      ExperimentPlan plan{rounds, SettingSchedule::uniform_random(), seed};
      const auto estimates = estimate_correlators(run_experiment(box, plan));
      double worst = 0.0;
      for (int i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(estimates[i].estimate - exact[i]));
      }
      errs[slot++] = worst;
    }
    CHECK(errs[1] < errs[0]);
  }
}

TEST_CASE("sampled CHSH of the PR box converges to 4") {
  ExperimentPlan plan{1000000, SettingSchedule::uniform_random(), 1337};
  const auto estimates =
      estimate_correlators(run_experiment(ConditionalBox::pr(), plan));
  const double s = estimates[0].estimate + estimates[1].estimate +
                   estimates[2].estimate - estimates[3].estimate;
  double var = 0.0;
  for (const auto& e : estimates) {
    var += e.standard_error * e.standard_error;
  }
  CHECK(std::abs(s - 4.0) <= 4.0 * std::sqrt(var) + 1e-15);
}

TEST_CASE("empirical_no_signaling on the PR box stays below 5 sigma") {
  ExperimentPlan plan{1000000, SettingSchedule::uniform_random(), 2718};
  const auto report =
      empirical_no_signaling(run_experiment(ConditionalBox::pr(), plan));
  CHECK(report.sufficient);
  CHECK(report.max_abs_z < 5.0);
}

TEST_CASE("empirical_no_signaling detects a signaling box") {
  // Alice's +1 marginal is 0.6 at y = 0 and 0.5 at y = 1
  std::array<double, 16> p{};
  for (int x = 0; x < 2; ++x) {
    p[ConditionalBox::index(x, 0, +1, +1)] = 0.6;
    p[ConditionalBox::index(x, 0, -1, -1)] = 0.4;
    for (int as = 0; as < 2; ++as) {
      for (int bs = 0; bs < 2; ++bs) {
        p[ConditionalBox::index(x, 1, slot_outcome(as), slot_outcome(bs))] =
            0.25;
      }
    }
  }
  const ConditionalBox box = ConditionalBox::from_probabilities(p);
  ExperimentPlan plan{100000, SettingSchedule::uniform_random(), 55};
  const auto report = empirical_no_signaling(run_experiment(box, plan));
  CHECK(report.max_abs_z > 10.0);
}

TEST_CASE("empirical_no_signaling is exactly zero for a product point mass") {
  ExperimentPlan plan{4000, SettingSchedule::round_robin(), 0};
  const auto report = empirical_no_signaling(
      run_experiment(ConditionalBox::deterministic(+1, -1, +1, -1), plan));
  CHECK(report.max_abs_z == 0.0);
}

TEST_CASE("empirical_no_signaling flags thin settings and missing ones") {
  ExperimentPlan plan{40, SettingSchedule::round_robin(), 0};
  const auto report = empirical_no_signaling(
      run_experiment(ConditionalBox::uniform(), plan));
  CHECK_FALSE(report.sufficient);

  ExperimentPlan fixed_plan{100, SettingSchedule::fixed(1, 1), 0};
  CHECK_THROWS_AS(empirical_no_signaling(
                      run_experiment(ConditionalBox::uniform(), fixed_plan)),
                  std::invalid_argument);
}

TEST_CASE("tally CSV lists all 16 rows with a header") {
  ExperimentPlan plan{16, SettingSchedule::round_robin(), 12};
  const std::string csv =
      tally_to_csv(run_experiment(ConditionalBox::uniform(), plan));
  CHECK(csv.rfind("x,y,a,b,count\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
}
