#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nonlocal/box.hpp"

namespace nonlocal {

namespace rng {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based keyed generator: the output depends only on
/// (seed, stream, counter), so parallel evaluation in any order is
/// bit-reproducible.
std::uint64_t keyed(std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t counter);

/// Uniform double in [0, 1) from the keyed generator.
double keyed_uniform(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t counter);

/// Stream ids; one stream per independent random decision per round.
inline constexpr std::uint64_t kOutcomeStream = 1;
inline constexpr std::uint64_t kSettingStream = 2;
inline constexpr std::uint64_t kButtonStream = 3;

}  // namespace rng

enum class ScheduleKind { UniformRandom, Fixed, RoundRobin };

struct SettingSchedule {
  ScheduleKind kind = ScheduleKind::UniformRandom;
  int x = 0;  // used by Fixed
  int y = 0;

  static SettingSchedule uniform_random();
  static SettingSchedule fixed(int x, int y);
  static SettingSchedule round_robin();
  /// Accepts "uniform", "round-robin", "fixed:x,y".
  static SettingSchedule parse(std::string_view text);

  std::string name() const;
  /// Setting for the given round; deterministic in (seed, round).
  std::pair<int, int> setting(std::uint64_t seed, std::uint64_t round) const;
};

struct ExperimentPlan {
  std::uint64_t rounds = 1;
  SettingSchedule schedule;
  std::uint64_t seed = 0;
};

/// Outcome counts per (x, y, a, b). Merging is associative and commutative,
/// so partitioned runs tally to the same result.
class Tally {
 public:
  Tally() { counts_.fill(0); }

  void add(int x, int y, int a, int b, std::uint64_t n = 1);
  std::uint64_t count(int x, int y, int a, int b) const;
  std::uint64_t rounds_per_setting(int x, int y) const;
  std::uint64_t total() const;
  void merge(const Tally& other);

  bool operator==(const Tally&) const = default;

 private:
  std::array<std::uint64_t, 16> counts_;
};

/// One joint measurement: the outcome pair is drawn from p(.,.|x,y) by
/// inverse CDF over the four pairs in fixed (a, b) slot order
/// (+1,+1), (+1,-1), (-1,+1), (-1,-1).
std::pair<int, int> sample_round(const ConditionalBox& box, int x, int y,
                                 std::uint64_t seed, std::uint64_t round);

/// Deterministic function of (box, plan); identical re-runs give identical
/// tallies regardless of partitioning.
Tally run_experiment(const ConditionalBox& box, const ExperimentPlan& plan);

struct CorrelatorEstimate {
  bool present;  // false when the setting was never sampled
  double estimate;
  double standard_error;
  std::uint64_t rounds;
};

/// Sample mean and standard error of the +-1 product per setting, indexed by
/// 2x + y.
std::array<CorrelatorEstimate, 4> estimate_correlators(const Tally& tally);

struct MarginalComparison {
  Party party;
  int local_input;
  double z;  // two-proportion z-score across the two remote settings
};

struct EmpiricalNoSignalingReport {
  bool sufficient;  // every setting has at least min_rounds rounds
  double max_abs_z;
  std::array<MarginalComparison, 4> comparisons;
};

/// Two-proportion z-test of each party's empirical marginal across the two
/// remote settings. A z near zero is what no-signaling predicts.
EmpiricalNoSignalingReport empirical_no_signaling(
    const Tally& tally, std::uint64_t min_rounds = 100);

/// Tally rows as "x,y,a,b,count" CSV (with header).
std::string tally_to_csv(const Tally& tally);

}  // namespace nonlocal
