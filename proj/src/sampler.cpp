#include "nonlocal/sampler.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nonlocal {

namespace rng {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t keyed(std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) + counter);
}

double keyed_uniform(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t counter) {
  return static_cast<double>(keyed(seed, stream, counter) >> 11) * 0x1.0p-53;
}

}  // namespace rng

SettingSchedule SettingSchedule::uniform_random() {
  return {ScheduleKind::UniformRandom, 0, 0};
}

SettingSchedule SettingSchedule::fixed(int x, int y) {
  if ((x != 0 && x != 1) || (y != 0 && y != 1)) {
    throw std::invalid_argument("fixed schedule: settings must be bits");
  }
  return {ScheduleKind::Fixed, x, y};
}

SettingSchedule SettingSchedule::round_robin() {
  return {ScheduleKind::RoundRobin, 0, 0};
}

SettingSchedule SettingSchedule::parse(std::string_view text) {
  if (text == "uniform") return uniform_random();
  if (text == "round-robin") return round_robin();
  if (text.rfind("fixed:", 0) == 0 && text.size() == 9 && text[7] == ',') {
    return fixed(text[6] - '0', text[8] - '0');
  }
  throw std::invalid_argument("unknown schedule: " + std::string(text));
}

std::string SettingSchedule::name() const {
  switch (kind) {
    case ScheduleKind::UniformRandom:
      return "uniform";
    case ScheduleKind::RoundRobin:
      return "round-robin";
    case ScheduleKind::Fixed: {
      std::ostringstream s;
      s << "fixed:" << x << "," << y;
      return s.str();
    }
  }
  return "unknown";
}

std::pair<int, int> SettingSchedule::setting(std::uint64_t seed,
                                             std::uint64_t round) const {
  switch (kind) {
    case ScheduleKind::Fixed:
      return {x, y};
    case ScheduleKind::RoundRobin:
      return {static_cast<int>((round >> 1) & 1), static_cast<int>(round & 1)};
    case ScheduleKind::UniformRandom: {
      const std::uint64_t bits = rng::keyed(seed, rng::kSettingStream, round);
      return {static_cast<int>(bits & 1), static_cast<int>((bits >> 1) & 1)};
    }
  }
  throw std::logic_error("unreachable");
}

void Tally::add(int x, int y, int a, int b, std::uint64_t n) {
  counts_[ConditionalBox::index(x, y, a, b)] += n;
}

std::uint64_t Tally::count(int x, int y, int a, int b) const {
  return counts_[ConditionalBox::index(x, y, a, b)];
}

std::uint64_t Tally::rounds_per_setting(int x, int y) const {
  std::uint64_t n = 0;
  for (int as = 0; as < 2; ++as) {
    for (int bs = 0; bs < 2; ++bs) {
      n += count(x, y, slot_outcome(as), slot_outcome(bs));
    }
  }
  return n;
}

std::uint64_t Tally::total() const {
  std::uint64_t n = 0;
  for (std::uint64_t c : counts_) n += c;
  return n;
}

void Tally::merge(const Tally& other) {
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    counts_[i] += other.counts_[i];
  }
}

std::pair<int, int> sample_round(const ConditionalBox& box, int x, int y,
                                 std::uint64_t seed, std::uint64_t round) {
  const double u = rng::keyed_uniform(seed, rng::kOutcomeStream, round);
  double cdf = 0.0;
  for (int as = 0; as < 2; ++as) {
    for (int bs = 0; bs < 2; ++bs) {
      const int a = slot_outcome(as);
      const int b = slot_outcome(bs);
      cdf += box.prob(x, y, a, b);
      if (u < cdf) return {a, b};
    }
  }
  return {-1, -1};  // u landed in rounding slack past the last entry
}

Tally run_experiment(const ConditionalBox& box, const ExperimentPlan& plan) {
  if (plan.rounds < 1) {
    throw std::invalid_argument("run_experiment: rounds must be >= 1");
  }
  Tally tally;
  for (std::uint64_t round = 0; round < plan.rounds; ++round) {
    const auto [x, y] = plan.schedule.setting(plan.seed, round);
    const auto [a, b] = sample_round(box, x, y, plan.seed, round);
    tally.add(x, y, a, b);
  }
  return tally;
}

std::array<CorrelatorEstimate, 4> estimate_correlators(const Tally& tally) {
  std::array<CorrelatorEstimate, 4> estimates{};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      CorrelatorEstimate& est = estimates[2 * x + y];
      const std::uint64_t n = tally.rounds_per_setting(x, y);
      est.rounds = n;
      if (n == 0) {
        est.present = false;
        continue;
      }
      est.present = true;
      const std::uint64_t same = tally.count(x, y, +1, +1) +
                                 tally.count(x, y, -1, -1);
      const std::uint64_t diff = n - same;
      const double nd = static_cast<double>(n);
      est.estimate = (static_cast<double>(same) - static_cast<double>(diff)) /
                     nd;
      if (n < 2) {
        est.standard_error = 0.0;
      } else {
        // products are +-1, so the sum of squares is n
        const double sample_var =
            nd * (1.0 - est.estimate * est.estimate) / (nd - 1.0);
        est.standard_error = std::sqrt(std::max(sample_var, 0.0) / nd);
      }
    }
  }
  return estimates;
}

namespace {

// Pooled two-proportion z. Zero pooled variance with equal proportions is
// reported as z = 0; with unequal proportions it cannot happen.
double two_proportion_z(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2,
                        std::uint64_t n2) {
  const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
  const double pooled =
      static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
  const double var = pooled * (1.0 - pooled) *
                     (1.0 / static_cast<double>(n1) +
                      1.0 / static_cast<double>(n2));
  if (var <= 0.0) return 0.0;
  return (p1 - p2) / std::sqrt(var);
}

}  // namespace

EmpiricalNoSignalingReport empirical_no_signaling(const Tally& tally,
                                                  std::uint64_t min_rounds) {
  EmpiricalNoSignalingReport report{};
  report.sufficient = true;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const std::uint64_t n = tally.rounds_per_setting(x, y);
      if (n == 0) {
        throw std::invalid_argument(
            "empirical_no_signaling: all four settings must be sampled");
      }
      if (n < min_rounds) report.sufficient = false;
    }
  }

  int slot = 0;
  report.max_abs_z = 0.0;
  for (Party party : {Party::Alice, Party::Bob}) {
    for (int local = 0; local < 2; ++local) {
      std::uint64_t plus[2];
      std::uint64_t n[2];
      for (int remote = 0; remote < 2; ++remote) {
        const int x = party == Party::Alice ? local : remote;
        const int y = party == Party::Alice ? remote : local;
        n[remote] = tally.rounds_per_setting(x, y);
        plus[remote] = party == Party::Alice
                           ? tally.count(x, y, +1, +1) +
                                 tally.count(x, y, +1, -1)
                           : tally.count(x, y, +1, +1) +
                                 tally.count(x, y, -1, +1);
      }
      const double z = two_proportion_z(plus[0], n[0], plus[1], n[1]);
      report.comparisons[slot++] = {party, local, z};
      report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
    }
  }
  return report;
}

std::string tally_to_csv(const Tally& tally) {
  std::ostringstream out;
  out << "x,y,a,b,count\n";
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int as = 0; as < 2; ++as) {
        for (int bs = 0; bs < 2; ++bs) {
          const int a = slot_outcome(as);
          const int b = slot_outcome(bs);
          out << x << ',' << y << ',' << a << ',' << b << ','
              << tally.count(x, y, a, b) << '\n';
        }
      }
    }
  }
  return out.str();
}

}  // namespace nonlocal
