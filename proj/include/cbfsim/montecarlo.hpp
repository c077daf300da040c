#pragma once

#include "cbfsim/policies.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace cbfsim {

// Deterministic scenario stream: mt19937_64 with an explicit 53-bit mapping
// to doubles, so the same seed reproduces the same scenario on any platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  Vec2 disk_point(double radius); // uniform over the disk, by rejection

 private:
  std::mt19937_64 gen_;
};

struct TrialResult {
  std::uint64_t seed = 0;
  PolicyKind policy = PolicyKind::Centralized;
  double radius_margin = 0.0;
  bool converged = false;
  double converge_time = std::numeric_limits<double>::quiet_NaN();
  // Minimum physical barrier over time and pairs; +inf when fewer than 2 agents.
  double h_min = std::numeric_limits<double>::infinity();
  int infeasible_steps = 0; // steps where some QP needed hard-row relaxation
  bool gridlocked = false;  // non-convergent with all agents idle over the last 10 s
};

struct PolicyAggregate {
  PolicyKind policy = PolicyKind::Centralized;
  double radius_margin = 0.0;
  int trials = 0;
  int converged = 0;
  int no_converge = 0;
  double conv_min = std::numeric_limits<double>::quiet_NaN();
  double conv_max = std::numeric_limits<double>::quiet_NaN();
  double conv_mean = std::numeric_limits<double>::quiet_NaN();
  double worst_h_min = std::numeric_limits<double>::infinity();
  int infeasible_trials = 0;
  long infeasible_steps_total = 0;
  int gridlocked = 0;
};

struct BatchResult {
  std::vector<PolicyAggregate> aggregates;      // one per requested policy, input order
  std::vector<std::vector<TrialResult>> trials; // [policy][trial]
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::Centralized;
  double radius_margin = 0.0;
};

// Called at every sample instant with the outcome about to be applied
// (nullptr at the final instant).
using TraceSink = std::function<void(const WorldState&, const StepOutcome*)>;
using TraceFactory = std::function<TraceSink(PolicyKind, int trial)>;

// Uniform starts and goals over the disk of radius outer_radius - r0,
// resampling the whole configuration until no two starts and no two goals
// overlap. Throws after 10^5 rejected configurations.
ScenarioConfig sample_scenario(RngStream& rng, const ScenarioConfig& base);

TrialResult run_trial(const ScenarioConfig& scenario, PolicyKind policy, std::uint64_t seed,
                      const TraceSink& trace = {});

// Trial k draws its scenario from seed base_seed + k; the same scenario list
// is reused for every policy. Trials run in parallel (n_threads = 0 picks the
// hardware count; tracing forces one thread so a single writer emits files).
BatchResult run_batch(int n_trials, const std::vector<PolicySpec>& policies,
                      const ScenarioConfig& base, std::uint64_t base_seed, int n_threads = 0,
                      const TraceFactory& trace_factory = {});

// Rerun with each policy's worst recorded violation folded into its
// constraint radius; the physical barrier in the metrics is unchanged.
BatchResult margin_rerun(const BatchResult& zero_margin, int n_trials,
                         const ScenarioConfig& base, std::uint64_t base_seed, int n_threads = 0);

PolicyAggregate aggregate_trials(const std::vector<TrialResult>& trials, PolicyKind policy,
                                 double radius_margin);

} // namespace cbfsim
