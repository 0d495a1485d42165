#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qps/agent.hpp"
#include "qps/rng.hpp"

namespace qps {

/// The invasion game: the attacker shows one of n symbols, the defender must
/// learn the symbol -> move map. Defaults: identity map, uniform symbols.
struct InvasionGame {
  int n_symbols = 2;
  std::vector<int> correct_map;            // percept -> action, bijective
  std::vector<double> percept_distribution;  // sums to 1

  static InvasionGame uniform(int n_symbols);
  void validate() const;
};

/// Everything recorded about one trial. `correct_probability` is the agent's
/// probability of the correct action for the drawn percept at deliberation
/// time, i.e. the quantity plotted as learning efficiency.
struct TrialRecord {
  int trial_index = 0;
  int percept = 0;
  int action = 0;
  bool rewarded = false;
  double correct_probability = 0.0;
  std::optional<double> t_star;
};

int next_percept(const InvasionGame& game, Rng& rng);
bool judge(const InvasionGame& game, int percept, int action);

/// Percept draw, deliberation, reward, learning update; one record out.
TrialRecord run_trial(Agent& agent, const InvasionGame& game, int trial_index, Rng& rng);

enum class InteractionMode { Mode1, Mode2 };

/// Two-agent trial.
/// Mode 2: both agents see the same percept; agent 1 is judged by the game,
/// agent 2 is rewarded iff its action matches agent 1's.
/// Mode 1: agent 1 runs a normal trial; its action excites the like-indexed
/// percept of agent 2, which then runs a normal judged trial.
std::pair<TrialRecord, TrialRecord> run_interacting_trial(Agent& agent1, Agent& agent2,
                                                          const InvasionGame& game,
                                                          InteractionMode mode, int trial_index,
                                                          Rng& rng);

enum class EfficiencySource {
  Probability,  // the agent's internal probability of the correct action
  Outcome,      // the empirical 0/1 correctness of the sampled action
};

/// Ensemble statistics per trial: mean and (population) std of the learning
/// efficiency, plus the per-percept mean over the members that drew each
/// percept (NaN when no member drew it).
struct LearningCurve {
  struct Row {
    int trial = 0;
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> percept_mean;
  };

  int n_percepts = 0;
  std::vector<Row> rows;
};

LearningCurve efficiency_curve(const std::vector<std::vector<TrialRecord>>& ensemble,
                               const InvasionGame& game,
                               EfficiencySource source = EfficiencySource::Probability);

}  // namespace qps
