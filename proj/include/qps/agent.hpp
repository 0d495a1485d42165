#pragma once

#include <optional>
#include <vector>

#include "qps/classical_ps.hpp"
#include "qps/rng.hpp"

namespace qps {

/// What one deliberation produced: the sampled action, the agent's current
/// action distribution for the presented percept, and (quantum agents) the
/// deliberation time t*.
struct DeliberationOutcome {
  int action = 0;
  std::vector<double> action_probabilities;
  std::optional<double> t_star;
  std::optional<int> t_star_index;
  EdgePath path;  // traversed edges; classical walks only
};

/// Common face of the three agent variants. Agents are sequential state
/// machines: deliberate, then learn from the reward, trial after trial.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual int percept_count() const = 0;
  virtual int action_count() const = 0;
  virtual DeliberationOutcome deliberate(int percept, Rng& rng) = 0;
  virtual void learn(const DeliberationOutcome& outcome, int percept, bool rewarded) = 0;
};

/// Classical projective-simulation agent on a percept->action clip graph.
/// Probability accounting requires the direct bipartite topology of the
/// invasion game (every outgoing edge of a percept ends at an action).
class ClassicalAgent : public Agent {
 public:
  ClassicalAgent(WeightedClipGraph graph, LearningParams params);

  int percept_count() const override { return graph_.percept_count(); }
  int action_count() const override { return graph_.action_count(); }
  DeliberationOutcome deliberate(int percept, Rng& rng) override;
  void learn(const DeliberationOutcome& outcome, int percept, bool rewarded) override;

  const WeightedClipGraph& graph() const { return graph_; }

 private:
  WeightedClipGraph graph_;
  LearningParams params_;
};

}  // namespace qps
