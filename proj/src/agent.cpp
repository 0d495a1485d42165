#include "qps/agent.hpp"

#include <utility>

namespace qps {

ClassicalAgent::ClassicalAgent(WeightedClipGraph graph, LearningParams params)
    : graph_(std::move(graph)), params_(params) {
  params_.validate();
  if (graph_.percept_count() == 0 || graph_.action_count() == 0)
    throw Error("ClassicalAgent: graph needs at least one percept and one action");
}

DeliberationOutcome ClassicalAgent::deliberate(int percept, Rng& rng) {
  const Clip start = Clip::percept(percept);
  if (!graph_.has_clip(start)) throw Error("unknown percept " + start.label());

  DeliberationOutcome out;
  out.action_probabilities.assign(static_cast<std::size_t>(action_count()), 0.0);
  for (const auto& [clip, p] : hop_probabilities(graph_, start)) {
    if (!clip.is_action())
      throw Error("probability accounting needs direct percept->action edges, found " +
                  start.label() + " -> " + clip.label());
    out.action_probabilities[static_cast<std::size_t>(clip.index)] += p;
  }

  const WalkResult result = walk(graph_, start, rng);
  out.action = result.action.index;
  out.path = result.path;
  return out;
}

void ClassicalAgent::learn(const DeliberationOutcome& outcome, int /*percept*/, bool rewarded) {
  update_weights(graph_, outcome.path, rewarded, params_);
}

}  // namespace qps
