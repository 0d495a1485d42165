#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qps/clips.hpp"
#include "qps/rng.hpp"

namespace qps {

/// Update-rule parameters: `damping` pulls every weight back toward 1 each
/// step, `reward` is added to the traversed edge when the trial is rewarded.
struct LearningParams {
  double damping = 0.01;
  double reward = 1.0;

  void validate() const {
    if (damping < 0.0 || damping > 1.0) throw Error("LearningParams: damping outside [0,1]");
    if (reward < 0.0) throw Error("LearningParams: reward must be nonnegative");
  }
};

using EdgePath = std::vector<std::pair<Clip, Clip>>;

/// The episodic memory: directed weighted graph over percept and action
/// clips. Weights never drop below 1, the fixed point of the damping rule.
class WeightedClipGraph {
 public:
  static constexpr double kMinWeight = 1.0;

  void add_clip(Clip clip);
  bool has_clip(Clip clip) const;
  void add_edge(Clip from, Clip to, double weight);
  bool has_edge(Clip from, Clip to) const;
  double weight(Clip from, Clip to) const;
  void set_weight(Clip from, Clip to, double weight);

  const std::vector<Clip>& clips() const { return clips_; }
  int percept_count() const;
  int action_count() const;
  /// Outgoing (target, weight) pairs in insertion order.
  std::vector<std::pair<Clip, double>> outgoing(Clip from) const;

  /// The invasion-game topology: percepts p0..p{n-1} each wired to every
  /// action a0..a{n-1}; no percept-percept or action-action edges.
  static WeightedClipGraph invasion_toy(int n_symbols, double initial_weight = 1.0);

  /// One edge per line: "<from> <to> <weight>". Clips are implied by edges.
  std::string to_adjacency_text() const;
  static WeightedClipGraph from_adjacency_text(std::string_view text);

 private:
  int index_of(Clip clip) const;  // -1 when absent

  std::vector<Clip> clips_;
  std::vector<std::vector<std::pair<int, double>>> out_;  // per clip: (target idx, weight)
};

/// Hop distribution out of `from`: probabilities proportional to weights.
std::vector<std::pair<Clip, double>> hop_probabilities(const WeightedClipGraph& g, Clip from);

struct WalkResult {
  Clip action;
  EdgePath path;
};

/// Random walk from a percept until an action clip absorbs the excitation.
WalkResult walk(const WeightedClipGraph& g, Clip start, Rng& rng, int max_hops = 10000);

/// h <- h - damping*(h - 1) on every edge, then +reward on each traversed
/// edge iff the trial was rewarded.
void update_weights(WeightedClipGraph& g, std::span<const std::pair<Clip, Clip>> traversed,
                    bool rewarded, const LearningParams& params);

}  // namespace qps
