#include "qps/classical_ps.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qps {

Clip Clip::from_label(const std::string& text) {
  if (text.size() < 2 || (text[0] != 'p' && text[0] != 'a'))
    throw Error("clip label must look like p<i> or a<k>, got '" + text + "'");
  for (std::size_t i = 1; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw Error("clip label must look like p<i> or a<k>, got '" + text + "'");
  const int idx = std::stoi(text.substr(1));
  return text[0] == 'p' ? Clip::percept(idx) : Clip::action(idx);
}

int WeightedClipGraph::index_of(Clip clip) const {
  for (std::size_t i = 0; i < clips_.size(); ++i)
    if (clips_[i] == clip) return static_cast<int>(i);
  return -1;
}

void WeightedClipGraph::add_clip(Clip clip) {
  if (index_of(clip) >= 0) return;
  clips_.push_back(clip);
  out_.emplace_back();
}

bool WeightedClipGraph::has_clip(Clip clip) const { return index_of(clip) >= 0; }

void WeightedClipGraph::add_edge(Clip from, Clip to, double weight) {
  if (weight < kMinWeight) throw Error("edge weight below 1: " + std::to_string(weight));
  add_clip(from);
  add_clip(to);
  const int fi = index_of(from), ti = index_of(to);
  for (auto& [target, w] : out_[static_cast<std::size_t>(fi)])
    if (target == ti) {
      w = weight;
      return;
    }
  out_[static_cast<std::size_t>(fi)].emplace_back(ti, weight);
}

bool WeightedClipGraph::has_edge(Clip from, Clip to) const {
  const int fi = index_of(from), ti = index_of(to);
  if (fi < 0 || ti < 0) return false;
  for (const auto& [target, w] : out_[static_cast<std::size_t>(fi)])
    if (target == ti) return true;
  return false;
}

double WeightedClipGraph::weight(Clip from, Clip to) const {
  const int fi = index_of(from), ti = index_of(to);
  if (fi >= 0 && ti >= 0)
    for (const auto& [target, w] : out_[static_cast<std::size_t>(fi)])
      if (target == ti) return w;
  throw Error("no edge " + from.label() + " -> " + to.label());
}

void WeightedClipGraph::set_weight(Clip from, Clip to, double weight) {
  if (weight < kMinWeight) throw Error("edge weight below 1: " + std::to_string(weight));
  const int fi = index_of(from), ti = index_of(to);
  if (fi >= 0 && ti >= 0)
    for (auto& [target, w] : out_[static_cast<std::size_t>(fi)])
      if (target == ti) {
        w = weight;
        return;
      }
  throw Error("no edge " + from.label() + " -> " + to.label());
}

int WeightedClipGraph::percept_count() const {
  return static_cast<int>(std::count_if(clips_.begin(), clips_.end(),
                                        [](Clip c) { return c.is_percept(); }));
}

int WeightedClipGraph::action_count() const {
  return static_cast<int>(clips_.size()) - percept_count();
}

std::vector<std::pair<Clip, double>> WeightedClipGraph::outgoing(Clip from) const {
  const int fi = index_of(from);
  if (fi < 0) throw Error("unknown clip " + from.label());
  std::vector<std::pair<Clip, double>> result;
  for (const auto& [target, w] : out_[static_cast<std::size_t>(fi)])
    result.emplace_back(clips_[static_cast<std::size_t>(target)], w);
  return result;
}

WeightedClipGraph WeightedClipGraph::invasion_toy(int n_symbols, double initial_weight) {
  if (n_symbols < 2) throw Error("invasion_toy: need at least 2 symbols");
  WeightedClipGraph g;
  for (int i = 0; i < n_symbols; ++i) g.add_clip(Clip::percept(i));
  for (int k = 0; k < n_symbols; ++k) g.add_clip(Clip::action(k));
  for (int i = 0; i < n_symbols; ++i)
    for (int k = 0; k < n_symbols; ++k) g.add_edge(Clip::percept(i), Clip::action(k), initial_weight);
  return g;
}

std::string WeightedClipGraph::to_adjacency_text() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < clips_.size(); ++i)
    for (const auto& [target, w] : out_[i])
      out << clips_[i].label() << ' ' << clips_[static_cast<std::size_t>(target)].label() << ' '
          << w << '\n';
  return out.str();
}

WeightedClipGraph WeightedClipGraph::from_adjacency_text(std::string_view text) {
  WeightedClipGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string from_label, to_label;
    double weight = 0.0;
    if (!(fields >> from_label >> to_label >> weight))
      throw ConfigError(line_no, "expected '<from> <to> <weight>'");
    std::string extra;
    if (fields >> extra) throw ConfigError(line_no, "trailing content '" + extra + "'");
    g.add_edge(Clip::from_label(from_label), Clip::from_label(to_label), weight);
  }
  return g;
}

std::vector<std::pair<Clip, double>> hop_probabilities(const WeightedClipGraph& g, Clip from) {
  auto targets = g.outgoing(from);
  if (targets.empty()) throw Error("clip " + from.label() + " has no outgoing edges");
  double total = 0.0;
  for (const auto& [clip, w] : targets) total += w;
  for (auto& [clip, w] : targets) w /= total;
  return targets;
}

WalkResult walk(const WeightedClipGraph& g, Clip start, Rng& rng, int max_hops) {
  if (!start.is_percept()) throw Error("walk must start at a percept clip");
  WalkResult result{start, {}};
  Clip current = start;
  for (int hop = 0; hop < max_hops; ++hop) {
    if (current.is_action()) {
      result.action = current;
      return result;
    }
    const auto probs = hop_probabilities(g, current);
    std::vector<double> weights;
    weights.reserve(probs.size());
    for (const auto& [clip, p] : probs) weights.push_back(p);
    const Clip next = probs[static_cast<std::size_t>(rng.sample_discrete(weights))].first;
    result.path.emplace_back(current, next);
    current = next;
  }
  throw Error("walk did not reach an action clip within " + std::to_string(max_hops) + " hops");
}

void update_weights(WeightedClipGraph& g, std::span<const std::pair<Clip, Clip>> traversed,
                    bool rewarded, const LearningParams& params) {
  params.validate();
  for (const Clip& from : g.clips()) {
    for (const auto& [to, w] : g.outgoing(from)) {
      const double damped = w - params.damping * (w - 1.0);
      g.set_weight(from, to, damped);
    }
  }
  if (rewarded)
    for (const auto& [from, to] : traversed)
      g.set_weight(from, to, g.weight(from, to) + params.reward);
}

}  // namespace qps
