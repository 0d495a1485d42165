#include "qps/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qps {

InvasionGame InvasionGame::uniform(int n_symbols) {
  InvasionGame game;
  game.n_symbols = n_symbols;
  game.correct_map.resize(static_cast<std::size_t>(n_symbols));
  for (int i = 0; i < n_symbols; ++i) game.correct_map[static_cast<std::size_t>(i)] = i;
  game.percept_distribution.assign(static_cast<std::size_t>(n_symbols), 1.0 / n_symbols);
  game.validate();
  return game;
}

void InvasionGame::validate() const {
  if (n_symbols < 2) throw Error("InvasionGame: need at least 2 symbols");
  if (static_cast<int>(correct_map.size()) != n_symbols)
    throw Error("InvasionGame: correct_map must cover every percept");
  std::vector<bool> hit(static_cast<std::size_t>(n_symbols), false);
  for (int a : correct_map) {
    if (a < 0 || a >= n_symbols || hit[static_cast<std::size_t>(a)])
      throw Error("InvasionGame: correct_map must be a bijection");
    hit[static_cast<std::size_t>(a)] = true;
  }
  if (static_cast<int>(percept_distribution.size()) != n_symbols)
    throw Error("InvasionGame: percept_distribution must cover every percept");
  double total = 0.0;
  for (double p : percept_distribution) {
    if (p < 0.0) throw Error("InvasionGame: negative percept probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error("InvasionGame: percept_distribution must sum to 1");
}

int next_percept(const InvasionGame& game, Rng& rng) {
  return rng.sample_discrete(game.percept_distribution);
}

bool judge(const InvasionGame& game, int percept, int action) {
  if (percept < 0 || percept >= game.n_symbols) throw Error("judge: percept out of range");
  if (action < 0 || action >= game.n_symbols) throw Error("judge: action out of range");
  return game.correct_map[static_cast<std::size_t>(percept)] == action;
}

namespace {

TrialRecord make_record(int trial_index, int percept, const DeliberationOutcome& out,
                        bool rewarded, const InvasionGame& game) {
  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.percept = percept;
  rec.action = out.action;
  rec.rewarded = rewarded;
  rec.correct_probability =
      out.action_probabilities[static_cast<std::size_t>(game.correct_map[static_cast<std::size_t>(percept)])];
  rec.t_star = out.t_star;
  return rec;
}

}  // namespace

TrialRecord run_trial(Agent& agent, const InvasionGame& game, int trial_index, Rng& rng) {
  const int percept = next_percept(game, rng);
  const DeliberationOutcome out = agent.deliberate(percept, rng);
  const bool rewarded = judge(game, percept, out.action);
  agent.learn(out, percept, rewarded);
  return make_record(trial_index, percept, out, rewarded, game);
}

std::pair<TrialRecord, TrialRecord> run_interacting_trial(Agent& agent1, Agent& agent2,
                                                          const InvasionGame& game,
                                                          InteractionMode mode, int trial_index,
                                                          Rng& rng) {
  if (mode == InteractionMode::Mode2) {
    // Shared percept; agent 2 rewards itself only on matching agent 1.
    const int percept = next_percept(game, rng);
    const DeliberationOutcome out1 = agent1.deliberate(percept, rng);
    const bool rewarded1 = judge(game, percept, out1.action);
    agent1.learn(out1, percept, rewarded1);

    const DeliberationOutcome out2 = agent2.deliberate(percept, rng);
    const bool rewarded2 = out2.action == out1.action;
    agent2.learn(out2, percept, rewarded2);

    return {make_record(trial_index, percept, out1, rewarded1, game),
            make_record(trial_index, percept, out2, rewarded2, game)};
  }

  // Mode 1: agent 1's action excites the like-indexed percept of agent 2.
  const TrialRecord rec1 = run_trial(agent1, game, trial_index, rng);
  const int percept2 = rec1.action;
  const DeliberationOutcome out2 = agent2.deliberate(percept2, rng);
  const bool rewarded2 = judge(game, percept2, out2.action);
  agent2.learn(out2, percept2, rewarded2);
  return {rec1, make_record(trial_index, percept2, out2, rewarded2, game)};
}

LearningCurve efficiency_curve(const std::vector<std::vector<TrialRecord>>& ensemble,
                               const InvasionGame& game, EfficiencySource source) {
  if (ensemble.empty()) throw Error("efficiency_curve: empty ensemble");
  const std::size_t trials = ensemble.front().size();
  for (const auto& records : ensemble)
    if (records.size() != trials) throw Error("efficiency_curve: ragged ensemble records");

  const auto value_of = [&](const TrialRecord& rec) {
    if (source == EfficiencySource::Probability) return rec.correct_probability;
    return judge(game, rec.percept, rec.action) ? 1.0 : 0.0;
  };

  LearningCurve curve;
  curve.n_percepts = game.n_symbols;
  curve.rows.resize(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    LearningCurve::Row& row = curve.rows[t];
    row.trial = static_cast<int>(t);
    row.percept_mean.assign(static_cast<std::size_t>(game.n_symbols),
                            std::numeric_limits<double>::quiet_NaN());

    double sum = 0.0, sumsq = 0.0;
    std::vector<double> psum(static_cast<std::size_t>(game.n_symbols), 0.0);
    std::vector<int> pcount(static_cast<std::size_t>(game.n_symbols), 0);
    for (const auto& records : ensemble) {
      const double v = value_of(records[t]);
      sum += v;
      sumsq += v * v;
      psum[static_cast<std::size_t>(records[t].percept)] += v;
      ++pcount[static_cast<std::size_t>(records[t].percept)];
    }
    const double n = static_cast<double>(ensemble.size());
    row.mean = sum / n;
    row.stddev = std::sqrt(std::max(0.0, sumsq / n - row.mean * row.mean));
    for (int p = 0; p < game.n_symbols; ++p)
      if (pcount[static_cast<std::size_t>(p)] > 0)
        row.percept_mean[static_cast<std::size_t>(p)] =
            psum[static_cast<std::size_t>(p)] / pcount[static_cast<std::size_t>(p)];
  }
  return curve;
}

}  // namespace qps
