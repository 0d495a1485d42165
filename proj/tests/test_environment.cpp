#include <doctest.h>

#include <cmath>

#include "qps/environment.hpp"
#include "qps/excitation_model.hpp"

using qps::Clip;
using qps::InvasionGame;
using qps::TrialRecord;

TEST_CASE("percept sampling follows the distribution") {
  InvasionGame game = InvasionGame::uniform(2);
  qps::Rng rng(100);
  const int draws = 100000;

  int first = 0;
  for (int i = 0; i < draws; ++i)
    if (qps::next_percept(game, rng) == 0) ++first;
  CHECK(std::abs(static_cast<double>(first) / draws - 0.5) <= 0.005);

  game.percept_distribution = {0.9, 0.1};
  first = 0;
  for (int i = 0; i < draws; ++i)
    if (qps::next_percept(game, rng) == 0) ++first;
  CHECK(std::abs(static_cast<double>(first) / draws - 0.9) <= 0.005);

  game.percept_distribution = {0.0, 1.0};
  for (int i = 0; i < 100; ++i) CHECK(qps::next_percept(game, rng) == 1);
}

TEST_CASE("judge accepts exactly the mapped action") {
  const InvasionGame game = InvasionGame::uniform(3);
  CHECK(qps::judge(game, 0, 0));
  CHECK_FALSE(qps::judge(game, 1, 0));
  for (int i = 0; i < 3; ++i) CHECK(qps::judge(game, i, i));
}

TEST_CASE("game validation rejects broken maps and distributions") {
  InvasionGame game = InvasionGame::uniform(2);
  game.correct_map = {0, 0};
  CHECK_THROWS_AS(game.validate(), qps::Error);
  game = InvasionGame::uniform(2);
  game.percept_distribution = {0.6, 0.6};
  CHECK_THROWS_AS(game.validate(), qps::Error);
}

TEST_CASE("first classical trial starts at the symmetric efficiency") {
  qps::ClassicalAgent agent(qps::WeightedClipGraph::invasion_toy(2),
                            qps::LearningParams{0.0, 1.0});
  const InvasionGame game = InvasionGame::uniform(2);
  qps::Rng rng(1);
  const TrialRecord rec = qps::run_trial(agent, game, 0, rng);
  CHECK(rec.correct_probability == doctest::Approx(0.5));
  CHECK(rec.trial_index == 0);
  CHECK((rec.rewarded == (rec.action == rec.percept)));
}

TEST_CASE("eight rewards on one percept raise its efficiency to 9/10") {
  qps::ClassicalAgent agent(qps::WeightedClipGraph::invasion_toy(2),
                            qps::LearningParams{0.0, 1.0});
  const InvasionGame game = InvasionGame::uniform(2);
  for (int i = 0; i < 8; ++i) {
    qps::DeliberationOutcome out;
    out.action = 0;
    out.action_probabilities = {0.5, 0.5};
    out.path = {{Clip::percept(0), Clip::action(0)}};
    agent.learn(out, 0, qps::judge(game, 0, 0));
  }
  qps::Rng rng(2);
  const auto out = agent.deliberate(0, rng);
  CHECK(out.action_probabilities[0] == doctest::Approx(0.9));
}

TEST_CASE("first quantum trial starts at the symmetric efficiency") {
  qps::QuantumAgentOptions opts;
  qps::ExcitationAgent agent(2, opts);
  const InvasionGame game = InvasionGame::uniform(2);
  qps::Rng rng(3);
  const TrialRecord rec = qps::run_trial(agent, game, 0, rng);
  CHECK(rec.correct_probability == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rec.t_star.has_value());
}

TEST_CASE("mode 2 with a perfect first agent reduces to judged learning") {
  // Agent 1's graph is driven far from symmetric so it acts correctly.
  auto g1 = qps::WeightedClipGraph::invasion_toy(2);
  g1.set_weight(Clip::percept(0), Clip::action(0), 1e9);
  g1.set_weight(Clip::percept(1), Clip::action(1), 1e9);
  qps::ClassicalAgent agent1(g1, qps::LearningParams{0.0, 0.0});
  qps::ClassicalAgent agent2(qps::WeightedClipGraph::invasion_toy(2),
                             qps::LearningParams{0.0, 1.0});
  const InvasionGame game = InvasionGame::uniform(2);
  qps::Rng rng(4);
  for (int t = 0; t < 300; ++t) {
    const auto [rec1, rec2] =
        qps::run_interacting_trial(agent1, agent2, game, qps::InteractionMode::Mode2, t, rng);
    CHECK(rec1.rewarded);
    CHECK(rec2.rewarded == qps::judge(game, rec2.percept, rec2.action));
    CHECK(rec1.percept == rec2.percept);
  }
  // agent 2 has effectively learned under the true reward signal
  qps::Rng probe(5);
  CHECK(agent2.deliberate(0, probe).action_probabilities[0] > 0.9);
}

TEST_CASE("mode 2 trial 0: symmetric agents match with probability ~1/2") {
  qps::Rng rng(6);
  int matches = 0;
  const int reps = 20000;
  const InvasionGame game = InvasionGame::uniform(2);
  for (int i = 0; i < reps; ++i) {
    qps::ClassicalAgent a1(qps::WeightedClipGraph::invasion_toy(2), qps::LearningParams{0.0, 0.0});
    qps::ClassicalAgent a2(qps::WeightedClipGraph::invasion_toy(2), qps::LearningParams{0.0, 0.0});
    const auto [rec1, rec2] =
        qps::run_interacting_trial(a1, a2, game, qps::InteractionMode::Mode2, 0, rng);
    if (rec2.rewarded) ++matches;
  }
  CHECK(std::abs(static_cast<double>(matches) / reps - 0.5) <= 0.01);
}

TEST_CASE("mode 2 reward rate equals the overlap of the action distributions") {
  // Frozen, asymmetric agents: p1 = (0.75, 0.25), p2 = (1/3, 2/3) per percept.
  const InvasionGame game = InvasionGame::uniform(2);
  qps::Rng rng(7);
  auto g1 = qps::WeightedClipGraph::invasion_toy(2);
  auto g2 = qps::WeightedClipGraph::invasion_toy(2);
  for (int p = 0; p < 2; ++p) {
    g1.set_weight(Clip::percept(p), Clip::action(0), 3.0);
    g2.set_weight(Clip::percept(p), Clip::action(1), 2.0);
  }
  qps::ClassicalAgent a1(g1, qps::LearningParams{0.0, 0.0});  // reward 0: frozen
  qps::ClassicalAgent a2(g2, qps::LearningParams{0.0, 0.0});

  int rewarded = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    const auto [rec1, rec2] =
        qps::run_interacting_trial(a1, a2, game, qps::InteractionMode::Mode2, t, rng);
    if (rec2.rewarded) ++rewarded;
  }
  const double expected = 0.75 * (1.0 / 3.0) + 0.25 * (2.0 / 3.0);
  CHECK(std::abs(static_cast<double>(rewarded) / trials - expected) <= 0.01);
}

TEST_CASE("mode 1 relays agent 1's action into agent 2's percept") {
  auto g1 = qps::WeightedClipGraph::invasion_toy(2);
  g1.set_weight(Clip::percept(0), Clip::action(0), 1e9);
  g1.set_weight(Clip::percept(1), Clip::action(1), 1e9);
  qps::ClassicalAgent agent1(g1, qps::LearningParams{0.0, 0.0});
  qps::ClassicalAgent agent2(qps::WeightedClipGraph::invasion_toy(2),
                             qps::LearningParams{0.0, 0.0});
  const InvasionGame game = InvasionGame::uniform(2);
  qps::Rng rng(8);
  int p0_count = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const auto [rec1, rec2] =
        qps::run_interacting_trial(agent1, agent2, game, qps::InteractionMode::Mode1, t, rng);
    CHECK(rec2.percept == rec1.action);
    if (rec2.percept == 0) ++p0_count;
  }
  // deterministic identity relay: agent 2 sees the uniform distribution
  CHECK(std::abs(static_cast<double>(p0_count) / trials - 0.5) <= 0.01);
}

TEST_CASE("efficiency curve statistics are population statistics") {
  const InvasionGame game = InvasionGame::uniform(2);
  std::vector<std::vector<TrialRecord>> ensemble(2);
  TrialRecord r0;
  r0.percept = 0;
  r0.correct_probability = 0.0;
  TrialRecord r1;
  r1.percept = 1;
  r1.correct_probability = 1.0;
  ensemble[0] = {r0};
  ensemble[1] = {r1};
  const auto curve = qps::efficiency_curve(ensemble, game);
  REQUIRE(curve.rows.size() == 1);
  CHECK(curve.rows[0].mean == doctest::Approx(0.5));
  CHECK(curve.rows[0].stddev == doctest::Approx(0.5));
  CHECK(curve.rows[0].percept_mean[0] == doctest::Approx(0.0));
  CHECK(curve.rows[0].percept_mean[1] == doctest::Approx(1.0));
}

TEST_CASE("per-percept means are NaN when nobody drew the percept") {
  const InvasionGame game = InvasionGame::uniform(2);
  TrialRecord rec;
  rec.percept = 0;
  rec.correct_probability = 1.0;
  const std::vector<std::vector<TrialRecord>> ensemble{{rec}};
  const auto curve = qps::efficiency_curve(ensemble, game);
  CHECK(curve.rows[0].percept_mean[0] == doctest::Approx(1.0));
  CHECK(std::isnan(curve.rows[0].percept_mean[1]));
}

TEST_CASE("constant-1 ensembles give mean 1 and std 0") {
  const InvasionGame game = InvasionGame::uniform(2);
  std::vector<std::vector<TrialRecord>> ensemble(3);
  for (auto& records : ensemble) {
    TrialRecord rec;
    rec.correct_probability = 1.0;
    records = {rec, rec};
  }
  const auto curve = qps::efficiency_curve(ensemble, game);
  for (const auto& row : curve.rows) {
    CHECK(row.mean == doctest::Approx(1.0));
    CHECK(row.stddev == doctest::Approx(0.0));
  }
}

TEST_CASE("ragged ensembles are rejected") {
  const InvasionGame game = InvasionGame::uniform(2);
  std::vector<std::vector<TrialRecord>> ensemble(2);
  ensemble[0].resize(3);
  ensemble[1].resize(2);
  CHECK_THROWS_AS(qps::efficiency_curve(ensemble, game), qps::Error);
}

TEST_CASE("efficiency stays in [0,1] and outcome mode stays at 1/2 without rewards") {
  const InvasionGame game = InvasionGame::uniform(2);
  std::vector<std::vector<TrialRecord>> ensemble;
  for (int agent = 0; agent < 1000; ++agent) {
    qps::ClassicalAgent a(qps::WeightedClipGraph::invasion_toy(2),
                          qps::LearningParams{0.01, 0.0});  // reward 0: no learning
    qps::Rng rng = qps::Rng::child(99, static_cast<std::uint64_t>(agent));
    std::vector<TrialRecord> records;
    for (int t = 0; t < 20; ++t) records.push_back(qps::run_trial(a, game, t, rng));
    ensemble.push_back(std::move(records));
  }
  const auto prob_curve = qps::efficiency_curve(ensemble, game, qps::EfficiencySource::Probability);
  const auto out_curve = qps::efficiency_curve(ensemble, game, qps::EfficiencySource::Outcome);
  for (std::size_t t = 0; t < prob_curve.rows.size(); ++t) {
    CHECK(prob_curve.rows[t].mean == doctest::Approx(0.5));  // weights pinned at 1
    CHECK(out_curve.rows[t].mean >= 0.0);
    CHECK(out_curve.rows[t].mean <= 1.0);
    CHECK(std::abs(out_curve.rows[t].mean - 0.5) <= 0.05);
  }
}
