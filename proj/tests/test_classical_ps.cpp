#include <doctest.h>

#include <cmath>

#include "qps/agent.hpp"
#include "qps/classical_ps.hpp"

using qps::Clip;
using qps::LearningParams;
using qps::WeightedClipGraph;

namespace {

WeightedClipGraph two_action_graph(double w0, double w1) {
  WeightedClipGraph g;
  g.add_edge(Clip::percept(0), Clip::action(0), w0);
  g.add_edge(Clip::percept(0), Clip::action(1), w1);
  return g;
}

}  // namespace

TEST_CASE("hop probabilities: symmetric, weighted, single-edge") {
  const auto even = qps::hop_probabilities(two_action_graph(1.0, 1.0), Clip::percept(0));
  CHECK(even[0].second == doctest::Approx(0.5));
  CHECK(even[1].second == doctest::Approx(0.5));

  const auto skewed = qps::hop_probabilities(two_action_graph(3.0, 1.0), Clip::percept(0));
  CHECK(skewed[0].second == doctest::Approx(0.75));
  CHECK(skewed[1].second == doctest::Approx(0.25));

  WeightedClipGraph single;
  single.add_edge(Clip::percept(0), Clip::action(1), 2.0);
  const auto one = qps::hop_probabilities(single, Clip::percept(0));
  CHECK(one.size() == 1);
  CHECK(one[0].second == doctest::Approx(1.0));
  CHECK(one[0].first == Clip::action(1));
}

TEST_CASE("hop probabilities sum to one and are scale invariant") {
  const auto base = qps::hop_probabilities(two_action_graph(2.5, 1.5), Clip::percept(0));
  const auto scaled = qps::hop_probabilities(two_action_graph(2.5 * 7.0, 1.5 * 7.0), Clip::percept(0));
  double total = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    total += base[i].second;
    CHECK(std::abs(base[i].second - scaled[i].second) <= 1e-15);
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("a clip with no outgoing edges is rejected") {
  WeightedClipGraph g;
  g.add_clip(Clip::percept(0));
  CHECK_THROWS_AS(qps::hop_probabilities(g, Clip::percept(0)), qps::Error);
}

TEST_CASE("walk on the toy graph takes exactly one hop") {
  auto g = WeightedClipGraph::invasion_toy(2);
  qps::Rng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const auto result = qps::walk(g, Clip::percept(0), rng);
    CHECK(result.action.is_action());
    CHECK(result.path.size() == 1);
    CHECK(result.path[0].first == Clip::percept(0));
  }
}

TEST_CASE("walk frequencies match hop probabilities (Monte Carlo)") {
  auto g = two_action_graph(3.0, 1.0);
  qps::Rng rng(123);
  int hits = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    if (qps::walk(g, Clip::percept(0), rng).action == Clip::action(0)) ++hits;
  CHECK(std::abs(static_cast<double>(hits) / draws - 0.75) <= 0.005);
}

TEST_CASE("deterministic single-edge chains ignore the seed") {
  WeightedClipGraph g;
  g.add_edge(Clip::percept(0), Clip::percept(1), 1.0);
  g.add_edge(Clip::percept(1), Clip::action(0), 1.0);
  for (std::uint64_t seed : {1ull, 99ull, 12345ull}) {
    qps::Rng rng(seed);
    const auto result = qps::walk(g, Clip::percept(0), rng);
    CHECK(result.action == Clip::action(0));
    CHECK(result.path.size() == 2);
  }
}

TEST_CASE("a cycle with no reachable action reports non-absorption") {
  WeightedClipGraph g;
  g.add_edge(Clip::percept(0), Clip::percept(1), 1.0);
  g.add_edge(Clip::percept(1), Clip::percept(0), 1.0);
  qps::Rng rng(4);
  CHECK_THROWS_AS(qps::walk(g, Clip::percept(0), rng, 100), qps::Error);
}

TEST_CASE("update rule arithmetic from the damping equation") {
  // h = 1, damping 0, reward 1, rewarded edge -> 2
  auto g = two_action_graph(1.0, 1.0);
  const qps::EdgePath path{{Clip::percept(0), Clip::action(0)}};
  qps::update_weights(g, path, true, LearningParams{0.0, 1.0});
  CHECK(g.weight(Clip::percept(0), Clip::action(0)) == doctest::Approx(2.0));
  CHECK(g.weight(Clip::percept(0), Clip::action(1)) == doctest::Approx(1.0));

  // h = 3, damping 0.5, unrewarded -> 2
  auto g2 = two_action_graph(3.0, 1.0);
  qps::update_weights(g2, {}, false, LearningParams{0.5, 1.0});
  CHECK(g2.weight(Clip::percept(0), Clip::action(0)) == doctest::Approx(2.0));

  // h = 1 is a fixed point of damping
  auto g3 = two_action_graph(1.0, 1.0);
  qps::update_weights(g3, {}, false, LearningParams{0.7, 1.0});
  CHECK(g3.weight(Clip::percept(0), Clip::action(0)) == doctest::Approx(1.0));
}

TEST_CASE("weights stay at or above 1 under any update sequence") {
  auto g = WeightedClipGraph::invasion_toy(2);
  qps::Rng rng(8);
  const LearningParams params{0.3, 0.8};
  for (int step = 0; step < 200; ++step) {
    const auto result = qps::walk(g, Clip::percept(step % 2), rng);
    qps::update_weights(g, result.path, rng.next_double() < 0.5, params);
    for (const Clip& from : g.clips())
      for (const auto& [to, w] : g.outgoing(from)) CHECK(w >= 1.0 - 1e-12);
  }
}

TEST_CASE("damping 0: n rewards add exactly n * reward") {
  auto g = two_action_graph(1.0, 1.0);
  const qps::EdgePath path{{Clip::percept(0), Clip::action(0)}};
  const LearningParams params{0.0, 0.25};
  for (int n = 1; n <= 8; ++n) {
    qps::update_weights(g, path, true, params);
    CHECK(g.weight(Clip::percept(0), Clip::action(0)) == doctest::Approx(1.0 + 0.25 * n));
  }
}

TEST_CASE("unrewarded weights converge to 1 geometrically") {
  auto g = two_action_graph(5.0, 1.0);
  const LearningParams params{0.25, 1.0};
  double excess = 4.0;
  for (int step = 0; step < 30; ++step) {
    qps::update_weights(g, {}, false, params);
    excess *= 0.75;
    CHECK(g.weight(Clip::percept(0), Clip::action(0)) == doctest::Approx(1.0 + excess));
  }
  CHECK(g.weight(Clip::percept(0), Clip::action(0)) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("adjacency text round-trips the graph") {
  auto g = WeightedClipGraph::invasion_toy(3);
  g.set_weight(Clip::percept(1), Clip::action(2), 4.5);
  const std::string text = g.to_adjacency_text();
  const auto parsed = WeightedClipGraph::from_adjacency_text(text);
  CHECK(parsed.clips().size() == g.clips().size());
  for (const Clip& from : g.clips())
    for (const auto& [to, w] : g.outgoing(from))
      CHECK(parsed.weight(from, to) == doctest::Approx(w).epsilon(1e-15));
  CHECK(parsed.to_adjacency_text() == text);
}

TEST_CASE("adjacency text rejects malformed lines") {
  CHECK_THROWS_AS(WeightedClipGraph::from_adjacency_text("p0 a0\n"), qps::ConfigError);
  CHECK_THROWS_AS(WeightedClipGraph::from_adjacency_text("p0 a0 1.0 extra\n"), qps::ConfigError);
  CHECK_THROWS_AS(WeightedClipGraph::from_adjacency_text("x0 a0 1.0\n"), qps::Error);
}

TEST_CASE("graph construction rejects weights below the floor") {
  WeightedClipGraph g;
  CHECK_THROWS_AS(g.add_edge(Clip::percept(0), Clip::action(0), 0.5), qps::Error);
}

TEST_CASE("classical agent reports its action distribution") {
  qps::ClassicalAgent agent(two_action_graph(3.0, 1.0), LearningParams{0.0, 1.0});
  qps::Rng rng(77);
  const auto out = agent.deliberate(0, rng);
  CHECK(out.action_probabilities.size() == 2);
  CHECK(out.action_probabilities[0] == doctest::Approx(0.75));
  CHECK(out.action_probabilities[1] == doctest::Approx(0.25));
  CHECK_FALSE(out.t_star.has_value());
  CHECK(out.path.size() == 1);
}

TEST_CASE("classical agent learning moves the distribution toward rewards") {
  qps::ClassicalAgent agent(WeightedClipGraph::invasion_toy(2), LearningParams{0.0, 1.0});
  qps::Rng rng(5);
  for (int i = 0; i < 8; ++i) {
    qps::DeliberationOutcome fake;
    fake.action = 0;
    fake.action_probabilities = {0.5, 0.5};
    fake.path = {{Clip::percept(0), Clip::action(0)}};
    agent.learn(fake, 0, true);
  }
  const auto out = agent.deliberate(0, rng);
  CHECK(out.action_probabilities[0] == doctest::Approx(9.0 / 10.0));
}
