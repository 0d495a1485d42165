#include <doctest.h>

#include <cmath>

#include "qps/compressed_model.hpp"

using qps::CompressedRegister;
using qps::ComplexMatrix;
using qps::cplx;
using qps::DriveCouplings;

namespace {

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix d = a;
  d -= b;
  return d.max_abs();
}

}  // namespace

TEST_CASE("event encoding matches the register mapping") {
  const CompressedRegister reg22(2, 2);
  CHECK(qps::encode_event_index(0, 1, reg22) == 1);  // |0 0 1>
  CHECK(qps::encode_event_index(1, 0, reg22) == 6);  // |1 1 0>

  const CompressedRegister reg31(3, 1);
  CHECK(qps::encode_event_index(2, 0, reg31) == 5);  // |2 1> in dimension 6

  const auto ket = qps::encode_event(0, 1, reg22);
  CHECK(ket.size() == 8);
  for (int i = 0; i < 8; ++i)
    CHECK(ket[static_cast<std::size_t>(i)] == (i == 1 ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));
}

TEST_CASE("event encoding rejects out-of-range indices") {
  const CompressedRegister reg(2, 2);
  CHECK_THROWS_AS(qps::encode_event(2, 0, reg), qps::Error);
  CHECK_THROWS_AS(qps::encode_event(0, 2, reg), qps::Error);
}

TEST_CASE("single-drive Hamiltonian is one conditional Rabi block") {
  const CompressedRegister reg(2, 1);
  DriveCouplings c = DriveCouplings::uniform(2, 1, 0.0);
  c.lam(0, 0) = 2.5;
  const auto h = qps::build_hamiltonian(c, reg);
  CHECK(h.rows() == 4);
  // sector j=0: 2x2 sigma_x block scaled by 2.5; sector j=1: zero block
  CHECK(h(0, 1) == cplx(2.5, 0.0));
  CHECK(h(1, 0) == cplx(2.5, 0.0));
  for (int r = 2; r < 4; ++r)
    for (int c2 = 0; c2 < 4; ++c2) CHECK(h(r, c2) == cplx(0.0, 0.0));
  CHECK(h.hermitian_deviation() == 0.0);
}

TEST_CASE("on-site term counts excited action qubits") {
  const CompressedRegister reg(2, 2);
  DriveCouplings c = DriveCouplings::uniform(2, 2, 0.0);
  c.epsilon[1] = 3.0;  // action qubit a0
  const auto h = qps::build_hamiltonian(c, reg);
  for (int i = 0; i < 8; ++i) {
    const bool a0_excited = (reg.bits_of(i) & reg.action_bit(0)) != 0;
    CHECK(h(i, i) == (a0_excited ? cplx(3.0, 0.0) : cplx(0.0, 0.0)));
  }
}

TEST_CASE("Hamiltonian never couples different percept values") {
  qps::Rng rng(13);
  const CompressedRegister reg(2, 2);
  DriveCouplings c = DriveCouplings::uniform(2, 2, 0.0);
  for (int j = 0; j < 2; ++j)
    for (int a = 0; a < 2; ++a) c.lam(j, a) = 1.0 + rng.next_double();
  const auto h = qps::build_hamiltonian(c, reg);
  for (int r = 0; r < 8; ++r)
    for (int col = 0; col < 8; ++col)
      if (reg.percept_of(r) != reg.percept_of(col)) CHECK(h(r, col) == cplx(0.0, 0.0));
  CHECK(h.hermitian_deviation() == 0.0);
}

TEST_CASE("each percept sector equals the explicit qubit drive") {
  const CompressedRegister reg(2, 2);
  DriveCouplings c = DriveCouplings::uniform(2, 2, 0.0);
  c.lam(0, 0) = 1.3;
  c.lam(0, 1) = 2.1;
  c.lam(1, 0) = 0.7;
  c.lam(1, 1) = 1.9;
  const auto h = qps::build_hamiltonian(c, reg);

  ComplexMatrix sx(2, 2);
  sx(0, 1) = 1.0;
  sx(1, 0) = 1.0;
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  for (int j = 0; j < 2; ++j) {
    ComplexMatrix expected = qps::kron(sx, i2);
    expected *= cplx(c.lam(j, 0), 0.0);
    ComplexMatrix second = qps::kron(i2, sx);
    second *= cplx(c.lam(j, 1), 0.0);
    expected += second;

    ComplexMatrix sector(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int col = 0; col < 4; ++col) sector(r, col) = h(4 * j + r, 4 * j + col);
    CHECK(max_diff(sector, expected) == 0.0);
  }
}

TEST_CASE("projectors are rank one, orthogonal, and sum to trace d*n") {
  const CompressedRegister reg(2, 2);
  const auto p11 = qps::build_projector(1, 1, reg);
  CHECK(p11(5, 5) == cplx(1.0, 0.0));  // |1 0 1>
  CHECK(p11.trace().real() == doctest::Approx(1.0));
  const auto p00 = qps::build_projector(0, 0, reg);
  CHECK(p00(2, 2) == cplx(1.0, 0.0));  // |0 1 0>

  double total = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const auto p = qps::build_projector(j, k, reg);
      ComplexMatrix idem = p * p;
      CHECK(max_diff(idem, p) == 0.0);
      total += p.trace().real();
      for (int j2 = 0; j2 < 2; ++j2)
        for (int k2 = 0; k2 < 2; ++k2) {
          if (j == j2 && k == k2) continue;
          const ComplexMatrix prod = p * qps::build_projector(j2, k2, reg);
          CHECK(prod.max_abs() == 0.0);
        }
    }
  CHECK(total == doctest::Approx(4.0));
}

TEST_CASE("drive coupling update arithmetic") {
  DriveCouplings c = DriveCouplings::uniform(2, 2, 1.0);
  qps::update_couplings(c, 0, 0, true, 0.0, 0.5);
  CHECK(c.lam(0, 0) == doctest::Approx(1.5));
  CHECK(c.lam(0, 1) == doctest::Approx(1.0));
  CHECK(c.lam(1, 0) == doctest::Approx(1.0));

  c.lam(1, 1) = 2.0;
  qps::update_couplings(c, 1, 1, false, 1.0, 1.0);
  CHECK(c.lam(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("percept marginal is constant under the block-diagonal evolution") {
  qps::QuantumAgentOptions opts;
  qps::CompressedAgent agent(2, opts);
  agent.couplings().lam(0, 0) = 1.7;
  agent.couplings().lam(0, 1) = 1.2;

  const auto h = qps::build_hamiltonian(agent.couplings(), agent.reg());
  std::vector<cplx> psi0(8, cplx(0.0, 0.0));
  psi0[0] = 1.0;  // |0 0 0>
  const qps::TimeGrid grid(0.0, 2.0 * M_PI, 201);
  const auto traj = qps::evolve_closed(h, psi0, grid);

  ComplexMatrix block0(8, 8);
  for (int bits = 0; bits < 4; ++bits) block0(bits, bits) = 1.0;
  const auto marginal = qps::observable_series(traj, block0);
  for (double v : marginal) CHECK(std::abs(v - 1.0) <= 1e-9);
}

TEST_CASE("single nonzero coupling: conditional Rabi deliberation") {
  for (double omega : {0.5, 1.0, 2.0}) {
    qps::QuantumAgentOptions opts;
    qps::CompressedAgent agent(2, opts);
    agent.couplings().lam(0, 0) = omega;
    agent.couplings().lam(0, 1) = 0.0;
    agent.couplings().lam(1, 0) = 0.0;
    agent.couplings().lam(1, 1) = 0.0;
    qps::Rng rng(9);
    const auto out = agent.deliberate(0, rng);
    CHECK(out.action == 0);
    CHECK(out.action_probabilities[0] >= 1.0 - 1e-6);
    REQUIRE(out.t_star.has_value());
    CHECK(std::abs(*out.t_star - M_PI / (2.0 * omega)) <= opts.grid.dt() + 1e-12);
  }
}

TEST_CASE("mirrored coupling drives the mirrored action") {
  qps::QuantumAgentOptions opts;
  qps::CompressedAgent agent(2, opts);
  agent.couplings().lam(0, 0) = 0.0;
  agent.couplings().lam(0, 1) = 0.0;
  agent.couplings().lam(1, 0) = 0.0;
  agent.couplings().lam(1, 1) = 1.0;
  qps::Rng rng(10);
  const auto out = agent.deliberate(1, rng);
  CHECK(out.action == 1);
  CHECK(out.action_probabilities[1] >= 1.0 - 1e-6);
  CHECK(std::abs(*out.t_star - M_PI / 2.0) <= opts.grid.dt() + 1e-12);
}

TEST_CASE("symmetric drives keep the action distribution symmetric") {
  qps::QuantumAgentOptions opts;
  qps::CompressedAgent agent(2, opts);
  qps::Rng rng(12);
  const auto out = agent.deliberate(0, rng);
  CHECK(out.action_probabilities[0] == doctest::Approx(out.action_probabilities[1]).epsilon(1e-9));
}

TEST_CASE("action-qubit damping lowers the population peak, trace stays 1") {
  const CompressedRegister reg(2, 2);
  DriveCouplings c = DriveCouplings::uniform(2, 2, 1.0);
  c.lam(0, 0) = 2.0;
  const auto h = qps::build_hamiltonian(c, reg);
  const qps::TimeGrid grid(0.0, 2.0 * M_PI, 401);

  // lowering operators on both action qubits at rate 0.3
  std::vector<qps::JumpOperator> jumps;
  for (int a = 0; a < 2; ++a) {
    const int mask = reg.action_bit(a);
    ComplexMatrix lower(8, 8);
    for (int i = 0; i < 8; ++i)
      if (reg.bits_of(i) & mask) lower(i ^ mask, i) = 1.0;
    jumps.push_back({lower, 0.3});
  }

  ComplexMatrix rho0(8, 8);
  rho0(0, 0) = 1.0;
  const auto damped = qps::evolve_lindblad(h, jumps, rho0, grid);
  std::vector<qps::cplx> psi0(8, cplx(0.0, 0.0));
  psi0[0] = 1.0;
  const auto ideal = qps::evolve_closed(h, psi0, grid);

  const auto p00 = qps::build_projector(0, 0, reg);
  const auto damped_series = qps::observable_series(damped, p00);
  const auto ideal_series = qps::observable_series(ideal, p00);
  const double damped_peak = *std::max_element(damped_series.begin(), damped_series.end());
  const double ideal_peak = *std::max_element(ideal_series.begin(), ideal_series.end());
  CHECK(damped_peak < ideal_peak);
  for (int n = 0; n < grid.n_points; ++n)
    CHECK(std::abs(damped.rho_at(n).trace().real() - 1.0) <= 1e-8);

  // the agent still produces a normalized distribution under damping
  qps::QuantumAgentOptions opts;
  opts.decay = 0.3;
  qps::CompressedAgent agent(2, opts);
  agent.couplings().lam(0, 0) = 2.0;
  qps::Rng rng(14);
  const auto out = agent.deliberate(0, rng);
  CHECK(out.action_probabilities[0] + out.action_probabilities[1] == doctest::Approx(1.0));
}

TEST_CASE("deliberation fails cleanly when nothing ever drives an action") {
  qps::QuantumAgentOptions opts;
  qps::CompressedAgent agent(2, opts);
  agent.couplings().lam(0, 0) = 0.0;
  agent.couplings().lam(0, 1) = 0.0;
  qps::Rng rng(15);
  CHECK_THROWS_AS(agent.deliberate(0, rng), qps::Error);
}
