#include "qps/compressed_model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace qps {

int encode_event_index(int percept, int action, const CompressedRegister& reg) {
  return reg.basis_index(percept, reg.action_bit(action));
}

std::vector<cplx> encode_event(int percept, int action, const CompressedRegister& reg) {
  std::vector<cplx> ket(static_cast<std::size_t>(reg.dimension()), cplx(0.0, 0.0));
  ket[static_cast<std::size_t>(encode_event_index(percept, action, reg))] = 1.0;
  return ket;
}

DriveCouplings DriveCouplings::uniform(int d, int n_actions, double lambda_init) {
  DriveCouplings c;
  c.d = d;
  c.n_actions = n_actions;
  c.lambda.assign(static_cast<std::size_t>(d) * n_actions, lambda_init);
  c.epsilon.assign(static_cast<std::size_t>(1 + n_actions), 0.0);
  return c;
}

void DriveCouplings::validate(const CompressedRegister& reg) const {
  if (d != reg.d || n_actions != reg.n_actions)
    throw Error("DriveCouplings: shape does not match register");
  if (lambda.size() != static_cast<std::size_t>(d) * n_actions)
    throw Error("DriveCouplings: lambda matrix has wrong size");
  if (epsilon.size() != static_cast<std::size_t>(1 + n_actions))
    throw Error("DriveCouplings: epsilon needs 1 + n_actions entries");
  for (double v : lambda)
    if (v < 0.0) throw Error("DriveCouplings: lambda must be nonnegative");
}

ComplexMatrix build_hamiltonian(const DriveCouplings& c, const CompressedRegister& reg) {
  c.validate(reg);
  const int dim = reg.dimension();
  const int n_bits = 1 << reg.n_actions;
  ComplexMatrix h(dim, dim);

  for (int j = 0; j < reg.d; ++j)
    for (int a = 0; a < reg.n_actions; ++a) {
      const double lam = c.lam(j, a);
      if (lam == 0.0) continue;
      const int mask = reg.action_bit(a);
      for (int bits = 0; bits < n_bits; ++bits)
        h(reg.basis_index(j, bits), reg.basis_index(j, bits ^ mask)) += lam;
    }

  for (int j = 0; j < reg.d; ++j)
    for (int bits = 0; bits < n_bits; ++bits) {
      double onsite = c.epsilon[0] * j;  // percept-register number operator
      for (int a = 0; a < reg.n_actions; ++a)
        if (bits & reg.action_bit(a)) onsite += c.epsilon[static_cast<std::size_t>(1 + a)];
      if (onsite != 0.0) h(reg.basis_index(j, bits), reg.basis_index(j, bits)) += onsite;
    }
  return h;
}

ComplexMatrix build_projector(int percept, int action, const CompressedRegister& reg) {
  const int idx = encode_event_index(percept, action, reg);
  return ComplexMatrix::unit_entry(reg.dimension(), idx, idx);
}

void update_couplings(DriveCouplings& c, int percept, int action, bool rewarded, double damping,
                      double reward) {
  if (damping < 0.0 || damping > 1.0) throw Error("update_couplings: damping outside [0,1]");
  if (reward < 0.0) throw Error("update_couplings: reward must be nonnegative");
  if (percept < 0 || percept >= c.d || action < 0 || action >= c.n_actions)
    throw Error("update_couplings: index out of range");

  for (double& v : c.lambda) v -= damping * (v - 1.0);
  if (rewarded) c.lam(percept, action) += reward;
}

namespace {

// Lowering operator on action qubit a of the full register: acts inside
// every percept block, |bits without a><bits with a|.
ComplexMatrix action_lowering(int action, const CompressedRegister& reg) {
  const int dim = reg.dimension();
  const int mask = reg.action_bit(action);
  ComplexMatrix op(dim, dim);
  for (int i = 0; i < dim; ++i)
    if (reg.bits_of(i) & mask) op(i ^ mask, i) = 1.0;
  return op;
}

// Projector onto percept value j across all action configurations.
ComplexMatrix percept_block_projector(int j, const CompressedRegister& reg) {
  const int dim = reg.dimension();
  ComplexMatrix op(dim, dim);
  for (int bits = 0; bits < (1 << reg.n_actions); ++bits) {
    const int i = reg.basis_index(j, bits);
    op(i, i) = 1.0;
  }
  return op;
}

}  // namespace

CompressedAgent::CompressedAgent(int n_symbols, QuantumAgentOptions options)
    : reg_(n_symbols, n_symbols),
      options_(options),
      couplings_(DriveCouplings::uniform(n_symbols, n_symbols, options.lambda_init)) {
  if (options.damping < 0.0 || options.damping > 1.0)
    throw Error("CompressedAgent: damping outside [0,1]");
  if (options.reward < 0.0 || options.decay < 0.0 || options.dephasing < 0.0)
    throw Error("CompressedAgent: rates must be nonnegative");
}

DeliberationOutcome CompressedAgent::deliberate(int percept, Rng& rng) {
  if (percept < 0 || percept >= reg_.d) throw Error("deliberate: percept out of range");
  const int dim = reg_.dimension();
  const int start = reg_.basis_index(percept, 0);

  const ComplexMatrix h = build_hamiltonian(couplings_, reg_);

  std::vector<JumpOperator> jumps;
  if (options_.decay > 0.0)
    for (int a = 0; a < reg_.n_actions; ++a)
      jumps.push_back({action_lowering(a, reg_), options_.decay});
  if (options_.dephasing > 0.0)
    for (int j = 0; j < reg_.d; ++j)
      jumps.push_back({percept_block_projector(j, reg_), options_.dephasing});

  std::optional<Trajectory> traj;
  if (jumps.empty()) {
    std::vector<cplx> psi0(static_cast<std::size_t>(dim), cplx(0.0, 0.0));
    psi0[static_cast<std::size_t>(start)] = 1.0;
    traj.emplace(evolve_closed(h, psi0, options_.grid));
  } else {
    ComplexMatrix rho0(dim, dim);
    rho0(start, start) = 1.0;
    traj.emplace(evolve_lindblad(h, jumps, rho0, options_.grid));
  }

  std::vector<std::vector<double>> action_series;
  action_series.reserve(static_cast<std::size_t>(reg_.n_actions));
  for (int a = 0; a < reg_.n_actions; ++a)
    action_series.push_back(observable_series(*traj, build_projector(percept, a, reg_)));

  std::vector<double> total(action_series.front().size(), 0.0);
  for (const auto& series : action_series)
    for (std::size_t n = 0; n < total.size(); ++n) total[n] += series[n];

  const PeakPoint peak = first_peak_time(total, options_.grid, options_.peak_strategy);

  std::vector<double> probs(static_cast<std::size_t>(reg_.n_actions), 0.0);
  double sum = 0.0;
  for (int a = 0; a < reg_.n_actions; ++a) {
    const double v = std::max(0.0, action_series[static_cast<std::size_t>(a)]
                                                [static_cast<std::size_t>(peak.index)]);
    probs[static_cast<std::size_t>(a)] = v;
    sum += v;
  }
  if (sum <= 1e-12)
    throw Error("deliberation failure: all action probabilities vanish at t*");
  for (double& p : probs) p /= sum;

  DeliberationOutcome out;
  out.action = rng.sample_discrete(probs);
  out.action_probabilities = std::move(probs);
  out.t_star = peak.time;
  out.t_star_index = peak.index;
  return out;
}

void CompressedAgent::learn(const DeliberationOutcome& outcome, int percept, bool rewarded) {
  update_couplings(couplings_, percept, outcome.action, rewarded, options_.damping,
                   options_.reward);
}

}  // namespace qps
