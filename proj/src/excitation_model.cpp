#include "qps/excitation_model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace qps {

int ExcitationBasis::index_of(Clip clip) const {
  for (std::size_t i = 0; i < mode_labels.size(); ++i)
    if (mode_labels[i] == clip) return static_cast<int>(i);
  throw Error("basis does not contain clip " + clip.label());
}

int ExcitationBasis::vacuum_index() const {
  if (!include_vacuum) throw Error("basis has no vacuum state");
  return static_cast<int>(mode_labels.size());
}

std::pair<Clip, Clip> CouplingSpec::canonical(Clip a, Clip b) {
  if (a == b) throw Error("coupling needs two distinct clips");
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

void CouplingSpec::set_lambda(Clip a, Clip b, double value) {
  if (value < 0.0) throw Error("lambda must be nonnegative");
  lambda_[canonical(a, b)] = value;
}

double CouplingSpec::lambda(Clip a, Clip b) const {
  const auto it = lambda_.find(canonical(a, b));
  return it == lambda_.end() ? 0.0 : it->second;
}

bool CouplingSpec::has_edge(Clip a, Clip b) const {
  return lambda_.find(canonical(a, b)) != lambda_.end();
}

void CouplingSpec::set_epsilon(Clip clip, double value) { epsilon_[clip] = value; }

double CouplingSpec::epsilon(Clip clip) const {
  const auto it = epsilon_.find(clip);
  return it == epsilon_.end() ? 0.0 : it->second;
}

void CouplingSpec::set_kappa(Clip from, Clip to, double rate) {
  if (rate < 0.0) throw Error("kappa must be nonnegative");
  if (from == to) throw Error("kappa needs two distinct clips");
  kappa_[{from, to}] = rate;
}

ComplexMatrix build_hamiltonian_sector(const CouplingSpec& spec, const ExcitationBasis& basis) {
  ComplexMatrix h(basis.dimension(), basis.dimension());
  for (const auto& [edge, value] : spec.lambdas()) {
    const int j = basis.index_of(edge.first);
    const int k = basis.index_of(edge.second);
    h(j, k) = value;
    h(k, j) = value;
  }
  for (std::size_t i = 0; i < basis.mode_labels.size(); ++i) {
    const double eps = spec.epsilon(basis.mode_labels[i]);
    if (eps != 0.0) h(static_cast<int>(i), static_cast<int>(i)) = eps;
  }
  return h;
}

namespace {

// Qubit lowering operator for mode j of n, mode 0 on the most significant bit.
ComplexMatrix fock_lowering(int mode, int n_modes) {
  static const auto sigma_minus = [] {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;  // |0><1|
    return m;
  }();
  ComplexMatrix op = ComplexMatrix::identity(1);
  for (int m = 0; m < n_modes; ++m)
    op = kron(op, m == mode ? sigma_minus : ComplexMatrix::identity(2));
  return op;
}

}  // namespace

ComplexMatrix build_hamiltonian_fock(const CouplingSpec& spec, std::span<const Clip> modes) {
  const int n = static_cast<int>(modes.size());
  if (n < 1) throw Error("build_hamiltonian_fock: need at least one mode");
  if (n > 4) throw Error("build_hamiltonian_fock: dimension cap exceeded (max 4 clips)");

  const auto mode_index = [&](Clip c) {
    for (int i = 0; i < n; ++i)
      if (modes[static_cast<std::size_t>(i)] == c) return i;
    throw Error("fock build: unknown clip " + c.label());
  };

  const int dim = 1 << n;
  ComplexMatrix h(dim, dim);
  for (const auto& [edge, value] : spec.lambdas()) {
    const ComplexMatrix cj = fock_lowering(mode_index(edge.first), n);
    const ComplexMatrix ck = fock_lowering(mode_index(edge.second), n);
    ComplexMatrix hop = ck.adjoint() * cj;
    hop += cj.adjoint() * ck;
    hop *= cplx(value, 0.0);
    h += hop;
  }
  for (int m = 0; m < n; ++m) {
    const double eps = spec.epsilon(modes[static_cast<std::size_t>(m)]);
    if (eps == 0.0) continue;
    const ComplexMatrix cm = fock_lowering(m, n);
    ComplexMatrix number = cm.adjoint() * cm;
    number *= cplx(eps, 0.0);
    h += number;
  }
  return h;
}

std::vector<JumpOperator> build_jumps(const CouplingSpec& spec, const ExcitationBasis& basis) {
  if (spec.decay > 0.0 && !basis.include_vacuum)
    throw Error("amplitude decay requires the vacuum state in the basis");

  std::vector<JumpOperator> jumps;
  const int dim = basis.dimension();
  for (const auto& [edge, rate] : spec.kappas()) {
    if (rate <= 0.0) continue;
    const int j = basis.index_of(edge.first);
    const int k = basis.index_of(edge.second);
    jumps.push_back({ComplexMatrix::unit_entry(dim, k, j), rate});
  }
  if (spec.decay > 0.0) {
    const int vac = basis.vacuum_index();
    for (std::size_t i = 0; i < basis.mode_labels.size(); ++i)
      jumps.push_back({ComplexMatrix::unit_entry(dim, vac, static_cast<int>(i)), spec.decay});
  }
  return jumps;
}

void update_couplings(CouplingSpec& spec, std::pair<Clip, Clip> traversed, bool rewarded,
                      double damping, double reward) {
  if (damping < 0.0 || damping > 1.0) throw Error("update_couplings: damping outside [0,1]");
  if (reward < 0.0) throw Error("update_couplings: reward must be nonnegative");

  std::vector<std::pair<Clip, Clip>> edges;
  edges.reserve(spec.lambdas().size());
  for (const auto& [edge, value] : spec.lambdas()) edges.push_back(edge);
  for (const auto& edge : edges) {
    const double v = spec.lambda(edge.first, edge.second);
    spec.set_lambda(edge.first, edge.second, v - damping * (v - 1.0));
  }
  if (rewarded) {
    if (!spec.has_edge(traversed.first, traversed.second))
      throw Error("update_couplings: traversed edge is not in the graph");
    const double v = spec.lambda(traversed.first, traversed.second);
    spec.set_lambda(traversed.first, traversed.second, v + reward);
  }
}

ExcitationAgent::ExcitationAgent(int n_symbols, QuantumAgentOptions options)
    : n_symbols_(n_symbols), options_(options) {
  if (n_symbols < 1) throw Error("ExcitationAgent: need at least one symbol");
  if (options.damping < 0.0 || options.damping > 1.0)
    throw Error("ExcitationAgent: damping outside [0,1]");
  if (options.reward < 0.0 || options.kappa < 0.0 || options.decay < 0.0)
    throw Error("ExcitationAgent: rates must be nonnegative");
  if (options.lambda_init < 0.0) throw Error("ExcitationAgent: lambda_init must be nonnegative");

  for (int i = 0; i < n_symbols; ++i) basis_.mode_labels.push_back(Clip::percept(i));
  for (int k = 0; k < n_symbols; ++k) basis_.mode_labels.push_back(Clip::action(k));
  basis_.include_vacuum = options.decay > 0.0;

  for (int i = 0; i < n_symbols; ++i)
    for (int k = 0; k < n_symbols; ++k) {
      spec_.set_lambda(Clip::percept(i), Clip::action(k), options.lambda_init);
      if (options.kappa > 0.0) {
        spec_.set_kappa(Clip::percept(i), Clip::action(k), options.kappa);
        spec_.set_kappa(Clip::action(k), Clip::percept(i), options.kappa);
      }
    }
  spec_.decay = options.decay;
}

DeliberationOutcome ExcitationAgent::deliberate(int percept, Rng& rng) {
  if (percept < 0 || percept >= n_symbols_) throw Error("deliberate: percept out of range");
  const int dim = basis_.dimension();
  const int start = basis_.index_of(Clip::percept(percept));

  const ComplexMatrix h = build_hamiltonian_sector(spec_, basis_);
  const std::vector<JumpOperator> jumps = build_jumps(spec_, basis_);

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
  action_series.reserve(static_cast<std::size_t>(n_symbols_));
  for (int k = 0; k < n_symbols_; ++k) {
    const int idx = basis_.index_of(Clip::action(k));
    action_series.push_back(observable_series(*traj, ComplexMatrix::unit_entry(dim, idx, idx)));
  }

  std::vector<double> total(action_series.front().size(), 0.0);
  for (const auto& series : action_series)
    for (std::size_t n = 0; n < total.size(); ++n) total[n] += series[n];

  const PeakPoint peak = first_peak_time(total, options_.grid, options_.peak_strategy);

  std::vector<double> probs(static_cast<std::size_t>(n_symbols_), 0.0);
  double sum = 0.0;
  for (int k = 0; k < n_symbols_; ++k) {
    const double v = std::max(0.0, action_series[static_cast<std::size_t>(k)]
                                                [static_cast<std::size_t>(peak.index)]);
    probs[static_cast<std::size_t>(k)] = v;
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

void ExcitationAgent::learn(const DeliberationOutcome& outcome, int percept, bool rewarded) {
  update_couplings(spec_, {Clip::percept(percept), Clip::action(outcome.action)}, rewarded,
                   options_.damping, options_.reward);
}

}  // namespace qps
