#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qps/agent.hpp"
#include "qps/clips.hpp"
#include "qps/dynamics.hpp"

namespace qps {

/// Basis labeling for the single-excitation sector: one mode per clip, plus
/// an optional vacuum state (needed when amplitude decay is switched on).
struct ExcitationBasis {
  std::vector<Clip> mode_labels;
  bool include_vacuum = false;

  int dimension() const {
    return static_cast<int>(mode_labels.size()) + (include_vacuum ? 1 : 0);
  }
  int index_of(Clip clip) const;
  int vacuum_index() const;
};

/// Hamiltonian and dissipator data for the excitation model: coherent
/// couplings lambda on unordered clip pairs, on-site energies epsilon,
/// incoherent hop rates kappa on ordered pairs, and a uniform amplitude
/// decay rate onto the vacuum.
class CouplingSpec {
 public:
  void set_lambda(Clip a, Clip b, double value);
  double lambda(Clip a, Clip b) const;  // 0 when the edge is absent
  bool has_edge(Clip a, Clip b) const;
  const std::map<std::pair<Clip, Clip>, double>& lambdas() const { return lambda_; }

  void set_epsilon(Clip clip, double value);
  double epsilon(Clip clip) const;  // 0 when unset

  void set_kappa(Clip from, Clip to, double rate);
  const std::map<std::pair<Clip, Clip>, double>& kappas() const { return kappa_; }

  double decay = 0.0;

 private:
  static std::pair<Clip, Clip> canonical(Clip a, Clip b);

  std::map<std::pair<Clip, Clip>, double> lambda_;  // unordered pairs, canonical key
  std::map<std::pair<Clip, Clip>, double> kappa_;   // ordered pairs
  std::map<Clip, double> epsilon_;
};

/// Single-excitation-sector Hamiltonian: H[j][k] = lambda_jk on edges,
/// H[j][j] = epsilon_j, vacuum row/column zero. Hermitian by construction.
ComplexMatrix build_hamiltonian_sector(const CouplingSpec& spec, const ExcitationBasis& basis);

/// Full Fock-space build with one qubit per clip (test oracle; <= 4 clips).
/// Mode j maps to qubit j, most significant bit first.
ComplexMatrix build_hamiltonian_fock(const CouplingSpec& spec, std::span<const Clip> modes);

/// Jump operators in the sector basis: one |c_k><c_j| per kappa entry plus
/// one |vac><c_j| per clip when decay > 0.
std::vector<JumpOperator> build_jumps(const CouplingSpec& spec, const ExcitationBasis& basis);

/// lambda <- lambda - damping*(lambda - 1) on every edge; +reward on the
/// traversed (percept, action) edge iff rewarded. Symmetry is preserved.
void update_couplings(CouplingSpec& spec, std::pair<Clip, Clip> traversed, bool rewarded,
                      double damping, double reward);

/// Options shared by both quantum agent variants.
struct QuantumAgentOptions {
  double damping = 0.01;
  double reward = 1.0;
  double kappa = 0.0;        // model 1: incoherent hop rate on every edge
  double decay = 0.0;        // model 1: amplitude decay to vacuum; model 2: action-qubit damping
  double dephasing = 0.0;    // model 2 only: percept-register dephasing
  double lambda_init = 1.0;
  TimeGrid grid{0.0, 6.283185307179586, 401};
  // First local maximum of the summed action probability. The global-max
  // alternative lands on late-window recurrences of the coupled clip network
  // where the excitation sits entirely on the wrong action, which destroys
  // the monotone response of P(correct) to the couplings.
  PeakStrategy peak_strategy = PeakStrategy::FirstLocalMax;
};

/// Model 1: clips as excitation modes of a quantum walk. Deliberation evolves
/// |percept> under the sector Hamiltonian (Lindblad when kappa or decay is
/// nonzero), reads the action populations at the first probability peak, and
/// samples the action from them.
class ExcitationAgent : public Agent {
 public:
  ExcitationAgent(int n_symbols, QuantumAgentOptions options);

  int percept_count() const override { return n_symbols_; }
  int action_count() const override { return n_symbols_; }
  DeliberationOutcome deliberate(int percept, Rng& rng) override;
  void learn(const DeliberationOutcome& outcome, int percept, bool rewarded) override;

  const CouplingSpec& couplings() const { return spec_; }
  CouplingSpec& couplings() { return spec_; }
  const ExcitationBasis& basis() const { return basis_; }

 private:
  int n_symbols_;
  QuantumAgentOptions options_;
  CouplingSpec spec_;
  ExcitationBasis basis_;
};

}  // namespace qps
