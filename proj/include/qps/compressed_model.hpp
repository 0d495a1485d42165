#pragma once

#include <span>
#include <vector>

#include "qps/agent.hpp"
#include "qps/dynamics.hpp"
#include "qps/excitation_model.hpp"

namespace qps {

/// Register layout for the compressed model: a d-level percept register
/// followed by one qubit per action. Basis index j*2^n + bits, where bit
/// (n-1-k) flags action qubit k, i.e. the ket reads |j a0 a1 ...>.
struct CompressedRegister {
  int d = 2;
  int n_actions = 1;

  CompressedRegister(int d_, int n_actions_) : d(d_), n_actions(n_actions_) {
    if (d < 2) throw Error("CompressedRegister: d must be at least 2");
    if (n_actions < 1) throw Error("CompressedRegister: need at least one action qubit");
  }

  int dimension() const { return d << n_actions; }
  int action_bit(int k) const {
    if (k < 0 || k >= n_actions) throw Error("action index out of range");
    return 1 << (n_actions - 1 - k);
  }
  int basis_index(int percept, int action_bits) const {
    if (percept < 0 || percept >= d) throw Error("percept index out of range");
    return (percept << n_actions) + action_bits;
  }
  int percept_of(int index) const { return index >> n_actions; }
  int bits_of(int index) const { return index & ((1 << n_actions) - 1); }
};

/// Basis index of the classical event (percept j, action k): percept register
/// at |j>, action qubit k excited, all other action qubits in |0>.
int encode_event_index(int percept, int action, const CompressedRegister& reg);

/// The event as a basis state vector.
std::vector<cplx> encode_event(int percept, int action, const CompressedRegister& reg);

/// Drive strengths lambda[j][a] between percept value j and action qubit a,
/// plus on-site energies (index 0: percept register, 1+a: action qubit a).
struct DriveCouplings {
  int d = 2;
  int n_actions = 1;
  std::vector<double> lambda;   // d x n_actions, row-major
  std::vector<double> epsilon;  // 1 + n_actions entries

  static DriveCouplings uniform(int d, int n_actions, double lambda_init);

  double& lam(int j, int a) { return lambda[static_cast<std::size_t>(j) * n_actions + a]; }
  double lam(int j, int a) const { return lambda[static_cast<std::size_t>(j) * n_actions + a]; }

  void validate(const CompressedRegister& reg) const;
};

/// Conditional-drive Hamiltonian
///   H = sum_j sum_a lambda[j][a] |j><j|_P (x) sigma_x^(a) + sum_i eps_i n_i,
/// block-diagonal across percept values by construction.
ComplexMatrix build_hamiltonian(const DriveCouplings& c, const CompressedRegister& reg);

/// Rank-1 projector onto percept j with exactly action qubit k excited.
ComplexMatrix build_projector(int percept, int action, const CompressedRegister& reg);

/// Same contract as the excitation-model rule, acting on matrix entry (j, k).
void update_couplings(DriveCouplings& c, int percept, int action, bool rewarded, double damping,
                      double reward);

/// Model 2: percepts on a d-level register, classical one-qubit actions.
/// Dissipation channels: amplitude damping on the action qubits (options_
/// decay) and percept-register dephasing (options_ dephasing).
class CompressedAgent : public Agent {
 public:
  CompressedAgent(int n_symbols, QuantumAgentOptions options);

  int percept_count() const override { return reg_.d; }
  int action_count() const override { return reg_.n_actions; }
  DeliberationOutcome deliberate(int percept, Rng& rng) override;
  void learn(const DeliberationOutcome& outcome, int percept, bool rewarded) override;

  const DriveCouplings& couplings() const { return couplings_; }
  DriveCouplings& couplings() { return couplings_; }
  const CompressedRegister& reg() const { return reg_; }

 private:
  CompressedRegister reg_;
  QuantumAgentOptions options_;
  DriveCouplings couplings_;
};

}  // namespace qps
