#pragma once

#include <span>
#include <vector>

#include "qps/complex_matrix.hpp"
#include "qps/time_grid.hpp"

namespace qps {

/// One Lindblad channel: jump matrix L and its incoherent rate kappa, acting
/// as kappa * (L rho L^dag - 1/2 {L^dag L, rho}).
struct JumpOperator {
  ComplexMatrix matrix;
  double rate = 0.0;
};

/// States sampled on a time grid: state vectors for closed runs, density
/// matrices for open runs.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, std::vector<std::vector<cplx>> kets);
  Trajectory(TimeGrid grid, std::vector<ComplexMatrix> rhos);

  const TimeGrid& grid() const { return grid_; }
  bool is_density() const { return !rhos_.empty(); }
  int size() const;
  int dimension() const;

  std::span<const cplx> ket_at(int n) const;
  const ComplexMatrix& rho_at(int n) const;
  /// Density matrix view of point n (outer product for closed runs).
  ComplexMatrix density_at(int n) const;

 private:
  TimeGrid grid_;
  std::vector<std::vector<cplx>> kets_;
  std::vector<ComplexMatrix> rhos_;
};

/// Schroedinger evolution psi(t_n) = exp(-i H t_n) psi0. One propagator of
/// step dt is built and reused across the grid.
Trajectory evolve_closed(const ComplexMatrix& h, std::span<const cplx> psi0,
                         const TimeGrid& grid);

/// Lindblad master equation, fixed-step RK4 with one step per grid interval.
/// The state is re-Hermitized after every step; trace drift beyond 1e-6 at
/// any step is reported as an error naming the offending step.
Trajectory evolve_lindblad(const ComplexMatrix& h, std::span<const JumpOperator> jumps,
                           const ComplexMatrix& rho0, const TimeGrid& grid);

/// s_n = tr(p rho(t_n)), clamped to [0, 1]. `p` must be a Hermitian projector.
std::vector<double> observable_series(const Trajectory& traj, const ComplexMatrix& p);

enum class PeakStrategy {
  GlobalMax,      // earliest attainment of the global maximum
  FirstLocalMax,  // earliest point not below either neighbour
};

struct PeakPoint {
  int index = 0;
  double time = 0.0;
};

/// First instant at which the series attains its maximum (strategy-dependent),
/// ties broken by the earliest index.
PeakPoint first_peak_time(std::span<const double> series, const TimeGrid& grid,
                          PeakStrategy strategy = PeakStrategy::GlobalMax);

}  // namespace qps
