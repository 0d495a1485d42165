#include "qps/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

namespace qps {

Trajectory::Trajectory(TimeGrid grid, std::vector<std::vector<cplx>> kets)
    : grid_(grid), kets_(std::move(kets)) {
  if (static_cast<int>(kets_.size()) != grid_.n_points)
    throw Error("Trajectory: ket count does not match grid");
}

Trajectory::Trajectory(TimeGrid grid, std::vector<ComplexMatrix> rhos)
    : grid_(grid), rhos_(std::move(rhos)) {
  if (static_cast<int>(rhos_.size()) != grid_.n_points)
    throw Error("Trajectory: state count does not match grid");
}

int Trajectory::size() const {
  return static_cast<int>(is_density() ? rhos_.size() : kets_.size());
}

int Trajectory::dimension() const {
  return is_density() ? rhos_.front().rows() : static_cast<int>(kets_.front().size());
}

std::span<const cplx> Trajectory::ket_at(int n) const {
  if (is_density()) throw Error("Trajectory: open run has no ket states");
  return kets_[static_cast<std::size_t>(n)];
}

const ComplexMatrix& Trajectory::rho_at(int n) const {
  if (!is_density()) throw Error("Trajectory: closed run stores kets, use density_at");
  return rhos_[static_cast<std::size_t>(n)];
}

ComplexMatrix Trajectory::density_at(int n) const {
  if (is_density()) return rhos_[static_cast<std::size_t>(n)];
  const auto& psi = kets_[static_cast<std::size_t>(n)];
  const int d = static_cast<int>(psi.size());
  ComplexMatrix rho(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) rho(r, c) = psi[r] * std::conj(psi[c]);
  return rho;
}

namespace {

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

Trajectory evolve_closed(const ComplexMatrix& h, std::span<const cplx> psi0,
                         const TimeGrid& grid) {
  if (!h.square()) throw Error("evolve_closed: Hamiltonian not square");
  if (h.hermitian_deviation() > kDefaultTol) throw Error("evolve_closed: Hamiltonian not Hermitian");
  if (static_cast<int>(psi0.size()) != h.rows())
    throw Error("evolve_closed: state dimension mismatch");
  if (std::abs(norm2(psi0) - 1.0) > kDefaultTol)
    throw Error("evolve_closed: initial state not normalized");

  ComplexMatrix gen = h;
  gen *= cplx(0.0, -grid.dt());
  const ComplexMatrix propagator = expm(gen);

  std::vector<std::vector<cplx>> kets;
  kets.reserve(static_cast<std::size_t>(grid.n_points));
  kets.emplace_back(psi0.begin(), psi0.end());
  for (int n = 1; n < grid.n_points; ++n) kets.push_back(propagator.apply(kets.back()));
  return Trajectory(grid, std::move(kets));
}

namespace {

// Jump matrices in this artifact are almost always single-entry (|k><j|),
// which makes L rho L^dag a rank-one update. Detect that shape once.
struct PreparedJump {
  const ComplexMatrix* matrix;
  ComplexMatrix adj;
  double rate;
  std::optional<std::array<int, 2>> single;  // (row, col) when exactly one entry
  double single_norm2 = 0.0;
};

// d rho/dt written with the effective non-Hermitian Hamiltonian
// H_eff = H - (i/2) sum_k rate_k L_k^dag L_k, plus the jump refill terms.
struct LindbladRhs {
  ComplexMatrix h_eff;
  ComplexMatrix h_eff_adj;
  std::vector<PreparedJump> jumps;

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    ComplexMatrix d = h_eff * rho;
    d -= rho * h_eff_adj;
    d *= cplx(0.0, -1.0);
    for (const PreparedJump& j : jumps) {
      if (j.single) {
        const auto [r, c] = *j.single;
        d(r, r) += j.rate * j.single_norm2 * rho(c, c);
      } else {
        ComplexMatrix refill = (*j.matrix) * rho * j.adj;
        refill *= cplx(j.rate, 0.0);
        d += refill;
      }
    }
    return d;
  }
};

void axpy(ComplexMatrix& y, double a, const ComplexMatrix& x) {
  auto yd = y.data();
  auto xd = x.data();
  for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += a * xd[i];
}

void rehermitize(ComplexMatrix& rho) {
  const int n = rho.rows();
  for (int r = 0; r < n; ++r) {
    rho(r, r) = cplx(rho(r, r).real(), 0.0);
    for (int c = r + 1; c < n; ++c) {
      const cplx avg = 0.5 * (rho(r, c) + std::conj(rho(c, r)));
      rho(r, c) = avg;
      rho(c, r) = std::conj(avg);
    }
  }
}

}  // namespace

Trajectory evolve_lindblad(const ComplexMatrix& h, std::span<const JumpOperator> jumps,
                           const ComplexMatrix& rho0, const TimeGrid& grid) {
  if (!h.square()) throw Error("evolve_lindblad: Hamiltonian not square");
  if (h.hermitian_deviation() > kDefaultTol)
    throw Error("evolve_lindblad: Hamiltonian not Hermitian");
  const int dim = h.rows();
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw Error("evolve_lindblad: state dimension mismatch");
  if (std::abs(rho0.trace().real() - 1.0) > kDefaultTol || std::abs(rho0.trace().imag()) > kDefaultTol)
    throw Error("evolve_lindblad: initial state trace is not 1");
  if (rho0.hermitian_deviation() > kDefaultTol)
    throw Error("evolve_lindblad: initial state not Hermitian");
  if (min_eigenvalue_hermitian(rho0) < -1e-8)
    throw Error("evolve_lindblad: initial state not positive");

  LindbladRhs rhs{h, ComplexMatrix(), {}};
  for (const JumpOperator& j : jumps) {
    if (j.rate < 0.0) throw Error("evolve_lindblad: negative jump rate");
    if (!j.matrix.square() || j.matrix.rows() != dim)
      throw Error("evolve_lindblad: jump operator dimension mismatch");
    if (j.rate == 0.0) continue;

    PreparedJump pj{&j.matrix, j.matrix.adjoint(), j.rate, std::nullopt, 0.0};
    int nonzeros = 0, lr = 0, lc = 0;
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        if (j.matrix(r, c) != cplx(0.0, 0.0)) {
          ++nonzeros;
          lr = r;
          lc = c;
        }
    if (nonzeros == 1) {
      pj.single = std::array<int, 2>{lr, lc};
      pj.single_norm2 = std::norm(j.matrix(lr, lc));
    }

    // H_eff -= (i/2) rate L^dag L
    ComplexMatrix ldl = pj.adj * j.matrix;
    ldl *= cplx(0.0, -0.5 * j.rate);
    rhs.h_eff += ldl;
    rhs.jumps.push_back(std::move(pj));
  }
  rhs.h_eff_adj = rhs.h_eff.adjoint();

  const double dt = grid.dt();
  std::vector<ComplexMatrix> rhos;
  rhos.reserve(static_cast<std::size_t>(grid.n_points));
  rhos.push_back(rho0);

  ComplexMatrix rho = rho0;
  for (int n = 1; n < grid.n_points; ++n) {
    const ComplexMatrix k1 = rhs(rho);
    ComplexMatrix stage = rho;
    axpy(stage, 0.5 * dt, k1);
    const ComplexMatrix k2 = rhs(stage);
    stage = rho;
    axpy(stage, 0.5 * dt, k2);
    const ComplexMatrix k3 = rhs(stage);
    stage = rho;
    axpy(stage, dt, k3);
    const ComplexMatrix k4 = rhs(stage);

    axpy(rho, dt / 6.0, k1);
    axpy(rho, dt / 3.0, k2);
    axpy(rho, dt / 3.0, k3);
    axpy(rho, dt / 6.0, k4);
    rehermitize(rho);

    const double drift = std::abs(rho.trace().real() - 1.0);
    if (drift > 1e-6)
      throw Error("evolve_lindblad: trace drift " + std::to_string(drift) + " at step " +
                  std::to_string(n) + "; reduce dt");
    rhos.push_back(rho);
  }
  return Trajectory(grid, std::move(rhos));
}

std::vector<double> observable_series(const Trajectory& traj, const ComplexMatrix& p) {
  if (!p.square() || p.rows() != traj.dimension())
    throw Error("observable_series: projector dimension mismatch");
  if (p.hermitian_deviation() > kDefaultTol)
    throw Error("observable_series: observable not Hermitian");
  ComplexMatrix idem = p * p;
  idem -= p;
  if (idem.max_abs() > kDefaultTol) throw Error("observable_series: observable not a projector");

  const int count = traj.size();
  std::vector<double> series(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    double value = 0.0;
    if (traj.is_density()) {
      const ComplexMatrix& rho = traj.rho_at(n);
      cplx t = 0.0;
      for (int r = 0; r < p.rows(); ++r)
        for (int c = 0; c < p.cols(); ++c) t += p(r, c) * rho(c, r);
      value = t.real();
    } else {
      const auto psi = traj.ket_at(n);
      const std::vector<cplx> pv = p.apply(psi);
      cplx t = 0.0;
      for (std::size_t i = 0; i < pv.size(); ++i) t += std::conj(psi[i]) * pv[i];
      value = t.real();
    }
    series[static_cast<std::size_t>(n)] = std::clamp(value, 0.0, 1.0);
  }
  return series;
}

PeakPoint first_peak_time(std::span<const double> series, const TimeGrid& grid,
                          PeakStrategy strategy) {
  if (series.empty()) throw Error("first_peak_time: empty series");
  if (static_cast<int>(series.size()) != grid.n_points)
    throw Error("first_peak_time: series length does not match grid");
  constexpr double kTieTol = 1e-12;

  int best = 0;
  if (strategy == PeakStrategy::GlobalMax) {
    const double top = *std::max_element(series.begin(), series.end());
    for (int n = 0; n < static_cast<int>(series.size()); ++n) {
      if (series[static_cast<std::size_t>(n)] >= top - kTieTol) {
        best = n;
        break;
      }
    }
  } else {
    const int last = static_cast<int>(series.size()) - 1;
    best = last;
    for (int n = 0; n <= last; ++n) {
      const double v = series[static_cast<std::size_t>(n)];
      const bool left_ok = (n == 0) || v >= series[static_cast<std::size_t>(n - 1)] - kTieTol;
      const bool right_ok = (n == last) || v >= series[static_cast<std::size_t>(n + 1)] - kTieTol;
      if (left_ok && right_ok) {
        best = n;
        break;
      }
    }
  }
  return PeakPoint{best, grid.time_at(best)};
}

}  // namespace qps
