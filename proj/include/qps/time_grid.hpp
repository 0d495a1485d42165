#pragma once

#include "qps/error.hpp"

namespace qps {

/// Uniform time grid, t in dimensionless units (hbar = 1).
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  int n_points = 0;

  TimeGrid() = default;
  TimeGrid(double start, double end, int points)
      : t_start(start), t_end(end), n_points(points) {
    if (points < 2) throw Error("TimeGrid: need at least 2 points");
    if (!(end > start)) throw Error("TimeGrid: t_end must exceed t_start");
  }

  double dt() const { return (t_end - t_start) / (n_points - 1); }
  double time_at(int n) const { return t_start + n * dt(); }
};

}  // namespace qps
