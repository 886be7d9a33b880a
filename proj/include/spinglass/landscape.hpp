#pragma once

#include "spinglass/rng.hpp"

namespace spinglass::landscape {

// Annealed complexity of the pure-noise spherical landscape:
// S(x) = Omega(x sqrt(2k/(k-1))) - x^2 + log(k-1)/2 + 1/2. Requires k >= 3.
double complexity_S(double x, int k);

// Threshold energy eps_d = sqrt(2(k-1)/k): below it critical points are
// saddles of extensive index, above it local maxima dominate.
double eps_d(int k);

// Largest zero of S, the ground-state energy; bracketed root on [eps_d, 4].
double eps_star(int k);

struct KacRiceEstimate {
  int n = 0;
  double lo = 0.0;
  double hi = 0.0;
  double log_count_per_n = 0.0;
  double std_error = 0.0;
  int reps = 0;
};

// Monte Carlo estimate of (1/n) log E[#critical points with energy in
// [lo, hi]]: GOE(n-1) draws, with the Gaussian energy coordinate integrated
// by a 201-node rule recentred inside the band (importance shift), and the
// replicate average combined by log-sum-exp. std_error by bootstrap over
// draws. An unbounded band is represented by [-4, 4] (S < -1 outside).
KacRiceEstimate kac_rice_mc(int n, double lo, double hi, int k, int reps, RngStream& rng);

}  // namespace spinglass::landscape
