#pragma once

#include <vector>

namespace spinglass::sk {

struct SkParams {
  double beta = 1.0;
  double lambda = 0.0;
  double h = 0.0;
};

struct SkRsPoint {
  double b = 0.0;
  double q = 0.0;
};

// Psi_RS(b, q) = beta^2 (1-q)^2 / 4 - beta lambda b^2 / 2
//              + E log 2cosh(beta (lambda b + sqrt(q) G)).
double sk_psi_rs(double b, double q, const SkParams& params);

// Damped iteration on the coupled fixed-point equations, Newton-polished to
// residual 1e-12; returns (0,0) when that is the only solution. Throws on
// non-convergence.
SkRsPoint sk_solve_rs(const SkParams& params);

// RS entropy density at lambda = 0, via the envelope derivative along the
// solved branch. Goes negative at low temperature.
double sk_rs_entropy(double beta);

// Bayes-line overlap: the largest solution of
// b = E tanh(lambda^2 b + sqrt(lambda^2 b) G).
double bayes_fixed_point_z2(double lambda);

// Overlap ladder: q_0 <= ... <= q_k in [0,1] and CDF levels m_0 <= ... <= m_k
// with m_k = 1; the overlap law puts mass m_l - m_{l-1} on q_l.
struct RsbLadder {
  std::vector<double> q;
  std::vector<double> m;
};

// Atomic overlap measure: strictly increasing locations, positive weights
// summing to 1.
struct ParisiMeasure {
  std::vector<double> q;
  std::vector<double> w;
};

ParisiMeasure ladder_to_measure(const RsbLadder& ladder);
RsbLadder measure_to_ladder(const ParisiMeasure& measure);

// Exact nested Gauss-Hermite evaluation of the kRSB functional; bounded to
// ladders with at most 4 atoms (nested-quadrature cost). Throws a capability
// error beyond that: use parisi_functional instead.
double krsb_value(const RsbLadder& ladder, double beta);

struct PdeGrid {
  double x_max = 0.0;
  int nx = 0;
};

// Grid sized for the smoothing and the log 2cosh asymptote: x_max = 10+4beta.
PdeGrid default_grid(double beta, int nx = 2049);

// Parisi PDE solved backwards by Cole-Hopf Gaussian smoothing on the grid;
// returns Phi(0,0).
double parisi_phi(const ParisiMeasure& measure, double beta, const PdeGrid& grid);

// P(rho) = -beta^2/4 + beta^2/4 \int q^2 rho(dq) + Phi(0,0).
double parisi_functional(const ParisiMeasure& measure, double beta, const PdeGrid& grid);

struct ParisiOpt {
  ParisiMeasure measure;
  double value = 0.0;
};

// Multi-start coordinate descent over atom locations and CDF levels.
// The functional is convex in the measure, so the value is well defined
// even though the atom parametrization is not convex.
ParisiOpt minimize_parisi(int n_atoms, double beta, const PdeGrid& grid);

// Zero-temperature extraction: P*/beta evaluated at the given betas with
// n_atoms, then a least-squares linear extrapolation in 1/beta.
double extract_p_star(int n_atoms, const std::vector<double>& betas, int nx = 2049);

// Ground-state constant of the quadratic hypercube model.
double p_star_cached();

// Large-d max-cut prediction per vertex: d/4 + P* sqrt(d/4).
double maxcut_prediction(double d);

}  // namespace spinglass::sk
