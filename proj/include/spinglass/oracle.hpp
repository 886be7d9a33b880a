#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinglass/rng.hpp"
#include "spinglass/sk.hpp"

namespace spinglass::oracle {

// Exact Gibbs summary for n <= 20. The exponent beta/2 <Y, ss^T> keeps the
// diagonal of Y, a sigma-independent constant that cancels in observables;
// logZ includes it.
struct EnumeratedGibbs {
  int n = 0;
  double logZ = 0.0;
  Eigen::VectorXd marginal_means;
  Eigen::VectorXd effective_fields;     // atanh(mean)/beta, +-inf sentinel when saturated
  std::vector<double> overlap_values;   // (n - 2d)/n for d = 0..n
  std::vector<double> overlap_mass;     // law of <s1,s2>/n under mu x mu
};

// Y = (lambda/n) x0 x0^T + W. Enumeration walks the sigma_1 = +1 half-space
// with a Gray code and pairs each state with its flip, so h = 0 symmetries
// cancel exactly. The overlap law comes from a Walsh-Hadamard convolution of
// the state weights (a second 2^n pass).
EnumeratedGibbs enumerate_gibbs(const Eigen::MatrixXd& W, const sk::SkParams& params,
                                const Eigen::VectorXd& x0, bool with_overlap_hist = true);

// Exact pair correlations <sigma_i sigma_j>; n <= 16.
Eigen::MatrixXd enumerate_pair_correlations(const Eigen::MatrixXd& W,
                                            const sk::SkParams& params,
                                            const Eigen::VectorXd& x0);

// | central finite difference of (1/n) log Z in h  -  (1/n) sum_i x0_i <sigma_i> |,
// step 1e-5; n <= 16.
double check_h_derivative(const Eigen::MatrixXd& W, const sk::SkParams& params,
                          const Eigen::VectorXd& x0);

struct GuerraResult {
  double mean_phi = 0.0;  // MC mean of (1/n) log Z
  double bound = 0.0;     // inf_q Psi_RS(q)
  double se = 0.0;
  double margin_in_se = 0.0;  // (bound - mean)/se, >= -3 when the bound holds
};

// Non-asymptotic upper bound (1/n) E log Z <= inf_q Psi_RS(q), tested by MC
// over GOE draws at lambda = 0; n <= 18.
GuerraResult guerra_rs_bound_mc(int n, double beta, int reps, RngStream& rng);

struct ImmseResult {
  double lhs = 0.0;  // (2/n) dI/dlambda by central difference (step 1e-3)
  double rhs = 0.0;  // (lambda/n^2) E ||M_hat - x0 x0^T||_F^2
  double se = 0.0;   // standard error of the per-instance difference
};

// Mutual-information / matrix-MMSE identity for the Bayes posterior of the
// rank-one model, checked by enumeration with common random numbers across
// the lambda +- delta evaluations; n <= 12.
ImmseResult mutual_info_immse_check(int n, double lambda, int reps, RngStream& rng);

struct PppSample {
  double m = 0.0;
  std::vector<double> points;  // strictly decreasing
};

// Largest K points of the PPP with intensity exp(-m x) dx, via the inverse
// measure transform of unit-exponential partial sums. Requires m in (0,1).
PppSample ppp_topk(double m, int K, RngStream& rng);

struct PdWeights {
  std::vector<double> weights;  // decreasing, sum to 1 over the truncation
  double truncated_mass = 0.0;  // kept share of E[sum e^x], from the intensity tail
};

// Normalized exponentials of the sample. Throws when the analytic tail
// estimate says the truncation keeps less than 1 - 1e-6 of the mass.
PdWeights pd_weights(const PppSample& sample);

struct McEstimate {
  double estimate = 0.0;
  double se = 0.0;
};

// E[sum_a w_a^2] = 1 - m for the Poisson-Dirichlet weights. The truncated
// numerator and denominator are completed with the analytic tail means
// (the tail fluctuation is negligible at these K).
McEstimate pd_second_moment_mc(double m, int K, int reps, RngStream& rng);

struct ShiftInvariance {
  double lhs = 0.0;  // E log sum e^{x+Delta} - E log sum e^x, common draws
  double rhs = 0.0;  // m sigma^2 / 2 (Gaussian MGF closed form)
  double se = 0.0;
};

ShiftInvariance ppp_shift_invariance_mc(double m, double mark_sigma, int K, int reps,
                                        RngStream& rng);

}  // namespace spinglass::oracle
