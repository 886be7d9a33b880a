#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "spinglass/rng.hpp"

namespace spinglass::amp {

// Spiked matrix instance Y = (lambda/n) x0 x0^T + W, W ~ GOE(n),
// x0 uniform on {-1,+1}^n.
struct SpikedInstance {
  int n = 0;
  double lambda = 0.0;
  Eigen::VectorXd x0;
  Eigen::MatrixXd Y;
};

SpikedInstance sample_instance(int n, double lambda, RngStream& rng);

// Scalar nonlinearity with its derivative; f must be Lipschitz.
struct Nonlinearity {
  std::function<double(double)> f;
  std::function<double(double)> fprime;
};

Nonlinearity bayes_nonlinearity(double lambda);

struct AmpState {
  int t = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd x_prev;
  Eigen::VectorXd prev_nonlin;  // f_{t-1}(x^{(t-1)}); empty at t = 0
  double onsager = 0.0;         // d_t used in the last step
};

AmpState amp_init(const Eigen::VectorXd& x0_iterate);

// One iterate x^{t+1} = Y f_t(x^t) - d_t f_{t-1}(x^{t-1}),
// d_t = mean f_t'(x^t); d_0 = 0 by convention.
AmpState amp_step(const AmpState& state, const Eigen::MatrixXd& Y, const Nonlinearity& nl);

struct BayesAmpRun {
  std::vector<double> overlap;      // (1/n) <x0, x^t> for t = 1..T
  std::vector<double> sqnorm;       // (1/n) ||x^t||^2
  std::vector<double> est_overlap;  // (1/n) <x0, tanh(lambda x^t)>
  std::vector<double> est_sqnorm;   // (1/n) ||tanh(lambda x^t)||^2
  Eigen::VectorXd x_final;
};

// Side-information initialization x^0 = eps x0 + g (independent of W), then
// T steps with f = tanh(lambda .).
BayesAmpRun run_bayes_amp(const SpikedInstance& inst, double eps_side_info, int T,
                          RngStream& rng);

struct SeTrajectory {
  std::vector<double> a;  // x^t ~ a_t X0 + sqrt(q_t) G, entries t = 1..T
  std::vector<double> q;
};

// State evolution from the initialization moments a0 = E[X0 f_0(X^0)],
// q0 = E[f_0(X^0)^2]: a_1 = lambda a0, q_1 = q0, then
// a_{t+1} = lambda E[X0 f(a_t X0 + sqrt(q_t) G)], q_{t+1} = E[f(...)^2].
SeTrajectory state_evolution(double lambda, const Nonlinearity& nl, double a0, double q0,
                             int T);

// Initialization moments for x^0 = eps X0 + G under f_0.
std::pair<double, double> se_init_side_info(double eps, const Nonlinearity& nl);

// Bayes reduction b_{t+1} = E tanh(lambda^2 b_t + sqrt(lambda^2 b_t) G);
// satisfies a_t = lambda b_t, q_t = b_t.
std::vector<double> bayes_se(double lambda, double b0, int T);

struct SeComparison {
  // per-t |replicate mean - SE| for F in {x0 x, x^2, tanh^2(lambda x),
  // x0 tanh(lambda x)}, with the standard errors of the replicate means
  std::vector<double> dev_overlap;
  std::vector<double> dev_sqnorm;
  std::vector<double> dev_tanh2;
  std::vector<double> dev_est_overlap;
  std::vector<double> se_overlap;
  std::vector<double> se_sqnorm;
  std::vector<double> se_tanh2;
  std::vector<double> se_est_overlap;
  SeTrajectory prediction;
};

SeComparison empirical_vs_se(int n, double lambda, double eps, int T, int reps,
                             RngStream& rng);

// Deviation of (1/n)||x^t||^2 from the SE q_t at the given step, averaged
// over reps, with and without the memory correction (lambda = 0, f = tanh).
struct OnsagerAblation {
  double dev_corrected = 0.0;
  double dev_uncorrected = 0.0;
};

OnsagerAblation onsager_ablation(int n, int t_check, int reps, RngStream& rng);

}  // namespace spinglass::amp
