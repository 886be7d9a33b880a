#pragma once

#include <string>
#include <utility>
#include <vector>

namespace spinglass::pspin {

// Spherical spiked-tensor model parameters: tensor order k, inverse
// temperature beta, signal-to-noise lambda, symmetry-breaking field h.
struct PSpinParams {
  int k = 3;
  double beta = 1.0;
  double lambda = 0.0;
  double h = 0.0;
};

// Replica-symmetric order parameters: signal overlap b, self overlap q.
struct RsPoint {
  double b = 0.0;
  double q = 0.0;
};

enum class PhaseLabel { Paramagnetic, SpinGlass, Recovery };

std::string phase_name(PhaseLabel label);

enum class RsBranch { Trivial, Nontrivial };

// Replica-symmetric functional Psi_RS(b, q). Throws std::domain_error
// for q >= 1.
double psi_rs(const RsPoint& point, const PSpinParams& params);

// Analytic partials (dPsi/db, dPsi/dq).
std::pair<double, double> grad_psi_rs(const RsPoint& point, const PSpinParams& params);

// Stationary points of Psi_RS. The trivial branch continues (b,q)=(0,0)
// (closed form for k=1); the nontrivial branch returns the largest-q
// stationary point, or throws std::runtime_error below the spinodal.
// Residual gradient norm <= 1e-10 on success.
RsPoint solve_rs(const PSpinParams& params, RsBranch branch);

// Spinodal of the pure-noise (b=0) branch, from the fixed-point equation
// q^{k-2}(1-q)^2 = 2/(k beta^2): beta_s^2 = k^{k-1} / (2 (k-2)^{k-2}).
double beta_spinodal_noise(int k);

struct K2Phase {
  PhaseLabel label;
  RsPoint point;
  double psi;
  double mse;  // 1 - 2b + q at the phase point
};

// Closed-form phase diagram of the spiked matrix model (k = 2).
K2Phase k2_phase(double beta, double lambda);

// Maximum-likelihood MSE for k = 2: 2 - 2 sqrt((1 - 1/lambda^2)_+).
double mse_ml_k2(double lambda);

// Bayes-line functional Psi_Bayes(b; lambda) (b = q on the Bayes line).
double psi_bayes(double b, double lambda, int k);

// Solutions of b = xi b^{k-1} / (1 + xi b^{k-1}), xi = lambda^2/(k-1)!.
// Always contains 0; above the spinodal also b_unst < b_R, each with
// residual <= 1e-12. Requires k >= 3.
std::vector<double> bayes_fixed_points(double lambda, int k);

// Spinodal lambda_s(k), closed form; requires k >= 3.
double lambda_spinodal(int k);

// Critical lambda_c(k): equal Bayes free energies of b = 0 and b_R.
double lambda_critical(int k);

// 1RSB functional at b = q0 = 0, lambda = 0.
double psi_1rsb(double q1, double m, double beta, int k);

// General 1RSB functional Psi_1RSB(b, q0, q1, m); stable down to m = 0,
// where it reduces to Psi_RS(b, q1). At m = 1 it equals Psi_RS(b, q0).
double psi_1rsb_general(double b, double q0, double q1, double m, const PSpinParams& params);

// f_1(q) = q^{k-2}(1-q)(1-(1-m)q); the nontrivial stationary points solve
// f_1(q) = 2T^2/k.
double f1(double q, double m, int k);

// Largest root of f_1(q) = 2 T^2 / k; throws std::runtime_error when
// T = 1/beta exceeds T_d(m).
double solve_q1_star(double beta, double m, int k);

// T_d(m) = sqrt(k max_q f_1(q; m) / 2).
double t_dynamic(double m, int k);

// Smallest m in (0,1] admitting a nontrivial q1 at temperature T, i.e. the
// root of T_d(m) = T. Throws std::runtime_error when T > T_d(1).
double m_lower(double T, int k);

struct MStarResult {
  double m;
  double q1;
  double psi;
};

// Thermodynamic 1RSB parameters at temperature T: m = 1 with psi = beta^2/4
// for T >= T_s, otherwise the interior minimizer of m -> Psi_1RSB(q1*(m), m).
MStarResult m_star(double T, int k);

// Static transition temperature: largest T with min_m Psi_1RSB(q1*, m) equal
// to the paramagnetic value.
double t_static(int k);

// Zero-temperature scaling: q1* = 1 - z*(mu) T with z*(mu) below, and the
// energy density e_1RSB(mu) whose minimum is the ground-state energy.
double z_star(double mu, int k);
double e_1rsb(double mu, int k);

struct GroundState {
  double mu_star;
  double e_star;
};

GroundState gs_energy_1rsb(int k);

// Legendre-dual complexity curve: samples of (f, Sigma) parametrized by m,
// with f = d/dm [m Psi_1RSB(q1*(m), m)] by centered differencing.
struct ComplexityCurve {
  std::vector<double> m;
  std::vector<double> f;
  std::vector<double> sigma;
  double temperature = 0.0;
};

ComplexityCurve monasson_curve(double T, int k, const std::vector<double>& m_grid);

// Convenience grid: n points spanning (m_lower(T), 1].
ComplexityCurve monasson_curve_auto(double T, int k, int n_points = 400);

struct FsFdFstar {
  double f_s;
  double f_d;
  double f_star;
};

// f_d at the m(T) boundary, f_s where Sigma vanishes (f at m = 1 when Sigma
// stays positive), f_star maximizing f + Sigma between them.
FsFdFstar extract_fs_fd_fstar(const ComplexityCurve& curve, double T);

// Zero-temperature complexity at energy eps, extrapolated from the Monasson
// curves at temperatures T and 2T (Richardson in T). Matches the landscape
// complexity S(eps) on (eps_d, eps_*).
double zero_t_complexity(double eps, int k, double T);

}  // namespace spinglass::pspin
