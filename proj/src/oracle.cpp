#include "spinglass/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinglass/numerics.hpp"
#include "spinglass/quadrature.hpp"

namespace spinglass::oracle {

namespace {

// Gray-code walk over the sigma_0 = +1 half-space; visit(state_bits, quad, lin)
// receives the quadratic part beta/2 s^T Y s and the linear part h <s, x0>.
// Bit i set means sigma_i = -1; bit 0 stays clear.
template <typename Visitor>
void enumerate_half(const Eigen::MatrixXd& Y, const sk::SkParams& params,
                    const Eigen::VectorXd& x0, Visitor&& visit) {
  const int n = static_cast<int>(Y.rows());
  std::vector<double> sigma(n, 1.0);
  std::vector<double> field(n);  // field[i] = sum_{j != i} Y_ij sigma_j
  for (int i = 0; i < n; ++i) {
    double f = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) f += Y(i, j);
    field[i] = f;
  }
  double quad = 0.5 * params.beta * Y.sum();
  double lin = params.h * x0.sum();
  visit(0ull, quad, lin);
  const std::uint64_t total = n > 1 ? (1ull << (n - 1)) : 1ull;
  std::uint64_t bits = 0;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int v = 1 + std::countr_zero(i);
    quad += -2.0 * params.beta * sigma[v] * field[v];
    lin += -2.0 * params.h * x0(v) * sigma[v];
    sigma[v] = -sigma[v];
    for (int j = 0; j < n; ++j)
      if (j != v) field[j] += 2.0 * sigma[v] * Y(j, v);
    bits ^= (1ull << v);
    visit(bits, quad, lin);
  }
}

Eigen::MatrixXd build_Y(const Eigen::MatrixXd& W, const sk::SkParams& params,
                        const Eigen::VectorXd& x0) {
  const int n = static_cast<int>(W.rows());
  Eigen::MatrixXd Y = W;
  if (params.lambda != 0.0) Y += (params.lambda / n) * x0 * x0.transpose();
  return Y;
}

// In-place Walsh-Hadamard transform.
void wht(std::vector<double>& a) {
  const std::size_t n = a.size();
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double u = a[j], v = a[j + len];
        a[j] = u + v;
        a[j + len] = u - v;
      }
    }
  }
}

double enumerate_logZ(const Eigen::MatrixXd& W, const sk::SkParams& params,
                      const Eigen::VectorXd& x0) {
  const Eigen::MatrixXd Y = build_Y(W, params, x0);
  double mx = -std::numeric_limits<double>::infinity();
  enumerate_half(Y, params, x0, [&](std::uint64_t, double quad, double lin) {
    mx = std::max(mx, quad + std::fabs(lin));
  });
  double acc = 0.0;
  enumerate_half(Y, params, x0, [&](std::uint64_t, double quad, double lin) {
    acc += std::exp(quad + lin - mx) + std::exp(quad - lin - mx);
  });
  return mx + std::log(acc);
}

}  // namespace

EnumeratedGibbs enumerate_gibbs(const Eigen::MatrixXd& W, const sk::SkParams& params,
                                const Eigen::VectorXd& x0, bool with_overlap_hist) {
  const int n = static_cast<int>(W.rows());
  if (n < 1 || n > 20) throw std::runtime_error("enumerate_gibbs: n must be in [1, 20]");
  if (W.cols() != n || x0.size() != n)
    throw std::invalid_argument("enumerate_gibbs: dimension mismatch");
  const Eigen::MatrixXd Y = build_Y(W, params, x0);

  double mx = -std::numeric_limits<double>::infinity();
  enumerate_half(Y, params, x0, [&](std::uint64_t, double quad, double lin) {
    mx = std::max(mx, quad + std::fabs(lin));
  });

  EnumeratedGibbs out;
  out.n = n;
  out.marginal_means = Eigen::VectorXd::Zero(n);
  std::vector<double> w;
  if (with_overlap_hist) w.assign(1ull << n, 0.0);
  const std::uint64_t mask = (1ull << n) - 1;

  double z = 0.0;
  enumerate_half(Y, params, x0, [&](std::uint64_t bits, double quad, double lin) {
    const double wp = std::exp(quad + lin - mx);
    const double wm = std::exp(quad - lin - mx);
    z += wp + wm;
    const double diff = wp - wm;  // exactly zero when lin == 0
    for (int i = 0; i < n; ++i) {
      const double s = (bits >> i) & 1 ? -1.0 : 1.0;
      out.marginal_means(i) += diff * s;
    }
    if (with_overlap_hist) {
      w[bits] = wp;
      w[bits ^ mask] = wm;
    }
  });
  out.logZ = mx + std::log(z);
  out.marginal_means /= z;

  out.effective_fields.resize(n);
  for (int i = 0; i < n; ++i) {
    const double m = out.marginal_means(i);
    if (std::fabs(m) > 1.0 - 1e-12)
      out.effective_fields(i) = std::copysign(std::numeric_limits<double>::infinity(), m);
    else
      out.effective_fields(i) = std::atanh(m) / params.beta;
  }

  if (with_overlap_hist) {
    for (double& v : w) v /= z;
    wht(w);
    for (double& v : w) v *= v;
    wht(w);
    const double scale = 1.0 / static_cast<double>(1ull << n);
    out.overlap_values.resize(n + 1);
    out.overlap_mass.assign(n + 1, 0.0);
    for (int d = 0; d <= n; ++d) out.overlap_values[d] = (n - 2.0 * d) / n;
    for (std::uint64_t tau = 0; tau <= mask; ++tau)
      out.overlap_mass[std::popcount(tau)] += std::max(0.0, w[tau] * scale);
    double tot = 0.0;
    for (double v : out.overlap_mass) tot += v;
    for (double& v : out.overlap_mass) v /= tot;
  }
  return out;
}

Eigen::MatrixXd enumerate_pair_correlations(const Eigen::MatrixXd& W,
                                            const sk::SkParams& params,
                                            const Eigen::VectorXd& x0) {
  const int n = static_cast<int>(W.rows());
  if (n < 1 || n > 16)
    throw std::runtime_error("enumerate_pair_correlations: n must be in [1, 16]");
  const Eigen::MatrixXd Y = build_Y(W, params, x0);
  double mx = -std::numeric_limits<double>::infinity();
  enumerate_half(Y, params, x0, [&](std::uint64_t, double quad, double lin) {
    mx = std::max(mx, quad + std::fabs(lin));
  });
  Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(n, n);
  double z = 0.0;
  std::vector<double> s(n);
  enumerate_half(Y, params, x0, [&](std::uint64_t bits, double quad, double lin) {
    const double wsum = std::exp(quad + lin - mx) + std::exp(quad - lin - mx);
    z += wsum;
    for (int i = 0; i < n; ++i) s[i] = (bits >> i) & 1 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) corr(i, j) += wsum * s[i] * s[j];
  });
  corr /= z;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) corr(i, j) = corr(j, i);
  return corr;
}

double check_h_derivative(const Eigen::MatrixXd& W, const sk::SkParams& params,
                          const Eigen::VectorXd& x0) {
  const int n = static_cast<int>(W.rows());
  if (n > 16) throw std::runtime_error("check_h_derivative: n must be <= 16");
  const double delta = 1e-5;
  sk::SkParams lo = params, hi = params;
  lo.h -= delta;
  hi.h += delta;
  const double fd = (enumerate_logZ(W, hi, x0) - enumerate_logZ(W, lo, x0)) / (2.0 * delta * n);
  const EnumeratedGibbs g = enumerate_gibbs(W, params, x0, /*with_overlap_hist=*/false);
  const double exact = x0.dot(g.marginal_means) / n;
  return std::fabs(fd - exact);
}

GuerraResult guerra_rs_bound_mc(int n, double beta, int reps, RngStream& rng) {
  if (n > 18) throw std::runtime_error("guerra_rs_bound_mc: n must be <= 18");
  const sk::SkParams params{beta, 0.0, 0.0};
  const Eigen::VectorXd x0 = Eigen::VectorXd::Ones(n);
  double acc = 0.0, acc2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
    const Eigen::MatrixXd W = goe_sample(n, sub);
    const double phi = enumerate_logZ(W, params, x0) / n;
    acc += phi;
    acc2 += phi * phi;
  }
  GuerraResult out;
  out.mean_phi = acc / reps;
  out.se = std::sqrt(std::max(0.0, acc2 / reps - out.mean_phi * out.mean_phi) / reps);
  auto psi = [&](double q) { return sk::sk_psi_rs(0.0, q, params); };
  double best = psi(0.0);
  for (int i = 1; i <= 200; ++i) best = std::min(best, psi(i / 201.0));
  auto [qm, v] = minimize_scalar(psi, 0.0, 1.0 - 1e-9, 1e-12);
  out.bound = std::min(best, v);
  out.margin_in_se = (out.bound - out.mean_phi) / (out.se > 0 ? out.se : 1e-300);
  return out;
}

ImmseResult mutual_info_immse_check(int n, double lambda, int reps, RngStream& rng) {
  if (n > 12) throw std::runtime_error("mutual_info_immse_check: n must be <= 12");
  const double delta = 1e-3;
  // per-instance mutual information density (1/n) log dmu/dnu0 at x0
  auto info = [&](double lam, const Eigen::MatrixXd& W, const Eigen::VectorXd& x0) {
    if (lam == 0.0) return 0.0;
    const sk::SkParams p{lam, lam, 0.0};
    const Eigen::MatrixXd Y = build_Y(W, p, x0);
    const double align = 0.5 * lam * x0.dot(Y * x0);
    return (align - enumerate_logZ(W, p, x0)) / n + std::log(2.0);
  };
  double sum_lhs = 0.0, sum_rhs = 0.0, sum_d = 0.0, sum_d2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0(i) = sub.next_u64() & 1 ? 1.0 : -1.0;
    const Eigen::MatrixXd W = goe_sample(n, sub);
    const double lhs =
        (2.0 / n) * (info(lambda + delta, W, x0) - info(lambda - delta, W, x0)) * n /
        (2.0 * delta);
    double rhs = 0.0;
    if (lambda > 0.0) {
      const sk::SkParams p{lambda, lambda, 0.0};
      const Eigen::MatrixXd corr = enumerate_pair_correlations(W, p, x0);
      rhs = (lambda / (static_cast<double>(n) * n)) *
            (corr - x0 * x0.transpose()).squaredNorm();
    }
    sum_lhs += lhs;
    sum_rhs += rhs;
    const double d = lhs - rhs;
    sum_d += d;
    sum_d2 += d * d;
  }
  ImmseResult out;
  out.lhs = sum_lhs / reps;
  out.rhs = sum_rhs / reps;
  const double mean_d = sum_d / reps;
  out.se = std::sqrt(std::max(0.0, sum_d2 / reps - mean_d * mean_d) / reps);
  return out;
}

PppSample ppp_topk(double m, int K, RngStream& rng) {
  if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("ppp_topk: m in (0,1)");
  if (K < 1) throw std::invalid_argument("ppp_topk: K >= 1");
  PppSample out;
  out.m = m;
  out.points.resize(K);
  double s = 0.0;
  for (int j = 0; j < K; ++j) {
    s += rng.next_exponential();
    out.points[j] = -std::log(m * s) / m;
  }
  return out;
}

namespace {

// Analytic mean of the tail sums below the cutoff point x_K: the points
// below x_K form a PPP with the same intensity, so
// E[sum e^{p x}] = e^{(p-m) x_K} / (p - m) for p > m.
double tail_mean(double m, double xK, double p) { return std::exp((p - m) * xK) / (p - m); }

}  // namespace

PdWeights pd_weights(const PppSample& sample) {
  const double m = sample.m;
  const double x1 = sample.points.front();
  const double xK = sample.points.back();
  double kept = 0.0;
  for (double x : sample.points) kept += std::exp(x - x1);
  const double tail = tail_mean(m, xK, 1.0) * std::exp(-x1);
  const double mass = kept / (kept + tail);
  if (mass < 1.0 - 1e-6)
    throw std::runtime_error("pd_weights: truncation keeps less than 1 - 1e-6 of the mass");
  PdWeights out;
  out.truncated_mass = mass;
  out.weights.resize(sample.points.size());
  for (std::size_t j = 0; j < sample.points.size(); ++j)
    out.weights[j] = std::exp(sample.points[j] - x1) / kept;
  return out;
}

McEstimate pd_second_moment_mc(double m, int K, int reps, RngStream& rng) {
  double acc = 0.0, acc2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
    const PppSample s = ppp_topk(m, K, sub);
    const double x1 = s.points.front();
    const double xK = s.points.back();
    double s1 = 0.0, s2 = 0.0;
    for (double x : s.points) {
      const double e = std::exp(x - x1);
      s1 += e;
      s2 += e * e;
    }
    s1 += tail_mean(m, xK, 1.0) * std::exp(-x1);
    s2 += tail_mean(m, xK, 2.0) * std::exp(-2.0 * x1);
    const double v = s2 / (s1 * s1);
    acc += v;
    acc2 += v * v;
  }
  McEstimate out;
  out.estimate = acc / reps;
  out.se = std::sqrt(std::max(0.0, acc2 / reps - out.estimate * out.estimate) / reps);
  return out;
}

ShiftInvariance ppp_shift_invariance_mc(double m, double mark_sigma, int K, int reps,
                                        RngStream& rng) {
  ShiftInvariance out;
  out.rhs = 0.5 * m * mark_sigma * mark_sigma;
  double acc = 0.0, acc2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
    const PppSample s = ppp_topk(m, K, sub);
    const double xK = s.points.back();
    double plain_max = s.points.front();
    double marked_max = -1e300;
    std::vector<double> shifted(s.points.size());
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      shifted[j] = s.points[j] + mark_sigma * sub.next_gaussian();
      marked_max = std::max(marked_max, shifted[j]);
    }
    double sp = 0.0, sm = 0.0;
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      sp += std::exp(s.points[j] - plain_max);
      sm += std::exp(shifted[j] - marked_max);
    }
    sp += tail_mean(m, xK, 1.0) * std::exp(-plain_max);
    sm += tail_mean(m, xK, 1.0) * std::exp(0.5 * mark_sigma * mark_sigma - marked_max);
    const double d = (marked_max + std::log(sm)) - (plain_max + std::log(sp));
    acc += d;
    acc2 += d * d;
  }
  out.lhs = acc / reps;
  out.se = std::sqrt(std::max(0.0, acc2 / reps - out.lhs * out.lhs) / reps);
  return out;
}

}  // namespace spinglass::oracle
