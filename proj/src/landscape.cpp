#include "spinglass/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinglass/numerics.hpp"
#include "spinglass/quadrature.hpp"

namespace spinglass::landscape {

double complexity_S(double x, int k) {
  if (k < 3) throw std::domain_error("complexity_S: requires k >= 3");
  const double scale = std::sqrt(2.0 * k / (k - 1.0));
  return semicircle_omega(x * scale) - x * x + 0.5 * std::log(k - 1.0) + 0.5;
}

double eps_d(int k) {
  if (k < 3) throw std::domain_error("eps_d: requires k >= 3");
  return std::sqrt(2.0 * (k - 1.0) / k);
}

double eps_star(int k) {
  auto s = [&](double x) { return complexity_S(x, k); };
  return find_root(s, eps_d(k), 4.0, 1e-14);
}

namespace {

double logsumexp(const std::vector<double>& v) {
  double mx = -1e300;
  for (double x : v) mx = std::max(mx, x);
  if (mx <= -1e300) return -1e300;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

}  // namespace

KacRiceEstimate kac_rice_mc(int n, double lo, double hi, int k, int reps, RngStream& rng) {
  if (n < 10) throw std::invalid_argument("kac_rice_mc: n must be >= 10");
  if (reps < 10) throw std::invalid_argument("kac_rice_mc: reps must be >= 10");
  if (!(lo < hi)) throw std::invalid_argument("kac_rice_mc: empty band");
  const double xlo = std::max(lo, -4.0);
  const double xhi = std::min(hi, 4.0);
  if (!(xlo < xhi)) throw std::invalid_argument("kac_rice_mc: band outside [-4,4]");

  const double t = std::sqrt(static_cast<double>(k) / ((k - 1.0) * (n - 1.0)));
  const double s2n = std::sqrt(2.0 * n);
  const double zlo = s2n * xlo, zhi = s2n * xhi;

  // Recentre the Gaussian rule at the in-band point closest to the peak of
  // exp(-z^2/2); the importance weight restores the original density.
  const double center = std::clamp(0.0, zlo, zhi);
  const QuadratureRule& qr = gauss_hermite(201);

  std::vector<double> log_det_expect(reps);
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
    const Eigen::MatrixXd w = goe_sample(n - 1, sub);
    const std::vector<double> ev = sym_eigvals(w);
    std::vector<double> contrib;
    contrib.reserve(qr.nodes.size());
    for (std::size_t j = 0; j < qr.nodes.size(); ++j) {
      // weights below ~1e-25 are eigensolver noise (true values underflow);
      // against the exploding determinant they must be dropped, which
      // truncates e^-30-scale tail mass only
      if (qr.weights[j] < 1e-25) continue;
      const double z = center + qr.nodes[j];
      if (z < zlo || z > zhi) continue;
      double logdet = 0.0;
      const double shift = t * z;
      for (double lam : ev) {
        double gap = std::fabs(lam - shift);
        if (gap < 1e-300) gap = 1e-300;  // |det| is unbounded below
        logdet += std::log(gap);
      }
      // importance weight: phi(z)/phi(z - center) = exp(-center^2/2 - center u)
      const double logw = std::log(qr.weights[j]) - 0.5 * center * center -
                          center * qr.nodes[j];
      contrib.push_back(logw + logdet);
    }
    log_det_expect[r] = contrib.empty() ? -1e300 : logsumexp(contrib);
  }

  const double log_prefactor = 0.5 * (n - 1.0) * std::log(0.5 * (k - 1.0) * (n - 1.0)) +
                               std::log(2.0) + 0.5 * std::log(M_PI) - std::lgamma(0.5 * n);
  auto combine = [&](const std::vector<double>& logs) {
    return (log_prefactor + logsumexp(logs) - std::log(static_cast<double>(logs.size()))) / n;
  };

  KacRiceEstimate est;
  est.n = n;
  est.lo = xlo;
  est.hi = xhi;
  est.reps = reps;
  est.log_count_per_n = combine(log_det_expect);

  // bootstrap over draws
  const int nboot = 200;
  RngStream boot = rng.substream(0xb00ull);
  double acc = 0.0, acc2 = 0.0;
  std::vector<double> resample(reps);
  for (int b = 0; b < nboot; ++b) {
    for (int r = 0; r < reps; ++r)
      resample[r] = log_det_expect[boot.next_u64() % reps];
    const double v = combine(resample);
    acc += v;
    acc2 += v * v;
  }
  acc /= nboot;
  est.std_error = std::sqrt(std::max(0.0, acc2 / nboot - acc * acc));
  return est;
}

}  // namespace spinglass::landscape
