#include "spinglass/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace spinglass {

double semicircle_omega(double x) {
  const double a = std::fabs(x);
  const double base = 0.25 * x * x - 0.5;
  if (a <= 2.0) return base;
  const double r = std::sqrt(x * x - 4.0);
  return base - 0.25 * a * r + std::log(0.5 * (a + r));
}

double semicircle_stieltjes(double z) {
  if (std::fabs(z) <= 2.0) throw std::domain_error("semicircle_stieltjes: |z| must exceed 2");
  const double s = z > 0 ? 1.0 : -1.0;
  return 0.5 * (z - s * std::sqrt(z * z - 4.0));
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * M_PI) + std::asin(0.5 * x) / M_PI;
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::invalid_argument("find_root: no sign change on bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (std::fabs(fmid) <= tol && (hi - lo) <= 1e-14 * (1.0 + std::fabs(mid))) return mid;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
    if (hi - lo <= 1e-16 * (1.0 + std::fabs(mid))) return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> minimize_scalar(const std::function<double(double)>& f, double lo,
                                          double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

Eigen::MatrixXd goe_sample(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("goe_sample: n must be >= 1");
  Eigen::MatrixXd w(n, n);
  const double off = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag = std::sqrt(2.0 / static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    w(i, i) = diag * rng.next_gaussian();
    for (int j = i + 1; j < n; ++j) {
      const double v = off * rng.next_gaussian();
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  return w;
}

std::vector<double> sym_eigvals(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eigvals: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("sym_eigvals: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("sym_eigvals: eigensolve failed");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  return ev;
}

}  // namespace spinglass
