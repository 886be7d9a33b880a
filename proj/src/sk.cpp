#include "spinglass/sk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinglass/numerics.hpp"
#include "spinglass/quadrature.hpp"
#include "spinglass/rng.hpp"

namespace spinglass::sk {

namespace {

double log2cosh(double x) {
  const double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

}  // namespace

double sk_psi_rs(double b, double q, const SkParams& params) {
  if (q < 0.0 || q >= 1.0) throw std::domain_error("sk_psi_rs: q in [0,1)");
  const double beta = params.beta, lambda = params.lambda;
  const QuadratureRule& qr = tanh_quadrature();
  const double sq = std::sqrt(q);
  const double ent =
      qr.expect([&](double g) { return log2cosh(beta * (lambda * b + sq * g)); });
  return 0.25 * beta * beta * (1.0 - q) * (1.0 - q) - 0.5 * beta * lambda * b * b + ent;
}

namespace {

struct RsMaps {
  double tb, tq;  // E tanh, E tanh^2 at (b,q)
};

RsMaps rs_maps(double b, double q, const SkParams& p) {
  const QuadratureRule& qr = tanh_quadrature();
  const double sq = std::sqrt(std::max(0.0, q));
  double tb = 0.0, tq = 0.0;
  for (std::size_t i = 0; i < qr.nodes.size(); ++i) {
    const double th = std::tanh(p.beta * (p.lambda * b + sq * qr.nodes[i]));
    tb += qr.weights[i] * th;
    tq += qr.weights[i] * th * th;
  }
  return {tb, tq};
}

}  // namespace

SkRsPoint sk_solve_rs(const SkParams& params) {
  if (params.beta < 0.0 || params.lambda < 0.0)
    throw std::invalid_argument("sk_solve_rs: beta, lambda >= 0");
  if (params.beta == 0.0) return {0.0, 0.0};

  if (params.lambda == 0.0) {
    // b = 0 identically; the q equation is scalar and monotone enough for
    // a bracketed solve
    auto h = [&](double q) { return rs_maps(0.0, q, params).tq - q; };
    if (h(1e-9) <= 0.0) return {0.0, 0.0};
    const double q = find_root(h, 1e-9, 1.0 - 1e-12, 0.0);
    return {0.0, q};
  }

  double b = 0.9, q = 0.9;
  const double damping = 0.5;
  for (int it = 0; it < 100000; ++it) {
    const RsMaps m = rs_maps(b, q, params);
    const double res = std::max(std::fabs(m.tb - b), std::fabs(m.tq - q));
    b = (1.0 - damping) * b + damping * m.tb;
    q = (1.0 - damping) * q + damping * m.tq;
    if (res < 1e-10) break;
  }
  // Newton polish on F(b,q) = (E tanh - b, E tanh^2 - q)
  for (int it = 0; it < 60; ++it) {
    const RsMaps m = rs_maps(b, q, params);
    const double fb = m.tb - b;
    const double fq = m.tq - q;
    if (std::max(std::fabs(fb), std::fabs(fq)) < 5e-15) break;
    const double db = 1e-7, dq = 1e-7;
    const RsMaps mb = rs_maps(b + db, q, params);
    const RsMaps mq = rs_maps(b, std::min(q + dq, 1.0 - 1e-12), params);
    const double j11 = (mb.tb - m.tb) / db - 1.0;
    const double j12 = (mq.tb - m.tb) / dq;
    const double j21 = (mb.tq - m.tq) / db;
    const double j22 = (mq.tq - m.tq) / dq - 1.0;
    const double det = j11 * j22 - j12 * j21;
    if (std::fabs(det) < 1e-14) break;
    b -= (fb * j22 - fq * j12) / det;
    q -= (fq * j11 - fb * j21) / det;
    b = std::clamp(b, 0.0, 1.0 - 1e-12);
    q = std::clamp(q, 0.0, 1.0 - 1e-12);
  }
  {
    const RsMaps m = rs_maps(b, q, params);
    if (std::max(std::fabs(m.tb - b), std::fabs(m.tq - q)) > 1e-12)
      throw std::runtime_error("sk_solve_rs: fixed-point iteration did not converge");
  }
  if (q < 1e-11) return {0.0, 0.0};
  return {b, q};
}

double sk_rs_entropy(double beta) {
  if (beta <= 0.0) throw std::invalid_argument("sk_rs_entropy: beta > 0");
  const SkParams p{beta, 0.0, 0.0};
  const double q = sk_solve_rs(p).q;
  const QuadratureRule& qr = tanh_quadrature();
  const double sq = std::sqrt(q);
  const double ent = qr.expect([&](double g) { return log2cosh(beta * sq * g); });
  // s = Psi - beta dPsi/dbeta at fixed q* (envelope)
  return ent - 0.25 * beta * beta * (1.0 - q) * (1.0 - q) - beta * beta * q * (1.0 - q);
}

double bayes_fixed_point_z2(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("bayes_fixed_point_z2: lambda >= 0");
  if (lambda <= 1.0) return 0.0;
  const QuadratureRule& qr = tanh_quadrature();
  auto map = [&](double b) {
    const double a = lambda * lambda * b;
    const double s = std::sqrt(std::max(0.0, a));
    return qr.expect([&](double g) { return std::tanh(a + s * g); });
  };
  double b = 0.999;
  for (int it = 0; it < 2000; ++it) {
    const double nb = map(b);
    if (std::fabs(nb - b) < 1e-10) break;
    b = 0.5 * b + 0.5 * nb;
  }
  for (int it = 0; it < 60; ++it) {
    const double r = map(b) - b;
    if (std::fabs(r) < 5e-16) break;
    const double db = 1e-7;
    const double dr = (map(b + db) - (b + db) - r) / db;
    if (std::fabs(dr) < 1e-12) break;
    b = std::clamp(b - r / dr, 1e-12, 1.0 - 1e-12);
  }
  return b;
}

ParisiMeasure ladder_to_measure(const RsbLadder& ladder) {
  if (ladder.q.size() != ladder.m.size() || ladder.q.empty())
    throw std::invalid_argument("ladder_to_measure: |q| must equal |m| > 0");
  if (std::fabs(ladder.m.back() - 1.0) > 1e-12)
    throw std::invalid_argument("ladder_to_measure: m must end at 1");
  ParisiMeasure out;
  double prev_m = 0.0;
  double prev_q = -1.0;
  for (std::size_t l = 0; l < ladder.q.size(); ++l) {
    if (ladder.q[l] < prev_q - 1e-15 || ladder.m[l] < prev_m - 1e-15)
      throw std::invalid_argument("ladder_to_measure: q and m must be non-decreasing");
    const double w = ladder.m[l] - prev_m;
    prev_m = ladder.m[l];
    if (w <= 1e-15) {
      prev_q = ladder.q[l];
      continue;
    }
    if (!out.q.empty() && ladder.q[l] - out.q.back() <= 1e-15) {
      out.w.back() += w;  // merge coincident atoms
    } else {
      out.q.push_back(ladder.q[l]);
      out.w.push_back(w);
    }
    prev_q = ladder.q[l];
  }
  double tot = 0.0;
  for (double w : out.w) tot += w;
  for (double& w : out.w) w /= tot;
  return out;
}

RsbLadder measure_to_ladder(const ParisiMeasure& measure) {
  RsbLadder out;
  double cdf = 0.0;
  for (std::size_t l = 0; l < measure.q.size(); ++l) {
    cdf += measure.w[l];
    out.q.push_back(measure.q[l]);
    out.m.push_back(cdf);
  }
  out.m.back() = 1.0;
  return out;
}

namespace {

// One Cole-Hopf step on a scalar point by nested quadrature:
// value(x, level) recurses down the atom intervals.
struct NestedEval {
  const ParisiMeasure* rho;
  double beta;
  const QuadratureRule* qr;

  // phi at the largest atom location: the final interval has exponent 1 and
  // Gaussian smoothing of log 2cosh is exact.
  double phi_top(double x) const {
    const double q_top = rho->q.back();
    return 0.5 * beta * beta * (1.0 - q_top) + log2cosh(beta * x);
  }

  // exponent on the interval below atom j (cdf of atoms strictly below j+1)
  double level_m(std::size_t j) const {
    double m = 0.0;
    for (std::size_t l = 0; l <= j; ++l) m += rho->w[l];
    return m;
  }

  double value(double x, std::size_t j) const {
    // phi at q_j given phi at q_{j+1}
    if (j + 1 == rho->q.size()) return phi_top(x);
    const double delta = rho->q[j + 1] - rho->q[j];
    const double m = level_m(j);
    if (delta <= 1e-15) return value(x, j + 1);
    const double sd = std::sqrt(delta);
    if (m < 1e-12) {
      double acc = 0.0;
      for (std::size_t i = 0; i < qr->nodes.size(); ++i)
        acc += qr->weights[i] * value(x + sd * qr->nodes[i], j + 1);
      return acc;
    }
    double mx = -1e300;
    std::vector<double> vals(qr->nodes.size());
    for (std::size_t i = 0; i < qr->nodes.size(); ++i) {
      vals[i] = m * value(x + sd * qr->nodes[i], j + 1);
      mx = std::max(mx, vals[i]);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < qr->nodes.size(); ++i)
      acc += qr->weights[i] * std::exp(vals[i] - mx);
    return (mx + std::log(acc)) / m;
  }

  double phi00() const {
    const double q0 = rho->q.front();
    if (q0 <= 1e-15) return value(0.0, 0);
    // below the smallest atom the exponent is 0: plain Gaussian average
    const double sd = std::sqrt(q0);
    double acc = 0.0;
    for (std::size_t i = 0; i < qr->nodes.size(); ++i)
      acc += qr->weights[i] * value(sd * qr->nodes[i], 0);
    return acc;
  }
};

double measure_q2(const ParisiMeasure& rho) {
  double acc = 0.0;
  for (std::size_t l = 0; l < rho.q.size(); ++l) acc += rho.w[l] * rho.q[l] * rho.q[l];
  return acc;
}

}  // namespace

double krsb_value(const RsbLadder& ladder, double beta) {
  const ParisiMeasure rho = ladder_to_measure(ladder);
  if (rho.q.size() > 4)
    throw std::runtime_error(
        "krsb_value: more than 4 atoms; use parisi_functional for deeper ladders");
  // order 201: the nested recursion is the reference side of the duality
  // check, so it gets the sharper rule at cubic cost
  static const QuadratureRule nested_rule = gauss_hermite(201);
  NestedEval ev{&rho, beta, &nested_rule};
  return -0.25 * beta * beta + 0.25 * beta * beta * measure_q2(rho) + ev.phi00();
}

PdeGrid default_grid(double beta, int nx) { return {10.0 + 4.0 * beta, nx}; }

double parisi_phi(const ParisiMeasure& measure, double beta, const PdeGrid& grid) {
  if (measure.q.empty()) throw std::invalid_argument("parisi_phi: empty measure");
  if (grid.nx < 129 || grid.x_max < 10.0 + 4.0 * beta - 1e-9)
    throw std::invalid_argument("parisi_phi: grid too small for 6 sigma of smoothing");
  for (std::size_t l = 0; l < measure.q.size(); ++l) {
    if (measure.q[l] < 0.0 || measure.q[l] > 1.0 || measure.w[l] <= 0.0)
      throw std::invalid_argument("parisi_phi: invalid measure");
    if (l > 0 && measure.q[l] <= measure.q[l - 1])
      throw std::invalid_argument("parisi_phi: atom locations must increase");
  }

  const int nx = grid.nx;
  const double h = 2.0 * grid.x_max / (nx - 1);
  const QuadratureRule& qr = default_quadrature();
  const std::size_t na = qr.nodes.size();

  // The smoothing shifts are grid-independent, so the cubic interpolation
  // runs as a per-node strided pass over a padded array; the padding carries
  // the asymptote phi ~ beta|x| + c.
  const double max_node = std::fabs(qr.nodes.back());
  const int pad = static_cast<int>(std::ceil(max_node / h)) + 4;
  const std::size_t ext_n = static_cast<std::size_t>(nx) + 2 * pad;
  std::vector<double> ext(ext_n), next(nx), vals(static_cast<std::size_t>(na) * nx);

  std::vector<double> y(nx);
  const double q_top = measure.q.back();
  for (int i = 0; i < nx; ++i) {
    const double x = -grid.x_max + i * h;
    y[i] = 0.5 * beta * beta * (1.0 - q_top) + log2cosh(beta * x);
  }

  std::vector<double> cdf(measure.q.size());
  double acc = 0.0;
  for (std::size_t l = 0; l < measure.q.size(); ++l) {
    acc += measure.w[l];
    cdf[l] = acc;
  }

  // sweep intervals downward; the exponent on [q_j, q_{j+1}) is the cdf at q_j
  for (int j = static_cast<int>(measure.q.size()) - 1; j >= 0; --j) {
    const double q_lo = j == 0 ? 0.0 : measure.q[j - 1];
    const double delta = measure.q[j] - q_lo;
    if (delta <= 1e-15) continue;
    const double m = j == 0 ? 0.0 : cdf[j - 1];
    const double sd = std::sqrt(delta);

    for (int i = 0; i < pad; ++i) {
      ext[i] = y[0] + beta * h * (pad - i);
      ext[pad + nx + i] = y[nx - 1] + beta * h * (i + 1);
    }
    std::copy(y.begin(), y.end(), ext.begin() + pad);

    // interpolated shifted copies, one strided pass per quadrature node
    for (std::size_t a = 0; a < na; ++a) {
      const double s = sd * qr.nodes[a] / h;
      const int o = static_cast<int>(std::floor(s));
      const double t = s - o;
      const double wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
      const double w0 = (t * t - 1.0) * (t - 2.0) / 2.0;
      const double w1 = -t * (t + 1.0) * (t - 2.0) / 2.0;
      const double w2 = t * (t * t - 1.0) / 6.0;
      const double* base = ext.data() + pad + o;
      double* row = vals.data() + a * nx;
      for (int i = 0; i < nx; ++i)
        row[i] = wm1 * base[i - 1] + w0 * base[i] + w1 * base[i + 1] + w2 * base[i + 2];
    }

    if (m < 1e-12) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t a = 0; a < na; ++a) {
        const double w = qr.weights[a];
        const double* row = vals.data() + a * nx;
        for (int i = 0; i < nx; ++i) next[i] += w * row[i];
      }
    } else {
      for (int i = 0; i < nx; ++i) {
        double mx = -1e300;
        for (std::size_t a = 0; a < na; ++a) mx = std::max(mx, vals[a * nx + i]);
        double ssum = 0.0;
        for (std::size_t a = 0; a < na; ++a)
          ssum += qr.weights[a] * std::exp(m * (vals[a * nx + i] - mx));
        next[i] = mx + std::log(ssum) / m;
      }
    }
    y.swap(next);
  }
  return y[(nx - 1) / 2];
}

double parisi_functional(const ParisiMeasure& measure, double beta, const PdeGrid& grid) {
  return -0.25 * beta * beta + 0.25 * beta * beta * measure_q2(measure) +
         parisi_phi(measure, beta, grid);
}

namespace {

// pack: atom locations (sorted) and interior cdf levels
struct AtomParam {
  std::vector<double> q;    // size k
  std::vector<double> cdf;  // size k, last fixed at 1
};

ParisiMeasure to_measure(const AtomParam& p) {
  ParisiMeasure rho;
  double prev = 0.0;
  for (std::size_t l = 0; l < p.q.size(); ++l) {
    const double w = p.cdf[l] - prev;
    prev = p.cdf[l];
    if (w <= 1e-12) continue;
    if (!rho.q.empty() && p.q[l] - rho.q.back() <= 1e-12) {
      rho.w.back() += w;
    } else {
      rho.q.push_back(p.q[l]);
      rho.w.push_back(w);
    }
  }
  if (rho.q.empty()) {
    rho.q.push_back(p.q.back());
    rho.w.push_back(1.0);
  }
  double tot = 0.0;
  for (double w : rho.w) tot += w;
  for (double& w : rho.w) w /= tot;
  return rho;
}

}  // namespace

ParisiOpt minimize_parisi(int n_atoms, double beta, const PdeGrid& grid) {
  if (n_atoms < 1 || n_atoms > 3)
    throw std::invalid_argument("minimize_parisi: n_atoms in {1,2,3}");
  if (beta <= 0.0) throw std::invalid_argument("minimize_parisi: beta > 0");

  auto eval = [&](const AtomParam& p) {
    return parisi_functional(to_measure(p), beta, grid);
  };

  const int k = n_atoms;
  RngStream rng(20240601u, 7u);
  std::vector<AtomParam> starts;
  {
    // structured starts (RS-like collapse, spread ladder) plus one random
    AtomParam a;
    a.q.assign(k, 0.0);
    a.cdf.assign(k, 0.0);
    const double q_rs = std::max(0.1, 1.0 - 1.0 / beta);
    for (int l = 0; l < k; ++l) {
      a.q[l] = q_rs * (l + 1.0) / k;
      a.cdf[l] = (l + 1.0) / k;
    }
    a.cdf[k - 1] = 1.0;
    starts.push_back(a);
    AtomParam b = a;
    for (int l = 0; l < k; ++l) b.q[l] = 0.05 + 0.9 * (l + 0.5) / k;
    starts.push_back(b);
    AtomParam c;
    std::vector<double> qs(k), ms(k);
    for (int l = 0; l < k; ++l) {
      qs[l] = 0.98 * rng.next_uniform();
      ms[l] = rng.next_uniform();
    }
    std::sort(qs.begin(), qs.end());
    std::sort(ms.begin(), ms.end());
    ms[k - 1] = 1.0;
    c.q = qs;
    c.cdf = ms;
    starts.push_back(c);
  }

  // The value is quadratic around a line-search optimum, so a 3e-5 location
  // tolerance already pins the value to ~1e-9.
  const double line_tol = 3e-5;
  AtomParam best_p = starts[0];
  double best_v = eval(best_p);
  for (const AtomParam& s0 : starts) {
    AtomParam p = s0;
    double v = eval(p);
    for (int sweep = 0; sweep < 30; ++sweep) {
      const double v_before = v;
      for (int l = 0; l < k; ++l) {
        const double lo = l == 0 ? 0.0 : p.q[l - 1];
        const double hi = l == k - 1 ? 1.0 - 1e-9 : p.q[l + 1];
        auto f = [&](double x) {
          AtomParam t = p;
          t.q[l] = x;
          return eval(t);
        };
        auto [x, fv] = minimize_scalar(f, lo, hi, line_tol);
        if (fv < v) {
          p.q[l] = x;
          v = fv;
        }
      }
      for (int l = 0; l + 1 < k; ++l) {
        const double lo = l == 0 ? 1e-9 : p.cdf[l - 1];
        const double hi = p.cdf[l + 1];
        auto f = [&](double x) {
          AtomParam t = p;
          t.cdf[l] = x;
          return eval(t);
        };
        auto [x, fv] = minimize_scalar(f, lo, hi, line_tol);
        if (fv < v) {
          p.cdf[l] = x;
          v = fv;
        }
      }
      if (v_before - v < 1e-10) break;
    }
    if (v < best_v) {
      best_v = v;
      best_p = p;
    }
  }
  return {to_measure(best_p), best_v};
}

double extract_p_star(int n_atoms, const std::vector<double>& betas, int nx) {
  if (betas.size() < 2) throw std::invalid_argument("extract_p_star: need >= 2 betas");
  // least-squares line y = a + b x with x = 1/beta, y = P*(beta)/beta
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(betas.size());
  for (double beta : betas) {
    const ParisiOpt opt = minimize_parisi(n_atoms, beta, default_grid(beta, nx));
    const double x = 1.0 / beta;
    const double y = opt.value / beta;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return (sy - slope * sx) / n;
}

double p_star_cached() { return 0.763166726567; }

double maxcut_prediction(double d) { return 0.25 * d + p_star_cached() * std::sqrt(0.25 * d); }

}  // namespace spinglass::sk
