#include "spinglass/amp.hpp"

#include <cmath>
#include <stdexcept>

#include "spinglass/numerics.hpp"
#include "spinglass/quadrature.hpp"

namespace spinglass::amp {

SpikedInstance sample_instance(int n, double lambda, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("sample_instance: n >= 2");
  SpikedInstance inst;
  inst.n = n;
  inst.lambda = lambda;
  inst.x0.resize(n);
  for (int i = 0; i < n; ++i) inst.x0(i) = rng.next_u64() & 1 ? 1.0 : -1.0;
  inst.Y = goe_sample(n, rng);
  if (lambda != 0.0) inst.Y += (lambda / n) * inst.x0 * inst.x0.transpose();
  return inst;
}

Nonlinearity bayes_nonlinearity(double lambda) {
  return {[lambda](double y) { return std::tanh(lambda * y); },
          [lambda](double y) {
            const double t = std::tanh(lambda * y);
            return lambda * (1.0 - t * t);
          }};
}

AmpState amp_init(const Eigen::VectorXd& x0_iterate) {
  AmpState s;
  s.t = 0;
  s.x = x0_iterate;
  return s;
}

AmpState amp_step(const AmpState& state, const Eigen::MatrixXd& Y, const Nonlinearity& nl) {
  const int n = static_cast<int>(state.x.size());
  if (Y.rows() != n || Y.cols() != n) throw std::invalid_argument("amp_step: dimension mismatch");
  Eigen::VectorXd m(n);
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    m(i) = nl.f(state.x(i));
    d += nl.fprime(state.x(i));
  }
  d /= n;
  AmpState next;
  next.t = state.t + 1;
  next.x = Y * m;
  if (state.prev_nonlin.size() > 0) next.x -= d * state.prev_nonlin;  // d_0 = 0 convention
  next.x_prev = state.x;
  next.prev_nonlin = std::move(m);
  next.onsager = state.prev_nonlin.size() > 0 ? d : 0.0;
  return next;
}

BayesAmpRun run_bayes_amp(const SpikedInstance& inst, double eps_side_info, int T,
                          RngStream& rng) {
  if (eps_side_info < 0.0 || T < 1) throw std::invalid_argument("run_bayes_amp: bad arguments");
  const int n = inst.n;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = eps_side_info * inst.x0(i) + rng.next_gaussian();
  const Nonlinearity nl = bayes_nonlinearity(inst.lambda);

  BayesAmpRun run;
  AmpState s = amp_init(y);
  for (int t = 1; t <= T; ++t) {
    s = amp_step(s, inst.Y, nl);
    double ov = 0.0, nrm = 0.0, eov = 0.0, enrm = 0.0;
    for (int i = 0; i < n; ++i) {
      const double est = std::tanh(inst.lambda * s.x(i));
      ov += inst.x0(i) * s.x(i);
      nrm += s.x(i) * s.x(i);
      eov += inst.x0(i) * est;
      enrm += est * est;
    }
    run.overlap.push_back(ov / n);
    run.sqnorm.push_back(nrm / n);
    run.est_overlap.push_back(eov / n);
    run.est_sqnorm.push_back(enrm / n);
  }
  run.x_final = s.x;
  return run;
}

namespace {

// E over X0 ~ Unif{+-1} and G ~ N(0,1) of g(X0, a X0 + sqrt(q) G)
template <typename G>
double se_expect(double a, double q, G&& g) {
  const QuadratureRule& qr = tanh_quadrature();
  const double s = std::sqrt(std::max(0.0, q));
  double acc = 0.0;
  for (std::size_t i = 0; i < qr.nodes.size(); ++i) {
    acc += 0.5 * qr.weights[i] * (g(1.0, a + s * qr.nodes[i]) + g(-1.0, -a + s * qr.nodes[i]));
  }
  return acc;
}

}  // namespace

SeTrajectory state_evolution(double lambda, const Nonlinearity& nl, double a0, double q0,
                             int T) {
  if (q0 < 0.0) throw std::invalid_argument("state_evolution: q0 >= 0");
  SeTrajectory se;
  double a = lambda * a0;
  double q = q0;
  for (int t = 1; t <= T; ++t) {
    se.a.push_back(a);
    se.q.push_back(q);
    const double na =
        lambda * se_expect(a, q, [&](double x0, double y) { return x0 * nl.f(y); });
    const double nq = se_expect(a, q, [&](double, double y) {
      const double v = nl.f(y);
      return v * v;
    });
    a = na;
    q = nq;
  }
  return se;
}

std::pair<double, double> se_init_side_info(double eps, const Nonlinearity& nl) {
  // x^0 = eps X0 + G: a0 = E[X0 f(x^0)], q0 = E[f(x^0)^2]
  const double a0 = se_expect(eps, 1.0, [&](double x0, double y) { return x0 * nl.f(y); });
  const double q0 = se_expect(eps, 1.0, [&](double, double y) {
    const double v = nl.f(y);
    return v * v;
  });
  return {a0, q0};
}

std::vector<double> bayes_se(double lambda, double b0, int T) {
  const QuadratureRule& qr = tanh_quadrature();
  std::vector<double> b;
  b.reserve(T + 1);
  b.push_back(b0);
  double cur = b0;
  for (int t = 0; t < T; ++t) {
    const double a = lambda * lambda * cur;
    const double s = std::sqrt(std::max(0.0, a));
    cur = qr.expect([&](double g) { return std::tanh(a + s * g); });
    b.push_back(cur);
  }
  return b;
}

SeComparison empirical_vs_se(int n, double lambda, double eps, int T, int reps,
                             RngStream& rng) {
  if (n < 1000) throw std::invalid_argument("empirical_vs_se: n >= 1000");
  const Nonlinearity nl = bayes_nonlinearity(lambda);
  auto [a0, q0] = se_init_side_info(eps, nl);
  SeComparison cmp;
  cmp.prediction = state_evolution(lambda, nl, a0, q0, T);
  std::vector<double> pred_t2(T), pred_eo(T);
  for (int t = 0; t < T; ++t) {
    const double a = cmp.prediction.a[t], q = cmp.prediction.q[t];
    pred_t2[t] = se_expect(a, q, [&](double, double y) {
      const double v = std::tanh(lambda * y);
      return v * v;
    });
    pred_eo[t] = se_expect(a, q, [&](double x0, double y) { return x0 * std::tanh(lambda * y); });
  }

  std::vector<std::vector<double>> ov(T), n2(T), t2(T), eo(T);
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
    const SpikedInstance inst = sample_instance(n, lambda, sub);
    const BayesAmpRun run = run_bayes_amp(inst, eps, T, sub);
    for (int t = 0; t < T; ++t) {
      ov[t].push_back(run.overlap[t]);
      n2[t].push_back(run.sqnorm[t]);
      t2[t].push_back(run.est_sqnorm[t]);
      eo[t].push_back(run.est_overlap[t]);
    }
  }
  auto reduce = [&](const std::vector<std::vector<double>>& per_t,
                    const std::vector<double>& pred, std::vector<double>& dev,
                    std::vector<double>& se) {
    for (int t = 0; t < T; ++t) {
      double m = 0.0, s2 = 0.0;
      for (double v : per_t[t]) m += v;
      m /= per_t[t].size();
      for (double v : per_t[t]) s2 += (v - m) * (v - m);
      dev.push_back(std::fabs(m - pred[t]));
      se.push_back(per_t[t].size() > 1
                       ? std::sqrt(s2 / (per_t[t].size() - 1.0) / per_t[t].size())
                       : 0.0);
    }
  };
  std::vector<double> pred_ov(T), pred_n2(T);
  for (int t = 0; t < T; ++t) {
    pred_ov[t] = cmp.prediction.a[t];
    pred_n2[t] = cmp.prediction.a[t] * cmp.prediction.a[t] + cmp.prediction.q[t];
  }
  reduce(ov, pred_ov, cmp.dev_overlap, cmp.se_overlap);
  reduce(n2, pred_n2, cmp.dev_sqnorm, cmp.se_sqnorm);
  reduce(t2, pred_t2, cmp.dev_tanh2, cmp.se_tanh2);
  reduce(eo, pred_eo, cmp.dev_est_overlap, cmp.se_est_overlap);
  return cmp;
}

OnsagerAblation onsager_ablation(int n, int t_check, int reps, RngStream& rng) {
  const Nonlinearity nl{[](double y) { return std::tanh(y); },
                        [](double y) {
                          const double t = std::tanh(y);
                          return 1.0 - t * t;
                        }};
  auto [a0, q0] = se_init_side_info(0.0, nl);
  const SeTrajectory se = state_evolution(0.0, nl, a0, q0, t_check);
  const double q_target = se.q[t_check - 1];

  OnsagerAblation out;
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
    const SpikedInstance inst = sample_instance(n, 0.0, sub);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = sub.next_gaussian();

    AmpState corr = amp_init(y);
    Eigen::VectorXd plain_x = y, plain_prev = y;
    for (int t = 1; t <= t_check; ++t) {
      corr = amp_step(corr, inst.Y, nl);
      Eigen::VectorXd m(n);
      for (int i = 0; i < n; ++i) m(i) = nl.f(plain_x(i));
      plain_prev = plain_x;
      plain_x = inst.Y * m;  // same iteration without the memory term
    }
    out.dev_corrected += std::fabs(corr.x.squaredNorm() / n - q_target);
    out.dev_uncorrected += std::fabs(plain_x.squaredNorm() / n - q_target);
  }
  out.dev_corrected /= reps;
  out.dev_uncorrected /= reps;
  return out;
}

}  // namespace spinglass::amp
