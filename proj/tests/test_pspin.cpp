#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spinglass/landscape.hpp"
#include "spinglass/pspin.hpp"
#include "spinglass/rng.hpp"

using namespace spinglass;
using namespace spinglass::pspin;

TEST_CASE("rs functional special values") {
  // all non-constant terms vanish at the origin
  for (int k : {1, 2, 3, 5}) {
    for (double beta : {0.5, 1.7}) {
      const PSpinParams p{k, beta, 0.0, 0.0};
      CHECK(psi_rs({0.0, 0.0}, p) == doctest::Approx(0.25 * beta * beta).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(psi_rs({0.0, 1.0}, PSpinParams{3, 1.0, 0.0, 0.0}), std::domain_error);

  // k=1 Bayes line: b = q = lambda^2/(1+lambda^2) is stationary
  const double lam = 1.3;
  const PSpinParams p1{1, lam * std::sqrt(2.0), lam, 0.0};
  const double bb = lam * lam / (1.0 + lam * lam);
  auto [db, dq] = grad_psi_rs({bb, bb}, p1);
  CHECK(std::fabs(db) < 1e-12);
  CHECK(std::fabs(dq) < 1e-12);

  // independent evaluation of the same closed form, assembled differently
  {
    const PSpinParams p{3, 1.0, 2.0, 0.0};
    const double b = 0.3, q = 0.5;
    const double direct = psi_rs({b, q}, p);
    const double k_fact = 6.0;
    double expected = 0.0;
    expected += p.h * b;
    expected += p.beta * p.lambda * std::pow(b, 3) / std::sqrt(2.0 * k_fact);
    expected += 0.25 * p.beta * p.beta * (1.0 - q * q * q);
    expected += (q - b * b) / (2.0 * (1.0 - q)) + 0.5 * std::log1p(-q);
    CHECK(direct == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("gradient matches finite differences at random interior points") {
  RngStream rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    RngStream sub = rng.substream(trial);
    const PSpinParams p{2 + static_cast<int>(sub.next_u64() % 4), 0.2 + 2.0 * sub.next_uniform(),
                        2.0 * sub.next_uniform(), 0.5 * sub.next_uniform()};
    const double b = 0.05 + 0.6 * sub.next_uniform();
    const double q = 0.05 + 0.85 * sub.next_uniform();
    auto [db, dq] = grad_psi_rs({b, q}, p);
    const double eps = 1e-6;
    const double fdb = (psi_rs({b + eps, q}, p) - psi_rs({b - eps, q}, p)) / (2.0 * eps);
    const double fdq = (psi_rs({b, q + eps}, p) - psi_rs({b, q - eps}, p)) / (2.0 * eps);
    CHECK(std::fabs(db - fdb) < 1e-6);
    CHECK(std::fabs(dq - fdq) < 1e-6);
  }
}

TEST_CASE("paramagnet is stationary for k >= 3") {
  auto [db, dq] = grad_psi_rs({0.0, 0.0}, PSpinParams{3, 1.4, 0.7, 0.0});
  CHECK(db == 0.0);
  CHECK(dq == 0.0);
}

TEST_CASE("k=2 recovery point is stationary") {
  const PSpinParams p{2, 2.0, 2.0, 0.0};
  const double q = 1.0 - 1.0 / (p.beta * p.lambda);
  const double b = std::sqrt((1.0 - 1.0 / (p.lambda * p.lambda)) * q);
  auto [db, dq] = grad_psi_rs({b, q}, p);
  CHECK(std::fabs(db) < 1e-10);
  CHECK(std::fabs(dq) < 1e-10);
}

TEST_CASE("solve_rs closed-form branches") {
  // k=2 spin glass
  const RsPoint sg = solve_rs(PSpinParams{2, 2.0, 0.0, 0.0}, RsBranch::Nontrivial);
  CHECK(sg.b == doctest::Approx(0.0));
  CHECK(sg.q == doctest::Approx(0.5).epsilon(1e-10));
  // k=2 recovery
  const RsPoint rec = solve_rs(PSpinParams{2, 2.0, 2.0, 0.0}, RsBranch::Nontrivial);
  CHECK(rec.b == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(rec.q == doctest::Approx(0.75).epsilon(1e-10));
  // k=1 Bayes: b = q = 1/2 at lambda = 1
  const RsPoint k1 = solve_rs(PSpinParams{1, std::sqrt(2.0), 1.0, 0.0}, RsBranch::Trivial);
  CHECK(k1.b == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(k1.q == doctest::Approx(0.5).epsilon(1e-12));
  // trivial branch
  const RsPoint tr = solve_rs(PSpinParams{3, 1.0, 1.0, 0.0}, RsBranch::Trivial);
  CHECK(tr.b == 0.0);
  CHECK(tr.q == 0.0);
  // below the spinodal there is no nontrivial point
  CHECK_THROWS_AS(solve_rs(PSpinParams{3, 0.5, 0.0, 0.0}, RsBranch::Nontrivial),
                  std::runtime_error);
  // residual gradient at a solved quartic point above its spinodal
  const PSpinParams hard{4, 7.0 * std::sqrt(2.0 / 24.0), 7.0, 0.0};
  const RsPoint pt = solve_rs(hard, RsBranch::Nontrivial);
  auto [db, dq] = grad_psi_rs(pt, hard);
  CHECK(std::hypot(db, dq) < 1e-10);
  CHECK(pt.b * pt.b <= pt.q + 1e-9);
}

TEST_CASE("pure-noise spinodal comes from the fixed-point equation") {
  // The printed closed form in the source material is inconsistent with
  // maximizing q^{k-2}(1-q)^2; the fixed-point route gives
  // beta_s^2 = k^{k-1}/(2(k-2)^{k-2}), verified against the solver.
  for (int k : {3, 4, 5}) {
    const double bs = beta_spinodal_noise(k);
    CHECK(bs * bs ==
          doctest::Approx(std::pow(k, k - 1) / (2.0 * std::pow(k - 2.0, k - 2))).epsilon(1e-14));
    CHECK_THROWS_AS(solve_rs(PSpinParams{k, bs * 0.999, 0.0, 0.0}, RsBranch::Nontrivial),
                    std::runtime_error);
    const RsPoint above = solve_rs(PSpinParams{k, bs * 1.001, 0.0, 0.0}, RsBranch::Nontrivial);
    CHECK(above.q > 0.0);
  }
}

TEST_CASE("bayes line solution has b = q") {
  for (double lam : {3.0, 3.5, 5.0}) {
    const int k = 3;
    const double beta = lam * std::sqrt(2.0 / 6.0);
    const RsPoint pt = solve_rs(PSpinParams{k, beta, lam, 0.0}, RsBranch::Nontrivial);
    CHECK(std::fabs(pt.b - pt.q) <= 1e-9);
  }
}

TEST_CASE("k=2 phase diagram") {
  const K2Phase p = k2_phase(0.5, 0.5);
  CHECK(p.label == PhaseLabel::Paramagnetic);
  CHECK(p.point.b == 0.0);
  CHECK(p.point.q == 0.0);

  const K2Phase sg = k2_phase(2.0, 0.5);
  CHECK(sg.label == PhaseLabel::SpinGlass);
  CHECK(sg.point.q == doctest::Approx(0.5));

  const K2Phase rec = k2_phase(2.0, 2.0);
  CHECK(rec.label == PhaseLabel::Recovery);
  CHECK(rec.point.b == doctest::Approx(0.75));
  CHECK(rec.point.q == doctest::Approx(0.75));
  CHECK(rec.mse == doctest::Approx(0.25).epsilon(1e-12));
  // the recovery mse equals the closed radical expression
  const double lam = 2.0, beta = 2.0;
  const double radical = 1.0 / (lam * lam) +
                         std::pow(std::sqrt(1.0 - 1.0 / (lam * lam)) -
                                      std::sqrt(1.0 - 1.0 / (beta * lam)),
                                  2);
  CHECK(rec.mse == doctest::Approx(radical).epsilon(1e-12));

  CHECK(mse_ml_k2(2.0) == doctest::Approx(2.0 - 2.0 * std::sqrt(0.75)).epsilon(1e-14));
  CHECK(mse_ml_k2(0.8) == doctest::Approx(2.0));
}

TEST_CASE("k=2 free energies agree across phase boundaries") {
  const PSpinParams base{2, 0.0, 0.0, 0.0};
  auto psi_at = [&](double beta, double lambda, const RsPoint& pt) {
    PSpinParams p = base;
    p.beta = beta;
    p.lambda = lambda;
    return psi_rs(pt, p);
  };
  // P <-> SG along beta = 1 (lambda < 1)
  for (double lam : {0.2, 0.6, 0.9}) {
    const RsPoint para{0.0, 0.0};
    const RsPoint sg{0.0, 1.0 - 1.0 / 1.0};
    CHECK(std::fabs(psi_at(1.0, lam, para) - psi_at(1.0, lam, sg)) < 1e-9);
  }
  // P <-> R along lambda = 1/beta (beta < 1)
  for (double beta : {0.4, 0.7, 0.95}) {
    const double lam = 1.0 / beta;
    const RsPoint para{0.0, 0.0};
    const double q = 1.0 - 1.0 / (beta * lam);
    const RsPoint rec{std::sqrt(std::max(0.0, (1.0 - 1.0 / (lam * lam)) * q)), q};
    CHECK(std::fabs(psi_at(beta, lam, para) - psi_at(beta, lam, rec)) < 1e-9);
  }
  // SG <-> R along lambda = 1 (beta >= 1)
  for (double beta : {1.0, 1.5, 3.0}) {
    const RsPoint sg{0.0, 1.0 - 1.0 / beta};
    const double q = 1.0 - 1.0 / beta;
    const RsPoint rec{0.0, q};
    CHECK(std::fabs(psi_at(beta, 1.0, sg) - psi_at(beta, 1.0, rec)) < 1e-9);
  }
}

TEST_CASE("bayes fixed points and thresholds") {
  CHECK(lambda_spinodal(3) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(lambda_spinodal(4) == doctest::Approx(std::sqrt(40.5)).epsilon(1e-15));
  CHECK_THROWS_AS(lambda_spinodal(2), std::domain_error);

  // below the spinodal only the uninformative point
  const auto below = bayes_fixed_points(2.5, 3);
  CHECK(below.size() == 1);
  CHECK(below[0] == 0.0);

  // at the spinodal the two new roots coincide
  const auto at = bayes_fixed_points(lambda_spinodal(3), 3);
  REQUIRE(at.size() == 3);
  CHECK(std::fabs(at[1] - at[2]) < 1e-6);

  // above: residual of the fixed-point equation below 1e-12
  const double lam = 3.0;
  const auto pts = bayes_fixed_points(lam, 3);
  REQUIRE(pts.size() == 3);
  CHECK(pts[1] > 0.0);
  CHECK(pts[1] < pts[2]);
  CHECK(pts[2] < 1.0);
  const double xi = lam * lam / 2.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double b = pts[i];
    CHECK(std::fabs(b - xi * b * b / (1.0 + xi * b * b)) < 1e-12);
  }
  // bisection oracle on the scalar equation xi b^{k-2}(1-b) = 1
  double lo = 2.0 / 3.0, hi = 1.0 - 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (xi * mid * (1.0 - mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  CHECK(pts[2] == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));

  CHECK(lambda_critical(3) == doctest::Approx(2.955).epsilon(0.002));
  CHECK(lambda_critical(3) > lambda_spinodal(3));
}

TEST_CASE("1rsb functional values") {
  // q1 = 0 is paramagnetic for any m
  for (double m : {0.2, 0.7, 1.0})
    CHECK(psi_1rsb(0.0, m, 1.4, 3) == doctest::Approx(1.4 * 1.4 / 4.0).epsilon(1e-14));
  // m = 1 gives the paramagnetic value for any q1
  for (double q1 : {0.1, 0.5, 0.9})
    CHECK(psi_1rsb(q1, 1.0, 1.4, 3) == doctest::Approx(1.4 * 1.4 / 4.0).epsilon(1e-12));
}

TEST_CASE("general 1rsb functional collapses to rs") {
  RngStream rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    RngStream sub = rng.substream(trial);
    const PSpinParams p{3 + static_cast<int>(sub.next_u64() % 3), 0.3 + 2.0 * sub.next_uniform(),
                        2.0 * sub.next_uniform(), 0.3 * sub.next_uniform()};
    const double b = 0.5 * sub.next_uniform();
    const double q = 0.05 + 0.9 * sub.next_uniform();
    const double m = sub.next_uniform();
    // q1 = q0 = q: independent of m, equal to Psi_RS
    CHECK(std::fabs(psi_1rsb_general(b, q, q, m, p) - psi_rs({b, q}, p)) < 1e-10);
  }
  // m -> 0 reproduces Psi_RS with q1; m = 1 with q0
  const PSpinParams p{3, 1.2, 0.8, 0.1};
  const double b = 0.2, q0 = 0.3, q1 = 0.7;
  CHECK(psi_1rsb_general(b, q0, q1, 0.0, p) == doctest::Approx(psi_rs({b, q1}, p)).epsilon(1e-12));
  CHECK(psi_1rsb_general(b, q0, q1, 1.0, p) == doctest::Approx(psi_rs({b, q0}, p)).epsilon(1e-12));
}

TEST_CASE("dynamic temperature and q1 branch") {
  CHECK(t_dynamic(1.0, 3) == doctest::Approx(std::sqrt(3.0 / 8.0)).epsilon(1e-10));
  // maximization oracle: scan f1 directly
  for (double m : {0.3, 0.8}) {
    double best = 0.0;
    for (int i = 1; i < 20000; ++i) best = std::max(best, f1(i / 20000.0, m, 3));
    CHECK(t_dynamic(m, 3) == doctest::Approx(std::sqrt(1.5 * best)).epsilon(1e-8));
  }
  // no root above T_d(m)
  CHECK_THROWS_AS(solve_q1_star(1.0 / (t_dynamic(0.5, 3) * 1.01), 0.5, 3), std::runtime_error);
  // largest root solves the equation
  const double beta = 1.0 / (0.9 * t_dynamic(0.5, 3));
  const double q1 = solve_q1_star(beta, 0.5, 3);
  CHECK(std::fabs(f1(q1, 0.5, 3) - 2.0 / (3.0 * beta * beta)) < 1e-12);
}

TEST_CASE("m_star regimes") {
  const int k = 3;
  const double td = t_dynamic(1.0, k);
  const double ts = t_static(k);
  CHECK(ts < td);
  CHECK(ts == doctest::Approx(0.5861).epsilon(2e-3));

  // slightly above T_s the relevant point is m = 1 with the paramagnetic value
  const MStarResult hi = m_star(ts * 1.02, k);
  CHECK(hi.m == 1.0);
  CHECK(hi.psi == doctest::Approx(0.25 / (ts * 1.02 * ts * 1.02)).epsilon(1e-12));

  // at half T_s an interior minimum strictly improves
  const double T = 0.5 * ts;
  const MStarResult lo = m_star(T, k);
  CHECK(lo.m > 0.0);
  CHECK(lo.m < 1.0);
  CHECK(lo.psi < 0.25 / (T * T));
  // grid-scan oracle over the admissible interval
  const double beta = 1.0 / T;
  const double mlo = m_lower(T, k) + 1e-6;
  double best = 1e300;
  for (int i = 0; i <= 600; ++i) {
    const double m = mlo + (1.0 - mlo) * i / 600.0;
    best = std::min(best, psi_1rsb(solve_q1_star(beta, m, k), m, beta, k));
  }
  CHECK(lo.psi <= best + 1e-8);

  // m_star(T)/T stays near the zero-temperature slope
  const GroundState gs = gs_energy_1rsb(k);
  const MStarResult tiny = m_star(0.02, k);
  CHECK(tiny.m / 0.02 == doctest::Approx(gs.mu_star).epsilon(0.05));
}

TEST_CASE("zero temperature ground state") {
  CHECK(z_star(0.0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  // duplicate high-precision evaluation of e_1rsb
  const double mu = 1.0;
  const int k = 3;
  const double z = std::sqrt(2.0 / 3.0 + 0.25) - 0.5;
  const double expected = 0.25 * (mu + 3.0 * z) + 0.5 * std::log((z + 1.0) / z);
  CHECK(e_1rsb(mu, k) == doctest::Approx(expected).epsilon(1e-14));

  for (int k2 : {3, 4, 5}) {
    const GroundState gs = gs_energy_1rsb(k2);
    CHECK(std::fabs(gs.e_star - landscape::eps_star(k2)) < 1e-6);
  }
}

TEST_CASE("monasson curve regimes") {
  const int k = 3;
  const double ts = t_static(k);
  const double td = t_dynamic(1.0, k);

  // between T_s and T_d: positive complexity at m = 1 and f* = f(1)
  {
    const double T = 0.5 * (ts + td);
    const ComplexityCurve c = monasson_curve_auto(T, k, 300);
    const FsFdFstar ext = extract_fs_fd_fstar(c, T);
    std::size_t i1 = 0;
    for (std::size_t i = 1; i < c.m.size(); ++i)
      if (c.m[i] > c.m[i1]) i1 = i;
    CHECK(c.sigma[i1] > 0.0);
    CHECK(ext.f_star == doctest::Approx(c.f[i1]).epsilon(1e-9));
    // f strictly increasing as stored
    for (std::size_t i = 1; i < c.f.size(); ++i) CHECK(c.f[i] > c.f[i - 1]);
  }

  // below T_s: Sigma vanishes at m_*
  {
    const double T = 0.8 * ts;
    const MStarResult ms = m_star(T, k);
    const double beta = 1.0 / T;
    auto phi = [&](double m) { return m * psi_1rsb(solve_q1_star(beta, m, k), m, beta, k); };
    const double dm = 1e-5;
    const double f_at_mstar = (phi(ms.m + dm) - phi(ms.m - dm)) / (2.0 * dm);
    const double sigma_at_mstar = phi(ms.m) - ms.m * f_at_mstar;
    CHECK(std::fabs(sigma_at_mstar) < 1e-8);
    const ComplexityCurve c = monasson_curve_auto(T, k, 400);
    const FsFdFstar ext = extract_fs_fd_fstar(c, T);
    CHECK(ext.f_s == doctest::Approx(f_at_mstar).epsilon(1e-4));
  }

  // no curve above T_d
  CHECK_THROWS_AS(monasson_curve_auto(td * 1.01, k, 100), std::runtime_error);
}

TEST_CASE("zero temperature complexity matches the landscape rate") {
  const int k = 3;
  const double lo = landscape::eps_d(k), hi = landscape::eps_star(k);
  for (int j = 1; j <= 5; ++j) {
    const double eps = lo + j * (hi - lo) / 6.0;
    CHECK(std::fabs(zero_t_complexity(eps, k, 0.02) - landscape::complexity_S(eps, k)) < 1e-4);
  }
}
