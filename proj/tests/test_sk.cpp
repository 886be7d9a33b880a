#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spinglass/graphs.hpp"
#include "spinglass/numerics.hpp"
#include "spinglass/sk.hpp"

using namespace spinglass;
using namespace spinglass::sk;
using namespace spinglass::graphs;

TEST_CASE("rs functional and fixed points") {
  const SkParams p{1.3, 0.0, 0.0};
  CHECK(sk_psi_rs(0.0, 0.0, p) ==
        doctest::Approx(1.3 * 1.3 / 4.0 + std::log(2.0)).epsilon(1e-12));

  // below the linearization threshold the origin is the only fixed point
  const SkRsPoint low = sk_solve_rs(SkParams{0.5, 0.0, 0.0});
  CHECK(low.b == 0.0);
  CHECK(low.q == 0.0);
  CHECK(sk_solve_rs(SkParams{0.999, 0.0, 0.0}).q <= 1e-10);
  CHECK(sk_solve_rs(SkParams{1.01, 0.0, 0.0}).q >= 1e-4);

  // Bayes line: b = q and the scalar fixed point agrees
  for (double lam : {1.2, 1.5, 2.0, 3.0}) {
    const SkRsPoint pt = sk_solve_rs(SkParams{lam, lam, 0.0});
    CHECK(std::fabs(pt.b - pt.q) <= 1e-10);
    CHECK(std::fabs(pt.b - bayes_fixed_point_z2(lam)) <= 1e-8);
  }
  // independent trapezoid oracle for the scalar Bayes map at lambda = 2
  {
    const double lam = 2.0;
    const SkRsPoint pt = sk_solve_rs(SkParams{lam, lam, 0.0});
    const double a = lam * lam * pt.b;
    double val = 0.0;
    {
      const int nn = 40000;
      double acc = 0.0;
      for (int i = 0; i <= nn; ++i) {
        const double g = -12.0 + 24.0 * i / nn;
        const double w = (i == 0 || i == nn) ? 0.5 : 1.0;
        acc += w * std::tanh(a + std::sqrt(a) * g) * std::exp(-0.5 * g * g);
      }
      val = acc * (24.0 / nn) / std::sqrt(2.0 * M_PI);
    }
    CHECK(std::fabs(val - pt.b) < 1e-9);
  }
}

TEST_CASE("rs entropy crosses zero at low temperature") {
  CHECK(sk_rs_entropy(0.05) == doctest::Approx(std::log(2.0)).epsilon(1e-3));
  CHECK(sk_rs_entropy(0.9) > 0.0);
  CHECK(sk_rs_entropy(5.0) < 0.0);
}

TEST_CASE("ladder-measure round trip") {
  const RsbLadder lad{{0.1, 0.5, 0.8}, {0.2, 0.7, 1.0}};
  const ParisiMeasure rho = ladder_to_measure(lad);
  REQUIRE(rho.q.size() == 3);
  CHECK(rho.w[0] == doctest::Approx(0.2));
  CHECK(rho.w[1] == doctest::Approx(0.5));
  CHECK(rho.w[2] == doctest::Approx(0.3));
  const RsbLadder back = measure_to_ladder(rho);
  CHECK(back.m[2] == 1.0);
  CHECK(back.m[0] == doctest::Approx(0.2));
  CHECK_THROWS_AS(ladder_to_measure(RsbLadder{{0.1}, {0.5}}), std::invalid_argument);
}

TEST_CASE("krsb recursion collapses and embeds") {
  // k=0 ladder reproduces the RS value
  for (double q : {0.0, 0.3, 0.7}) {
    const RsbLadder lad{{q}, {1.0}};
    CHECK(std::fabs(krsb_value(lad, 1.4) - sk_psi_rs(0.0, q, SkParams{1.4, 0.0, 0.0})) < 1e-10);
  }
  // embedding a unit atom at 1 with zero weight changes nothing
  {
    const RsbLadder lad{{0.2, 0.6}, {0.4, 1.0}};
    const RsbLadder embedded{{0.2, 0.6, 1.0}, {0.4, 1.0, 1.0}};
    CHECK(std::fabs(krsb_value(lad, 1.7) - krsb_value(embedded, 1.7)) < 1e-10);
  }
  // q1 = q0 at one step: RS value independent of m
  for (double m : {0.2, 0.5, 0.9}) {
    const RsbLadder lad{{0.4, 0.4}, {m, 1.0}};
    CHECK(std::fabs(krsb_value(lad, 1.6) - sk_psi_rs(0.0, 0.4, SkParams{1.6, 0.0, 0.0})) <
          1e-10);
  }
  // more than 4 atoms is out of reach for nested quadrature
  const RsbLadder deep{{0.1, 0.2, 0.3, 0.4, 0.5}, {0.1, 0.3, 0.5, 0.7, 1.0}};
  CHECK_THROWS_AS(krsb_value(deep, 1.0), std::runtime_error);
}

TEST_CASE("parisi functional special measures") {
  const double beta = 1.5;
  const PdeGrid grid = default_grid(beta);
  CHECK(parisi_functional(ParisiMeasure{{0.0}, {1.0}}, beta, grid) ==
        doctest::Approx(beta * beta / 4.0 + std::log(2.0)).epsilon(1e-9));
  CHECK(std::fabs(parisi_functional(ParisiMeasure{{0.4}, {1.0}}, beta, grid) -
                  sk_psi_rs(0.0, 0.4, SkParams{beta, 0.0, 0.0})) < 1e-8);
  CHECK_THROWS_AS(parisi_phi(ParisiMeasure{{0.4}, {1.0}}, beta, PdeGrid{3.0, 2049}),
                  std::invalid_argument);
}

TEST_CASE("pde and nested quadrature agree on random ladders") {
  RngStream rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    RngStream sub = rng.substream(trial);
    const int k = 1 + static_cast<int>(sub.next_u64() % 3);
    const double beta = 0.5 + 2.5 * sub.next_uniform();
    std::vector<double> q(k + 1), m(k + 1);
    for (int i = 0; i <= k; ++i) {
      q[i] = 0.95 * sub.next_uniform();
      m[i] = sub.next_uniform();
    }
    std::sort(q.begin(), q.end());
    std::sort(m.begin(), m.end());
    m[k] = 1.0;
    const RsbLadder lad{q, m};
    const double v1 = krsb_value(lad, beta);
    const double v2 = parisi_functional(ladder_to_measure(lad), beta, default_grid(beta));
    worst = std::max(worst, std::fabs(v1 - v2));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("parisi minimization collapses to rs at high temperature") {
  const double beta = 0.8;
  const ParisiOpt opt = minimize_parisi(1, beta, default_grid(beta));
  auto [qm, rs_min] = minimize_scalar(
      [&](double q) { return sk_psi_rs(0.0, q, SkParams{beta, 0.0, 0.0}); }, 0.0, 0.999, 1e-12);
  CHECK(std::fabs(opt.value - rs_min) < 1e-7);
}

TEST_CASE("parisi value improves with depth") {
  const double beta = 2.0;
  double prev = 1e300;
  for (int k = 1; k <= 3; ++k) {
    const ParisiOpt opt = minimize_parisi(k, beta, default_grid(beta));
    CHECK(opt.value <= prev + 1e-9);
    prev = opt.value;
  }
}

TEST_CASE("maxcut prediction arithmetic") {
  CHECK(p_star_cached() == 0.763166726567);
  CHECK(maxcut_prediction(4.0) == 1.0 + 0.763166726567);
  CHECK(maxcut_prediction(9.0) == 2.25 + 0.763166726567 * 1.5);
}

TEST_CASE("cut values on small graphs") {
  // 4-cycle with alternating signs cuts everything
  Graph c4{4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  CHECK(cut_value(c4, {1, -1, 1, -1}) == 4);
  CHECK(maxcut_bruteforce(c4).cut_value == 4);
  // complete graph on 4 vertices: balanced bipartition cuts 4
  Graph k4{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  const CutResult bk4 = maxcut_bruteforce(k4);
  CHECK(bk4.cut_value == 4);
  CHECK(cut_value(k4, bk4.assignment) == bk4.cut_value);
  CHECK(bk4.assignment[0] == 1);  // gauge
}

TEST_CASE("local search dominates the random cut and brute force dominates all") {
  RngStream rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    RngStream sub = rng.substream(trial);
    const Graph g = er_graph(14, 4.0, sub);
    const CutResult brute = maxcut_bruteforce(g);
    const CutResult local = maxcut_localsearch(g, 5, sub);
    const CutResult rnd = random_cut(g, sub);
    CHECK(cut_value(g, brute.assignment) == brute.cut_value);
    CHECK(cut_value(g, local.assignment) == local.cut_value);
    CHECK(local.cut_value <= brute.cut_value);
    CHECK(local.cut_value >= rnd.cut_value);
  }
}

TEST_CASE("random graph generators") {
  RngStream rng(3);
  const Graph er = er_graph(400, 5.0, rng);
  // mean degree close to d
  CHECK(2.0 * er.edges.size() / 400.0 == doctest::Approx(5.0).epsilon(0.15));

  const Graph reg = reg_graph(100, 3, rng);
  std::vector<int> deg(100, 0);
  for (auto [u, v] : reg.edges) {
    ++deg[u];
    ++deg[v];
  }
  for (int d : deg) CHECK(d == 3);
  CHECK_THROWS_AS(reg_graph(7, 3, rng), std::invalid_argument);
}

TEST_CASE("edge list round trip") {
  RngStream rng(4);
  const Graph g = er_graph(30, 3.0, rng);
  std::stringstream ss;
  write_edge_list(g, ss);
  const Graph back = read_edge_list(ss);
  CHECK(back.n == g.n);
  REQUIRE(back.edges.size() == g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) CHECK(back.edges[i] == g.edges[i]);

  std::stringstream bad("0 0\n");
  CHECK_THROWS_AS(read_edge_list(bad), std::invalid_argument);
}

TEST_CASE("brute force capability bound") {
  Graph big;
  big.n = 25;
  CHECK_THROWS_AS(maxcut_bruteforce(big), std::runtime_error);
}
