#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "spinglass/rng.hpp"

namespace spinglass {

// log-potential of the semicircle law: Omega(x) = \int log|l - x| s(dl),
// closed form on both branches, continuous at |x| = 2.
double semicircle_omega(double x);

// Stieltjes transform \int (z - l)^{-1} s(dl) for real |z| > 2.
// Throws std::domain_error inside the bulk.
double semicircle_stieltjes(double z);

// Semicircle CDF on [-2, 2] (used for distributional checks).
double semicircle_cdf(double x);

// Bracketed bisection; requires f(lo) * f(hi) <= 0, |f(root)| driven below
// tol (and the bracket below machine width). Throws std::invalid_argument
// when there is no sign change.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-12);

// Golden-section minimization on [lo, hi]; returns (argmin, min).
std::pair<double, double> minimize_scalar(const std::function<double(double)>& f,
                                          double lo, double hi, double tol = 1e-10);

// GOE(n): symmetric, off-diagonal entries N(0,1/n), diagonal N(0,2/n).
// This convention is shared by every module.
Eigen::MatrixXd goe_sample(int n, RngStream& rng);

// Eigenvalues of a symmetric matrix, sorted ascending. Inputs asymmetric
// beyond 1e-10 are rejected.
std::vector<double> sym_eigvals(const Eigen::MatrixXd& m);

}  // namespace spinglass
