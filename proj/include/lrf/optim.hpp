#pragma once

#include <Eigen/Dense>
#include <functional>

namespace lrf {

struct NelderMeadOptions {
  int max_iter = 6000;
  double ftol = 1e-13;
  double xtol = 1e-11;
  double init_step = 0.1;
  int restarts = 1;  // re-expand the simplex around the best point
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0;
  int iters = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x0,
                             const NelderMeadOptions& opt = {});

struct FixedPointOptions {
  double damping = 0.5;
  int anderson_window = 4;
  int plain_iters = 8;  // damped steps before acceleration kicks in
  int max_iter = 600;
  double tol = 1e-10;
};

struct FixedPointResult {
  Eigen::VectorXd x;
  double residual = 0;
  int iters = 0;
  bool converged = false;
};

// Anderson-accelerated damped iteration for x = g(x)
FixedPointResult anderson_fixed_point(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
                                      Eigen::VectorXd x0, const FixedPointOptions& opt = {});

// root of a continuous scalar function by bisection; requires a sign change
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12,
              int max_iter = 200);

}  // namespace lrf
